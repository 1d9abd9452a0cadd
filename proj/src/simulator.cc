#include "busod/simulator.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "fmt/format.h"
#include "json.hpp"

#include "busod/errors.h"
#include "busod/random.h"
#include "busod/stop_events.h"

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace busod {

namespace {

// Depot windows keep this far from any run so that the default 300 s trip
// gap can never join them to in-service sightings.
constexpr seconds_t kDepotMargin = 600;
constexpr seconds_t kMinDepotWindow = 60;
constexpr seconds_t kMaxDepotWindow = 1800;

constexpr std::array kPhoneClasses{"5a020c", "7a020c", "50020c", "58020c",
                                   "72020c", "5a0204"};
constexpr std::array kTicketTypes{"single", "pass", "student"};

seconds_t parse_clock(std::string const& s) {
  int h = 0, m = 0, sec = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in{s};
  if (!(in >> h >> c1 >> m >> c2 >> sec) || c1 != ':' || c2 != ':' || h < 0 ||
      h > 23 || m < 0 || m > 59 || sec < 0 || sec > 59 || !in.eof()) {
    throw invalid_value("invalid time of day \"" + s + "\" (hh:mm:ss)");
  }
  return h * kSecondsPerHour + m * 60 + sec;
}

std::vector<seconds_t> legs_from_json(json const& j, std::size_t n_legs) {
  if (j.is_array()) {
    return j.get<std::vector<seconds_t>>();
  }
  return std::vector<seconds_t>(n_legs, j.get<seconds_t>());
}

// Concrete per-day service derived from the schedule.
struct run_plan {
  std::string run_id;
  std::string route_id;
  std::vector<stop_id> const* stops;
  std::vector<timestamp> open;
  std::vector<timestamp> close;
  std::vector<seconds_t> leg_s;
  std::int64_t day;

  timestamp start() const { return open.front(); }
  timestamp end() const { return close.back(); }
};

std::vector<run_plan> plan_runs(scenario const& sc) {
  std::vector<scheduled_run const*> daily;
  for (auto const& r : sc.runs) {
    daily.push_back(&r);
  }
  std::sort(begin(daily), end(daily), [](auto a, auto b) {
    return a->start_of_day_s < b->start_of_day_s;
  });

  std::vector<run_plan> plans;
  for (auto day = 0; day < sc.days; ++day) {
    auto const midnight = sc.start + day * kSecondsPerDay;
    for (auto const* r : daily) {
      run_plan p{fmt::format("{}_d{:03}", r->run_id, day), r->route_id,
                 sc.network.route(r->route_id), {}, {}, r->leg_s, day};
      auto t = midnight + r->start_of_day_s;
      for (auto i = 0U; i != p.stops->size(); ++i) {
        p.open.push_back(t);
        p.close.push_back(t + r->dwell_s);
        if (i + 1 != p.stops->size()) {
          t = p.close.back() + r->leg_s[i];
        }
      }
      if (!plans.empty() && p.start() <= plans.back().end()) {
        throw invalid_value("run " + p.run_id + " overlaps " +
                            plans.back().run_id);
      }
      if (p.end() >= midnight + kSecondsPerDay) {
        throw invalid_value("run " + r->run_id + " runs past midnight");
      }
      plans.push_back(std::move(p));
    }
  }
  return plans;
}

device_id random_device(rng& r, std::set<device_id>& used) {
  while (true) {
    auto const v = r.next() & 0xFFFFFFFFFFFFULL;
    auto id = device_id::parse(fmt::format("{:012x}", v));
    if (used.insert(id).second) {
      return id;
    }
  }
}

device_class random_class(rng& r) {
  return device_class::parse(kPhoneClasses[static_cast<std::size_t>(
      r.uniform_int(0, kPhoneClasses.size() - 1))]);
}

struct presence {
  timestamp from;
  timestamp to;
  device_id device;
  device_class cls;
};

geo_point stop_point(network_model const& net, stop_id const& s) {
  auto const* info = net.stop(s);
  return {info->lat, info->lon};
}

std::string ts(timestamp t) { return format_timestamp(t); }

}  // namespace

void validate(scenario const& sc) {
  if (sc.days < 1) {
    throw invalid_value("scenario needs at least one day");
  }
  if (sc.passengers_per_day < 0 || sc.bystanders_per_day < 0 ||
      sc.depot_devices < 0) {
    throw invalid_value("scenario counts must be >= 0");
  }
  if (sc.discovery_min_s < 1 || sc.discovery_min_s > sc.discovery_max_s) {
    throw invalid_value("need 1 <= discovery_min_s <= discovery_max_s");
  }
  if (!(sc.penetration >= 0.0 && sc.penetration <= 1.0)) {
    throw invalid_value("penetration must lie in [0, 1]");
  }
  if (!(sc.miss_prob >= 0.0 && sc.miss_prob < 1.0)) {
    throw invalid_value("miss_prob must lie in [0, 1)");
  }
  if (sc.depot_record_interval_s < 1) {
    throw invalid_value("depot_record_interval_s must be >= 1");
  }
  for (auto const v : sc.demand_profile) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw invalid_value("demand profile entries must be finite and >= 0");
    }
  }
  std::set<std::string> ids;
  for (auto const& r : sc.runs) {
    if (!is_token(r.run_id) || !ids.insert(r.run_id).second) {
      throw invalid_value("invalid or duplicate run id \"" + r.run_id + "\"");
    }
    auto const* route = sc.network.route(r.route_id);
    if (route == nullptr) {
      throw unknown_route(r.route_id);
    }
    if (r.leg_s.size() + 1 != route->size()) {
      throw invalid_value("run " + r.run_id + " needs one leg per stop gap");
    }
    if (r.dwell_s < 0 || r.start_of_day_s < 0 ||
        r.start_of_day_s >= kSecondsPerDay ||
        std::any_of(r.leg_s.begin(), r.leg_s.end(),
                    [](auto l) { return l < 1; })) {
      throw invalid_value("run " + r.run_id + " has invalid timing");
    }
  }
  for (auto const& w : sc.od_weights) {
    if (!(w.weight > 0.0) || !std::isfinite(w.weight)) {
      throw invalid_value("OD weights must be > 0");
    }
    if (w.origin == w.destination) {
      throw invalid_value("OD weight with origin = destination");
    }
    auto const served = std::any_of(
        sc.network.routes().begin(), sc.network.routes().end(),
        [&](auto const& kv) {
          auto const& stops = kv.second;
          auto const o = std::find(stops.begin(), stops.end(), w.origin);
          return o != stops.end() &&
                 std::find(o + 1, stops.end(), w.destination) != stops.end();
        });
    if (!served) {
      throw invalid_value("OD pair " + w.origin.str() + "->" +
                          w.destination.str() + " is on no route");
    }
  }
}

scenario parse_scenario(std::string_view text) {
  try {
    auto const j = json::parse(text);
    scenario sc;

    std::map<stop_id, stop_info> stops;
    for (auto const& s : j.at("stops")) {
      stops.emplace(stop_id::parse(s.at("id").get<std::string>()),
                    stop_info{s.value("name", s.at("id").get<std::string>()),
                              s.at("lat").get<double>(),
                              s.at("lon").get<double>()});
    }
    std::map<std::string, std::vector<stop_id>> routes;
    std::map<std::string, direction> directions;
    for (auto const& r : j.at("routes")) {
      auto const id = r.at("id").get<std::string>();
      auto& list = routes[id];
      for (auto const& s : r.at("stops")) {
        list.push_back(stop_id::parse(s.get<std::string>()));
      }
      if (r.contains("direction")) {
        auto const d = parse_direction(r.at("direction").get<std::string>());
        if (!d) {
          throw invalid_value("invalid direction for route " + id);
        }
        directions[id] = *d;
      }
    }
    sc.network = network_model::build(std::move(stops), std::move(routes),
                                      std::move(directions));

    auto const route_size = [&](std::string const& id) {
      auto const* r = sc.network.route(id);
      if (r == nullptr) {
        throw unknown_route(id);
      }
      return r->size();
    };
    for (auto const& r : j.value("runs", json::array())) {
      auto const route_id = r.at("route_id").get<std::string>();
      sc.runs.push_back(scheduled_run{
          r.at("run_id").get<std::string>(), route_id,
          parse_clock(r.at("start").get<std::string>()),
          legs_from_json(r.at("leg_seconds"), route_size(route_id) - 1),
          r.value("dwell_seconds", seconds_t{30})});
    }
    if (j.contains("run_pattern")) {
      auto const& p = j.at("run_pattern");
      auto const pattern_routes = p.at("routes").get<std::vector<std::string>>();
      auto const first = parse_clock(p.at("first").get<std::string>());
      auto const last = parse_clock(p.at("last_start").get<std::string>());
      auto const headway = p.at("headway_seconds").get<seconds_t>();
      if (headway < 1 || pattern_routes.empty()) {
        throw invalid_value("run_pattern needs routes and headway >= 1");
      }
      auto i = 0U;
      for (auto t = first; t <= last; t += headway, ++i) {
        auto const& route_id = pattern_routes[i % pattern_routes.size()];
        sc.runs.push_back(scheduled_run{
            fmt::format("{}-{:02}{:02}", route_id, t / 3600, (t / 60) % 60),
            route_id, t,
            legs_from_json(p.at("leg_seconds"), route_size(route_id) - 1),
            p.value("dwell_seconds", seconds_t{30})});
      }
    }

    sc.start = parse_timestamp(j.value("start_date", std::string{"2008-06-02"}) +
                               "T00:00:00Z");
    sc.days = j.value("days", std::int64_t{1});
    sc.passengers_per_day = j.value("passengers_per_day", std::int64_t{0});
    for (auto const& w : j.value("od_weights", json::array())) {
      sc.od_weights.push_back(
          od_weight{stop_id::parse(w.at("origin").get<std::string>()),
                    stop_id::parse(w.at("destination").get<std::string>()),
                    w.value("weight", 1.0)});
    }
    if (j.contains("demand_profile")) {
      auto const profile = j.at("demand_profile").get<std::vector<double>>();
      if (profile.size() != 24) {
        throw invalid_value("demand_profile needs 24 entries");
      }
      std::copy(profile.begin(), profile.end(), sc.demand_profile.begin());
    }
    sc.penetration = j.value("penetration", sc.penetration);
    sc.discovery_min_s = j.value("discovery_min_s", sc.discovery_min_s);
    sc.discovery_max_s = j.value("discovery_max_s", sc.discovery_max_s);
    sc.miss_prob = j.value("miss_prob", sc.miss_prob);
    sc.bystanders_per_day = j.value("bystanders_per_day", sc.bystanders_per_day);
    sc.depot_devices = j.value("depot_devices", sc.depot_devices);
    sc.seed = j.value("seed", sc.seed);
    sc.depot_record_interval_s =
        j.value("depot_record_interval_s", sc.depot_record_interval_s);
    validate(sc);
    return sc;
  } catch (json::exception const& e) {
    throw invalid_value(std::string{"scenario: "} + e.what());
  }
}

scenario load_scenario(fs::path const& p) {
  std::ifstream in{p, std::ios::binary};
  if (!in) {
    throw io_error("cannot open " + p.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

simulation simulate(scenario const& sc) {
  validate(sc);
  auto const plans = plan_runs(sc);
  auto const timeline_end = sc.start + sc.days * kSecondsPerDay - 1;
  auto const& net = sc.network;

  simulation sim;
  sim.data.network = net;
  sim.truth.start = sc.start;
  sim.truth.days = sc.days;
  sim.truth.passengers_per_day = sc.passengers_per_day;
  sim.truth.penetration = sc.penetration;
  for (auto const& p : plans) {
    sim.runs.push_back(run_interval{p.run_id, p.route_id, p.start(), p.end()});
  }

  // -- demand --------------------------------------------------------------
  std::map<std::pair<stop_id, stop_id>, double> weights;
  for (auto const& w : sc.od_weights) {
    weights[{w.origin, w.destination}] += w.weight;
  }
  for (auto const& [pair, w] : weights) {
    auto const served = std::any_of(plans.begin(), plans.end(), [&](auto& p) {
      if (p.day != 0) {
        return false;
      }
      auto const o = std::find(p.stops->begin(), p.stops->end(), pair.first);
      return o != p.stops->end() &&
             std::find(o + 1, p.stops->end(), pair.second) != p.stops->end();
    });
    if (!served) {
      throw infeasible_schedule("no run serves " + pair.first.str() + "->" +
                                pair.second.str());
    }
  }

  struct candidate {
    std::size_t plan;
    std::size_t board;
    std::size_t alight;
  };
  std::vector<std::vector<candidate>> candidates(
      static_cast<std::size_t>(sc.days));
  std::vector<std::vector<double>> cumulative(static_cast<std::size_t>(sc.days));
  for (auto pi = 0U; pi != plans.size(); ++pi) {
    auto const& p = plans[pi];
    auto const day = static_cast<std::size_t>(p.day);
    for (auto b = 0U; b != p.stops->size(); ++b) {
      auto const hour_w =
          sc.demand_profile[static_cast<std::size_t>(hour_of_day(p.open[b]))];
      for (auto a = b + 1; a != p.stops->size(); ++a) {
        double od_w = 1.0;
        if (!sc.od_weights.empty()) {
          auto const it = weights.find({(*p.stops)[b], (*p.stops)[a]});
          od_w = it == weights.end() ? 0.0 : it->second;
        }
        auto const w = od_w * hour_w;
        if (w > 0.0) {
          auto const prev =
              cumulative[day].empty() ? 0.0 : cumulative[day].back();
          candidates[day].push_back({pi, b, a});
          cumulative[day].push_back(prev + w);
        }
      }
    }
  }

  rng r{sc.seed};
  std::set<device_id> used_ids;
  std::vector<presence> present;

  for (auto day = 0U; day != static_cast<std::size_t>(sc.days); ++day) {
    if (sc.passengers_per_day > 0 && candidates[day].empty()) {
      throw infeasible_schedule(
          fmt::format("no run can carry demand on day {}", day));
    }
    for (auto n = 0; n < sc.passengers_per_day; ++n) {
      auto const x = r.uniform01() * cumulative[day].back();
      auto const idx = std::min<std::size_t>(
          static_cast<std::size_t>(
              std::upper_bound(cumulative[day].begin(), cumulative[day].end(),
                               x) -
              cumulative[day].begin()),
          candidates[day].size() - 1);
      auto const& c = candidates[day][idx];
      auto const& p = plans[c.plan];

      auto const ticket_at = p.open[c.board] +
                             r.uniform_int(0, p.close[c.board] - p.open[c.board]);
      auto const type = kTicketTypes[static_cast<std::size_t>(
          r.uniform_int(0, kTicketTypes.size() - 1))];
      sim.data.tickets.push_back(ticket_validation{ticket_at, type});

      true_journey tj{std::nullopt,
                      p.run_id,
                      p.route_id,
                      (*p.stops)[c.board],
                      (*p.stops)[c.alight],
                      p.open[c.board],
                      p.open[c.alight],
                      p.open[c.board],
                      p.close[c.alight]};
      if (r.bernoulli(sc.penetration)) {
        tj.device = random_device(r, used_ids);
        present.push_back(presence{tj.onboard_from, tj.onboard_to, *tj.device,
                                   random_class(r)});
      }
      sim.truth.journeys.push_back(std::move(tj));
    }

    std::vector<std::pair<std::size_t, std::size_t>> day_visits;
    for (auto pi = 0U; pi != plans.size(); ++pi) {
      if (plans[pi].day == static_cast<std::int64_t>(day)) {
        for (auto k = 0U; k != plans[pi].stops->size(); ++k) {
          day_visits.emplace_back(pi, k);
        }
      }
    }
    for (auto n = 0; n < sc.bystanders_per_day && !day_visits.empty(); ++n) {
      auto const [pi, k] = day_visits[static_cast<std::size_t>(
          r.uniform_int(0, static_cast<std::int64_t>(day_visits.size()) - 1))];
      auto const& p = plans[pi];
      true_bystander b{random_device(r, used_ids), p.run_id, (*p.stops)[k],
                       p.open[k], p.close[k]};
      present.push_back(presence{b.from, b.to, b.device, random_class(r)});
      sim.truth.bystanders.push_back(std::move(b));
    }
  }

  // -- out-of-service gaps and depot devices --------------------------------
  std::vector<std::pair<timestamp, timestamp>> gaps;
  {
    auto cursor = sc.start;
    for (auto const& p : plans) {
      if (cursor < p.start()) {
        gaps.emplace_back(cursor, p.start() - 1);
      }
      cursor = p.end() + 1;
    }
    if (cursor <= timeline_end) {
      gaps.emplace_back(cursor, timeline_end);
    }
  }
  for (auto d = 0; d < sc.depot_devices; ++d) {
    auto const device = random_device(r, used_ids);
    auto const cls = random_class(r);
    for (auto day = 0; day < sc.days; ++day) {
      auto const midnight = sc.start + day * kSecondsPerDay;
      std::vector<std::pair<timestamp, timestamp>> eligible;
      for (auto const& g : gaps) {
        if (g.first >= midnight && g.first < midnight + kSecondsPerDay &&
            g.second - g.first >= 2 * kDepotMargin + kMinDepotWindow) {
          eligible.push_back(g);
        }
      }
      if (eligible.empty()) {
        continue;
      }
      auto const& g = eligible[static_cast<std::size_t>(
          r.uniform_int(0, static_cast<std::int64_t>(eligible.size()) - 1))];
      auto const lo = g.first + kDepotMargin;
      auto const hi = g.second - kDepotMargin;
      auto const len =
          r.uniform_int(kMinDepotWindow, std::min(kMaxDepotWindow, hi - lo));
      auto const from = lo + r.uniform_int(0, (hi - lo) - len);
      sim.truth.depot_windows.push_back(
          true_depot_window{device, from, from + len});
      present.push_back(presence{from, from + len, device, cls});
    }
  }

  // -- localization ----------------------------------------------------------
  {
    auto& loc = sim.data.localization;
    double odometer = 0.0;
    geo_point pos = plans.empty()
                        ? geo_point{net.stops().begin()->second.lat,
                                    net.stops().begin()->second.lon}
                        : stop_point(net, plans.front().stops->front());
    auto const depot_span = [&](timestamp from, timestamp to) {
      for (auto t = from; t <= to; t = t + sc.depot_record_interval_s) {
        loc.push_back(localization_record{t, pos.lat, pos.lon, odometer, false,
                                          false, "", ""});
      }
    };
    auto cursor = sc.start;
    for (auto const& p : plans) {
      if (cursor < p.start()) {
        depot_span(cursor, p.start() - 1);
      }
      std::vector<geo_point> pts;
      std::vector<double> leg_m;
      for (auto const& s : *p.stops) {
        pts.push_back(stop_point(net, s));
      }
      for (auto i = 0U; i + 1 < pts.size(); ++i) {
        leg_m.push_back(haversine_m(pts[i], pts[i + 1]));
      }
      auto const base = odometer;
      double done = 0.0;
      std::size_t k = 0;
      for (auto t = p.start(); t <= p.end(); t = t + 1) {
        while (k + 1 < pts.size() && t >= p.open[k + 1]) {
          done += leg_m[k];
          ++k;
        }
        auto const doors = t <= p.close[k];
        geo_point at = pts[k];
        double dist = base + done;
        if (!doors) {
          auto const frac = static_cast<double>(t - p.close[k]) /
                            static_cast<double>(p.leg_s[k]);
          at = {pts[k].lat + frac * (pts[k + 1].lat - pts[k].lat),
                pts[k].lon + frac * (pts[k + 1].lon - pts[k].lon)};
          dist += frac * leg_m[k];
        }
        loc.push_back(localization_record{t, at.lat, at.lon, dist, doors, true,
                                          p.route_id, p.run_id});
      }
      odometer = base + done;
      pos = pts.back();
      cursor = p.end() + 1;
    }
    if (cursor <= timeline_end) {
      depot_span(cursor, timeline_end);
    }
  }

  // -- discovery rounds ------------------------------------------------------
  std::stable_sort(begin(present), end(present), [](auto& a, auto& b) {
    return std::tie(a.from, a.to, a.device) < std::tie(b.from, b.to, b.device);
  });
  {
    std::size_t next = 0;
    std::vector<presence const*> active;
    std::vector<device_sighting> round;
    for (auto t = sc.start; t <= timeline_end;
         t = t + r.uniform_int(sc.discovery_min_s, sc.discovery_max_s)) {
      while (next < present.size() && present[next].from <= t) {
        active.push_back(&present[next++]);
      }
      std::erase_if(active, [&](auto const* p) { return p->to < t; });
      round.clear();
      for (auto const* p : active) {
        if (!r.bernoulli(sc.miss_prob)) {
          round.push_back(device_sighting{p->device, p->cls, t});
        }
      }
      std::sort(begin(round), end(round), [](auto const& a, auto const& b) {
        return a.device < b.device;
      });
      sim.data.sightings.insert(sim.data.sightings.end(), round.begin(),
                                round.end());
    }
  }

  std::stable_sort(begin(sim.data.tickets), end(sim.data.tickets));
  return sim;
}

// -- ground truth files -------------------------------------------------------

void write_ground_truth(std::ostream& out, ground_truth const& gt) {
  out << ojson{{"kind", "scenario"},
               {"start", ts(gt.start)},
               {"days", gt.days},
               {"passengers_per_day", gt.passengers_per_day},
               {"penetration", gt.penetration}}
             .dump()
      << '\n';
  for (auto const& j : gt.journeys) {
    out << ojson{{"kind", "journey"},
                 {"device", j.device ? j.device->str() : "non-bluetooth"},
                 {"discoverable", j.discoverable()},
                 {"run_id", j.run_id},
                 {"route_id", j.route_id},
                 {"board_stop", j.board_stop.str()},
                 {"alight_stop", j.alight_stop.str()},
                 {"board_at", ts(j.board_at)},
                 {"alight_at", ts(j.alight_at)},
                 {"onboard_from", ts(j.onboard_from)},
                 {"onboard_to", ts(j.onboard_to)}}
               .dump()
        << '\n';
  }
  for (auto const& b : gt.bystanders) {
    out << ojson{{"kind", "bystander"}, {"device", b.device.str()},
                 {"run_id", b.run_id},  {"stop", b.stop.str()},
                 {"from", ts(b.from)},  {"to", ts(b.to)}}
               .dump()
        << '\n';
  }
  for (auto const& d : gt.depot_windows) {
    out << ojson{{"kind", "depot"},
                 {"device", d.device.str()},
                 {"from", ts(d.from)},
                 {"to", ts(d.to)}}
               .dump()
        << '\n';
  }
}

ground_truth read_ground_truth(std::istream& in, std::string const& source) {
  ground_truth gt;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      auto const j = json::parse(line);
      auto const str = [&](char const* k) { return j.at(k).get<std::string>(); };
      auto const kind = str("kind");
      if (kind == "scenario") {
        gt.start = parse_timestamp(str("start"));
        gt.days = j.at("days").get<std::int64_t>();
        gt.passengers_per_day = j.at("passengers_per_day").get<std::int64_t>();
        gt.penetration = j.at("penetration").get<double>();
      } else if (kind == "journey") {
        true_journey tj{std::nullopt,
                        str("run_id"),
                        str("route_id"),
                        stop_id::parse(str("board_stop")),
                        stop_id::parse(str("alight_stop")),
                        parse_timestamp(str("board_at")),
                        parse_timestamp(str("alight_at")),
                        parse_timestamp(str("onboard_from")),
                        parse_timestamp(str("onboard_to"))};
        if (j.at("discoverable").get<bool>()) {
          tj.device = device_id::parse(str("device"));
        }
        gt.journeys.push_back(std::move(tj));
      } else if (kind == "bystander") {
        gt.bystanders.push_back(true_bystander{
            device_id::parse(str("device")), str("run_id"),
            stop_id::parse(str("stop")), parse_timestamp(str("from")),
            parse_timestamp(str("to"))});
      } else if (kind == "depot") {
        gt.depot_windows.push_back(true_depot_window{
            device_id::parse(str("device")), parse_timestamp(str("from")),
            parse_timestamp(str("to"))});
      } else {
        throw invalid_value("unknown record kind \"" + kind + "\"");
      }
    } catch (json::exception const& e) {
      throw format_error(source, line_no, e.what());
    } catch (format_error const&) {
      throw;
    } catch (error const& e) {
      throw format_error(source, line_no, e.what());
    }
  }
  return gt;
}

ground_truth load_ground_truth(fs::path const& p) {
  std::ifstream in{p, std::ios::binary};
  if (!in) {
    throw io_error("cannot open " + p.string());
  }
  return read_ground_truth(in, p.string());
}

void write_simulation(simulation const& sim, fs::path const& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw io_error("cannot create " + dir.string() + ": " + ec.message());
  }
  write_sightings(dir / "sightings.csv", sim.data.sightings);
  write_localization(dir / "localization.csv", sim.data.localization);
  write_tickets(dir / "tickets.csv", sim.data.tickets);
  write_network(dir, sim.data.network);
  std::ofstream out{dir / "ground_truth.jsonl",
                    std::ios::binary | std::ios::trunc};
  if (!out) {
    throw io_error("cannot write ground_truth.jsonl");
  }
  write_ground_truth(out, sim.truth);
  if (!out) {
    throw io_error("write failed: ground_truth.jsonl");
  }
}

// -- evaluation ---------------------------------------------------------------

od_matrix truth_od_matrix(ground_truth const& gt) {
  od_matrix m{"ground truth, discoverable passengers"};
  for (auto const& j : gt.journeys) {
    if (j.discoverable()) {
      m.add(j.board_stop, j.alight_stop);
    }
  }
  return m;
}

occupancy_curve truth_occupancy(ground_truth const& gt) {
  std::vector<passenger_journey> all;
  auto const placeholder = device_id::parse("000000000000");
  for (auto const& j : gt.journeys) {
    all.push_back(passenger_journey{j.device.value_or(placeholder), j.run_id,
                                    j.route_id, j.board_stop, j.alight_stop,
                                    j.board_at, j.alight_at});
  }
  return occupancy_by_hour(all, std::max<std::int64_t>(1, gt.days));
}

evaluation_report evaluate(std::span<passenger_journey const> recovered,
                           ground_truth const& truth,
                           std::span<ticket_validation const> tickets,
                           std::span<run_interval const> runs) {
  using key = std::tuple<device_id, std::string, stop_id, stop_id>;
  std::map<key, std::int64_t> expected;
  evaluation_report rep;
  for (auto const& j : truth.journeys) {
    if (j.discoverable()) {
      ++expected[{*j.device, j.run_id, j.board_stop, j.alight_stop}];
      ++rep.truth;
    }
  }
  od_matrix recovered_od;
  for (auto const& j : recovered) {
    ++rep.recovered;
    recovered_od.add(j.board_stop, j.alight_stop);
    auto const it = expected.find({j.device, j.run_id, j.board_stop,
                                   j.alight_stop});
    if (it != expected.end() && it->second > 0) {
      --it->second;
      ++rep.true_positives;
    }
  }
  rep.zero_predictions = rep.recovered == 0;
  rep.precision = rep.recovered == 0 ? 1.0
                                     : static_cast<double>(rep.true_positives) /
                                           static_cast<double>(rep.recovered);
  rep.recall = rep.truth == 0 ? 1.0
                              : static_cast<double>(rep.true_positives) /
                                    static_cast<double>(rep.truth);

  auto const truth_od = truth_od_matrix(truth);
  std::set<od_matrix::key> cells;
  for (auto const& [k, v] : truth_od.cells()) {
    cells.insert(k);
  }
  for (auto const& [k, v] : recovered_od.cells()) {
    cells.insert(k);
  }
  for (auto const& k : cells) {
    rep.od_l1 += std::abs(truth_od.at(k.first, k.second) -
                          recovered_od.at(k.first, k.second));
  }

  if (!tickets.empty() && !runs.empty()) {
    auto const series = hourly_counts(recovered, tickets, runs);
    try {
      auto const tc = ticket_correlation(series.device_trips, series.tickets);
      rep.penetration_estimate = tc.penetration;
      rep.penetration_error = std::abs(tc.penetration - truth.penetration);
    } catch (degenerate_series const&) {
    }
  }
  return rep;
}

std::string to_json(evaluation_report const& rep) {
  ojson j{{"recovered", rep.recovered},
          {"truth", rep.truth},
          {"true_positives", rep.true_positives},
          {"precision", rep.precision},
          {"recall", rep.recall},
          {"zero_predictions", rep.zero_predictions},
          {"od_l1", rep.od_l1}};
  j["penetration_estimate"] =
      rep.penetration_estimate ? ojson(*rep.penetration_estimate) : ojson();
  j["penetration_error"] =
      rep.penetration_error ? ojson(*rep.penetration_error) : ojson();
  return j.dump();
}

}  // namespace busod
