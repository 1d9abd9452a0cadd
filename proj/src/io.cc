#include "busod/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <tuple>

#include "fmt/format.h"
#include "json.hpp"

#include "busod/correlation.h"
#include "busod/errors.h"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace busod {

namespace {

constexpr auto kSightingsHeader = "at,device,class";
constexpr auto kLocalizationHeader =
    "at,lat,lon,odometer_m,doors_open,in_service,route_id,run_id";
constexpr auto kTicketsHeader = "at,ticket_type";
constexpr auto kStopsHeader = "stop_id,name,lat,lon";
constexpr auto kRoutesHeader = "route_id,seq,stop_id";
constexpr auto kDirectionsHeader = "route_id,direction";
constexpr auto kOdHeader = "origin,destination,count";
constexpr auto kTripsHeader = "device,first_seen,last_seen,sighting_count";
constexpr auto kVisitsHeader =
    "run_id,route_id,stop_id,door_open_at,door_close_at,sequence_index";
constexpr auto kRunsHeader = "run_id,route_id,service_start,service_end";

constexpr std::string_view kFilterComment = "# filter: ";
constexpr std::string_view kTotalComment = "# total_journeys: ";
constexpr std::string_view kMarginComment = "# margin_s: ";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto const pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw invalid_value(fmt::format("invalid integer \"{}\"", s));
  }
  return v;
}

double parse_double(std::string_view s) {
  double v = 0;
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() ||
      !std::isfinite(v)) {
    throw invalid_value(fmt::format("invalid number \"{}\"", s));
  }
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true") {
    return true;
  }
  if (s == "false") {
    return false;
  }
  throw invalid_value(fmt::format("invalid boolean \"{}\"", s));
}

std::string parse_token(std::string_view s, std::string_view what) {
  if (!is_token(s)) {
    throw invalid_value(fmt::format("invalid {} \"{}\"", what, s));
  }
  return std::string{s};
}

// Line-oriented reader shared by the CSV and JSON Lines formats. Skips blank
// lines and, for CSV, "#" comment lines.
class line_reader {
public:
  line_reader(std::istream& in, std::string source)
      : in_{in}, source_{std::move(source)} {}

  bool next(std::string_view& out) {
    while (std::getline(in_, buf_)) {
      ++line_;
      if (!buf_.empty() && buf_.back() == '\r') {
        buf_.pop_back();
      }
      if (buf_.empty()) {
        continue;
      }
      out = buf_;
      return true;
    }
    if (in_.bad()) {
      throw io_error("read failed: " + source_);
    }
    return false;
  }

  [[noreturn]] void fail(std::string const& what) const {
    throw format_error(source_, line_, what);
  }

  // Runs fn, converting any data error into a format_error at this line.
  template <typename Fn>
  auto guarded(Fn&& fn) const {
    try {
      return fn();
    } catch (format_error const&) {
      throw;
    } catch (error const& e) {
      fail(e.what());
    } catch (nlohmann::json::exception const& e) {
      fail(e.what());
    }
  }

  std::size_t line() const { return line_; }
  std::string const& source() const { return source_; }

private:
  std::istream& in_;
  std::string source_;
  std::string buf_;
  std::size_t line_{0};
};

class csv_reader {
public:
  csv_reader(std::istream& in, std::string source, std::string_view header)
      : lines_{in, std::move(source)}, header_{header} {}

  // Yields the fields of the next data row; false at end of input.
  bool next(std::vector<std::string_view>& fields) {
    std::string_view line;
    while (lines_.next(line)) {
      if (line.front() == '#') {
        comments_.emplace_back(line);
        continue;
      }
      if (!seen_header_) {
        if (line != header_) {
          lines_.fail(fmt::format("expected header \"{}\"", header_));
        }
        seen_header_ = true;
        continue;
      }
      fields = split(line, ',');
      auto const expected =
          static_cast<std::size_t>(std::count(header_.begin(), header_.end(),
                                              ',')) +
          1;
      if (fields.size() != expected) {
        lines_.fail(fmt::format("expected {} fields, found {}", expected,
                                fields.size()));
      }
      return true;
    }
    return false;
  }

  template <typename Fn>
  auto guarded(Fn&& fn) const {
    return lines_.guarded(std::forward<Fn>(fn));
  }
  [[noreturn]] void fail(std::string const& what) const { lines_.fail(what); }
  std::size_t line() const { return lines_.line(); }
  std::vector<std::string> const& comments() const { return comments_; }

private:
  line_reader lines_;
  std::string_view header_;
  bool seen_header_{false};
  std::vector<std::string> comments_;
};

std::ifstream open_in(fs::path const& p) {
  std::ifstream in{p, std::ios::binary};
  if (!in) {
    throw io_error("cannot open " + p.string());
  }
  return in;
}

void write_file(fs::path const& p,
                std::function<void(std::ostream&)> const& body) {
  std::ofstream out{p, std::ios::binary | std::ios::trunc};
  if (!out) {
    throw io_error("cannot write " + p.string());
  }
  body(out);
  out.flush();
  if (!out) {
    throw io_error("write failed: " + p.string());
  }
}

char const* bool_str(bool b) { return b ? "true" : "false"; }

bool localization_less(localization_record const& a,
                       localization_record const& b) {
  return std::tie(a.at, a.run_id, a.route_id, a.in_service, a.doors_open,
                  a.odometer_m, a.lat, a.lon) <
         std::tie(b.at, b.run_id, b.route_id, b.in_service, b.doors_open,
                  b.odometer_m, b.lat, b.lon);
}

ojson trip_json(device_trip const& t) {
  return ojson{{"device", t.device.str()},
               {"first_seen", format_timestamp(t.first_seen)},
               {"last_seen", format_timestamp(t.last_seen)},
               {"sighting_count", t.sighting_count}};
}

}  // namespace

std::string format_decimal(double v) {
  auto s = fmt::format("{:.6f}", v);
  while (!s.empty() && s.back() == '0') {
    s.pop_back();
  }
  if (!s.empty() && s.back() == '.') {
    s.pop_back();
  }
  if (s == "-0") {
    s = "0";
  }
  return s;
}

// -- sightings ---------------------------------------------------------------

std::vector<device_sighting> read_sightings(std::istream& in,
                                            std::string const& source) {
  csv_reader r{in, source, kSightingsHeader};
  std::vector<device_sighting> out;
  std::vector<std::string_view> f;
  while (r.next(f)) {
    out.push_back(r.guarded([&] {
      return device_sighting{device_id::parse(f[1]), device_class::parse(f[2]),
                             parse_timestamp(f[0])};
    }));
  }
  std::sort(begin(out), end(out), [](auto const& a, auto const& b) {
    return std::tie(a.at, a.device, a.cls) < std::tie(b.at, b.device, b.cls);
  });
  return out;
}

std::vector<device_sighting> load_sightings(fs::path const& p) {
  auto in = open_in(p);
  return read_sightings(in, p.string());
}

void write_sightings(std::ostream& out,
                     std::span<device_sighting const> sightings) {
  out << kSightingsHeader << '\n';
  for (auto const& s : sightings) {
    out << format_timestamp(s.at) << ',' << s.device.str() << ','
        << s.cls.str() << '\n';
  }
}

void write_sightings(fs::path const& p,
                     std::span<device_sighting const> sightings) {
  write_file(p, [&](std::ostream& out) { write_sightings(out, sightings); });
}

// -- localization ------------------------------------------------------------

void check_odometer_monotonic(std::span<localization_record const> records) {
  localization_record const* prev = nullptr;
  for (auto const& r : records) {
    if (r.in_service && prev != nullptr && prev->in_service &&
        prev->run_id == r.run_id && r.odometer_m < prev->odometer_m) {
      throw monotonicity_error(r.run_id);
    }
    prev = &r;
  }
}

std::vector<localization_record> read_localization(std::istream& in,
                                                   std::string const& source) {
  csv_reader r{in, source, kLocalizationHeader};
  std::vector<localization_record> out;
  std::vector<std::string_view> f;
  while (r.next(f)) {
    out.push_back(r.guarded([&] {
      localization_record rec{parse_timestamp(f[0]),
                              parse_double(f[1]),
                              parse_double(f[2]),
                              parse_double(f[3]),
                              parse_bool(f[4]),
                              parse_bool(f[5]),
                              std::string{f[6]},
                              std::string{f[7]}};
      validate(rec);
      return rec;
    }));
  }
  std::sort(begin(out), end(out), localization_less);
  check_odometer_monotonic(out);
  return out;
}

std::vector<localization_record> load_localization(fs::path const& p) {
  auto in = open_in(p);
  return read_localization(in, p.string());
}

void write_localization(std::ostream& out,
                        std::span<localization_record const> records) {
  out << kLocalizationHeader << '\n';
  for (auto const& r : records) {
    out << format_timestamp(r.at) << ',' << format_decimal(r.lat) << ','
        << format_decimal(r.lon) << ',' << format_decimal(r.odometer_m) << ','
        << bool_str(r.doors_open) << ',' << bool_str(r.in_service) << ','
        << r.route_id << ',' << r.run_id << '\n';
  }
}

void write_localization(fs::path const& p,
                        std::span<localization_record const> records) {
  write_file(p, [&](std::ostream& out) { write_localization(out, records); });
}

// -- tickets -----------------------------------------------------------------

std::vector<ticket_validation> read_tickets(std::istream& in,
                                            std::string const& source) {
  csv_reader r{in, source, kTicketsHeader};
  std::vector<ticket_validation> out;
  std::vector<std::string_view> f;
  while (r.next(f)) {
    out.push_back(r.guarded([&] {
      ticket_validation t{parse_timestamp(f[0]), std::string{f[1]}};
      validate(t);
      return t;
    }));
  }
  std::sort(begin(out), end(out));
  return out;
}

std::vector<ticket_validation> load_tickets(fs::path const& p) {
  auto in = open_in(p);
  return read_tickets(in, p.string());
}

void write_tickets(std::ostream& out,
                   std::span<ticket_validation const> tickets) {
  out << kTicketsHeader << '\n';
  for (auto const& t : tickets) {
    out << format_timestamp(t.at) << ',' << t.ticket_type << '\n';
  }
}

void write_tickets(fs::path const& p,
                   std::span<ticket_validation const> tickets) {
  write_file(p, [&](std::ostream& out) { write_tickets(out, tickets); });
}

// -- network -----------------------------------------------------------------

network_model read_network(std::istream& stops_in,
                           std::string const& stops_src,
                           std::istream& routes_in,
                           std::string const& routes_src,
                           std::istream* directions_in,
                           std::string const& directions_src) {
  std::map<stop_id, stop_info> stops;
  {
    csv_reader r{stops_in, stops_src, kStopsHeader};
    std::vector<std::string_view> f;
    while (r.next(f)) {
      r.guarded([&] {
        auto id = stop_id::parse(f[0]);
        stop_info info{std::string{f[1]}, parse_double(f[2]),
                       parse_double(f[3])};
        if (!(info.lat >= -90.0 && info.lat <= 90.0) ||
            !(info.lon >= -180.0 && info.lon <= 180.0)) {
          throw invalid_value("coordinates out of range");
        }
        if (!stops.emplace(id, std::move(info)).second) {
          throw invalid_value("duplicate stop " + id.str());
        }
      });
    }
  }

  std::map<std::string, std::map<std::int64_t, stop_id>> ordered;
  std::map<std::string, std::size_t> first_line;
  {
    csv_reader r{routes_in, routes_src, kRoutesHeader};
    std::vector<std::string_view> f;
    while (r.next(f)) {
      r.guarded([&] {
        auto route = parse_token(f[0], "route id");
        auto const seq = parse_int(f[1]);
        auto stop = stop_id::parse(f[2]);
        first_line.emplace(route, r.line());
        if (!ordered[route].emplace(seq, std::move(stop)).second) {
          throw invalid_value(
              fmt::format("duplicate seq {} in route {}", seq, route));
        }
      });
    }
  }

  std::map<std::string, direction> directions;
  if (directions_in != nullptr) {
    csv_reader r{*directions_in, directions_src, kDirectionsHeader};
    std::vector<std::string_view> f;
    while (r.next(f)) {
      r.guarded([&] {
        auto route = parse_token(f[0], "route id");
        auto const d = parse_direction(f[1]);
        if (!d) {
          throw invalid_value(fmt::format("invalid direction \"{}\"", f[1]));
        }
        directions[route] = *d;
      });
    }
  }

  std::map<std::string, std::vector<stop_id>> routes;
  for (auto& [route_id, by_seq] : ordered) {
    auto& list = routes[route_id];
    for (auto& [seq, s] : by_seq) {
      list.push_back(s);
    }
    if (list.size() < 2) {
      throw format_error(routes_src, first_line[route_id],
                         "route " + route_id + " lists fewer than 2 stops");
    }
    for (auto const& s : list) {
      if (!stops.contains(s)) {
        throw unknown_stop(route_id, s.str());
      }
    }
  }
  try {
    return network_model::build(std::move(stops), std::move(routes),
                                std::move(directions));
  } catch (unknown_stop const&) {
    throw;
  } catch (invalid_value const& e) {
    throw format_error(routes_src, 0, e.what());
  }
}

network_model load_network(fs::path const& dir) {
  auto const stops_path = dir / "stops.csv";
  auto const routes_path = dir / "routes.csv";
  auto const directions_path = dir / "directions.csv";
  auto stops = open_in(stops_path);
  auto routes = open_in(routes_path);
  if (fs::exists(directions_path)) {
    auto directions = open_in(directions_path);
    return read_network(stops, stops_path.string(), routes,
                        routes_path.string(), &directions,
                        directions_path.string());
  }
  return read_network(stops, stops_path.string(), routes,
                      routes_path.string());
}

void write_network(fs::path const& dir, network_model const& net) {
  write_file(dir / "stops.csv", [&](std::ostream& out) {
    out << kStopsHeader << '\n';
    for (auto const& [id, info] : net.stops()) {
      out << id.str() << ',' << info.name << ',' << format_decimal(info.lat)
          << ',' << format_decimal(info.lon) << '\n';
    }
  });
  write_file(dir / "routes.csv", [&](std::ostream& out) {
    out << kRoutesHeader << '\n';
    for (auto const& [route_id, stops] : net.routes()) {
      for (auto i = 0U; i != stops.size(); ++i) {
        out << route_id << ',' << i << ',' << stops[i].str() << '\n';
      }
    }
  });
  if (!net.directions().empty()) {
    write_file(dir / "directions.csv", [&](std::ostream& out) {
      out << kDirectionsHeader << '\n';
      for (auto const& [route_id, d] : net.directions()) {
        out << route_id << ',' << to_string(d) << '\n';
      }
    });
  }
}

// -- OD matrix ---------------------------------------------------------------

od_matrix read_od_matrix(std::istream& in, std::string const& source) {
  csv_reader r{in, source, kOdHeader};
  od_matrix m;
  std::vector<std::string_view> f;
  while (r.next(f)) {
    r.guarded([&] {
      auto const origin = stop_id::parse(f[0]);
      auto const destination = stop_id::parse(f[1]);
      if (m.at(origin, destination) != 0) {
        throw invalid_value("duplicate OD cell");
      }
      m.add(origin, destination, parse_int(f[2]));
    });
  }
  std::optional<std::int64_t> total;
  for (auto const& c : r.comments()) {
    if (c.starts_with(kFilterComment)) {
      m.set_filter_descriptor(c.substr(kFilterComment.size()));
    } else if (c.starts_with(kTotalComment)) {
      total = r.guarded(
          [&] { return parse_int(std::string_view{c}.substr(kTotalComment.size())); });
    }
  }
  if (total && *total != m.total_journeys()) {
    r.fail(fmt::format("total_journeys {} does not match cell sum {}", *total,
                       m.total_journeys()));
  }
  return m;
}

od_matrix load_od_matrix(fs::path const& p) {
  auto in = open_in(p);
  return read_od_matrix(in, p.string());
}

void write_od_matrix(std::ostream& out, od_matrix const& m) {
  auto descriptor = m.filter_descriptor();
  std::replace(begin(descriptor), end(descriptor), '\n', ' ');
  out << kFilterComment << descriptor << '\n';
  out << kTotalComment << m.total_journeys() << '\n';
  out << kOdHeader << '\n';
  for (auto const& [key, count] : m.cells()) {
    out << key.first.str() << ',' << key.second.str() << ',' << count << '\n';
  }
}

void write_od_matrix(od_matrix const& m, fs::path const& p) {
  write_file(p, [&](std::ostream& out) { write_od_matrix(out, m); });
}

// -- trips -------------------------------------------------------------------

std::vector<device_trip> read_trips(std::istream& in,
                                    std::string const& source) {
  csv_reader r{in, source, kTripsHeader};
  std::vector<device_trip> out;
  std::vector<std::string_view> f;
  while (r.next(f)) {
    out.push_back(r.guarded([&] {
      device_trip t{device_id::parse(f[0]), parse_timestamp(f[1]),
                    parse_timestamp(f[2]), parse_int(f[3])};
      validate(t);
      return t;
    }));
  }
  std::sort(begin(out), end(out), [](auto const& a, auto const& b) {
    return std::tie(a.device, a.first_seen, a.last_seen) <
           std::tie(b.device, b.first_seen, b.last_seen);
  });
  return out;
}

std::vector<device_trip> load_trips(fs::path const& p) {
  auto in = open_in(p);
  return read_trips(in, p.string());
}

void write_trips(std::ostream& out, std::span<device_trip const> trips) {
  out << kTripsHeader << '\n';
  for (auto const& t : trips) {
    out << t.device.str() << ',' << format_timestamp(t.first_seen) << ','
        << format_timestamp(t.last_seen) << ',' << t.sighting_count << '\n';
  }
}

void write_trips(fs::path const& p, std::span<device_trip const> trips) {
  write_file(p, [&](std::ostream& out) { write_trips(out, trips); });
}

// -- stop visits -------------------------------------------------------------

std::vector<stop_visit> read_stop_visits(std::istream& in,
                                         std::string const& source,
                                         std::optional<seconds_t>* margin_s) {
  csv_reader r{in, source, kVisitsHeader};
  std::vector<stop_visit> out;
  std::vector<std::string_view> f;
  while (r.next(f)) {
    out.push_back(r.guarded([&] {
      auto const seq = parse_int(f[5]);
      if (seq < 0) {
        throw invalid_value("negative sequence_index");
      }
      stop_visit v{std::string{f[0]},    std::string{f[1]},
                   stop_id::parse(f[2]), parse_timestamp(f[3]),
                   parse_timestamp(f[4]), static_cast<std::size_t>(seq)};
      validate(v);
      return v;
    }));
  }
  if (margin_s != nullptr) {
    margin_s->reset();
    for (auto const& c : r.comments()) {
      if (c.starts_with(kMarginComment)) {
        *margin_s = r.guarded([&] {
          return parse_int(std::string_view{c}.substr(kMarginComment.size()));
        });
      }
    }
  }
  std::sort(begin(out), end(out), [](auto const& a, auto const& b) {
    return std::tie(a.door_open_at, a.run_id, a.sequence_index) <
           std::tie(b.door_open_at, b.run_id, b.sequence_index);
  });
  return out;
}

std::vector<stop_visit> load_stop_visits(fs::path const& p,
                                         std::optional<seconds_t>* margin_s) {
  auto in = open_in(p);
  return read_stop_visits(in, p.string(), margin_s);
}

void write_stop_visits(std::ostream& out, std::span<stop_visit const> visits,
                       std::optional<seconds_t> margin_s) {
  if (margin_s) {
    out << kMarginComment << *margin_s << '\n';
  }
  out << kVisitsHeader << '\n';
  for (auto const& v : visits) {
    out << v.run_id << ',' << v.route_id << ',' << v.stop.str() << ','
        << format_timestamp(v.door_open_at) << ','
        << format_timestamp(v.door_close_at) << ',' << v.sequence_index
        << '\n';
  }
}

void write_stop_visits(fs::path const& p, std::span<stop_visit const> visits,
                       std::optional<seconds_t> margin_s) {
  write_file(p, [&](std::ostream& out) {
    write_stop_visits(out, visits, margin_s);
  });
}

// -- runs --------------------------------------------------------------------

std::vector<run_interval> read_runs(std::istream& in,
                                    std::string const& source) {
  csv_reader r{in, source, kRunsHeader};
  std::vector<run_interval> out;
  std::vector<std::string_view> f;
  while (r.next(f)) {
    out.push_back(r.guarded([&] {
      run_interval run{std::string{f[0]}, std::string{f[1]},
                       parse_timestamp(f[2]), parse_timestamp(f[3])};
      validate(run);
      return run;
    }));
  }
  std::sort(begin(out), end(out), [](auto const& a, auto const& b) {
    return std::tie(a.service_start, a.run_id) <
           std::tie(b.service_start, b.run_id);
  });
  return out;
}

std::vector<run_interval> load_runs(fs::path const& p) {
  auto in = open_in(p);
  return read_runs(in, p.string());
}

void write_runs(std::ostream& out, std::span<run_interval const> runs) {
  out << kRunsHeader << '\n';
  for (auto const& r : runs) {
    out << r.run_id << ',' << r.route_id << ','
        << format_timestamp(r.service_start) << ','
        << format_timestamp(r.service_end) << '\n';
  }
}

void write_runs(fs::path const& p, std::span<run_interval const> runs) {
  write_file(p, [&](std::ostream& out) { write_runs(out, runs); });
}

// -- journeys ----------------------------------------------------------------

std::vector<passenger_journey> read_journeys(std::istream& in,
                                             std::string const& source) {
  line_reader r{in, source};
  std::vector<passenger_journey> out;
  std::string_view line;
  while (r.next(line)) {
    out.push_back(r.guarded([&] {
      auto const j = nlohmann::json::parse(line);
      auto const str = [&](char const* key) {
        return j.at(key).get<std::string>();
      };
      passenger_journey pj{device_id::parse(str("device")),
                           str("run_id"),
                           str("route_id"),
                           stop_id::parse(str("board_stop")),
                           stop_id::parse(str("alight_stop")),
                           parse_timestamp(str("board_at")),
                           parse_timestamp(str("alight_at"))};
      validate(pj);
      return pj;
    }));
  }
  return out;
}

std::vector<passenger_journey> load_journeys(fs::path const& p) {
  auto in = open_in(p);
  return read_journeys(in, p.string());
}

void write_journeys(std::ostream& out,
                    std::span<passenger_journey const> journeys) {
  for (auto const& j : journeys) {
    out << ojson{{"device", j.device.str()},
                 {"run_id", j.run_id},
                 {"route_id", j.route_id},
                 {"board_stop", j.board_stop.str()},
                 {"alight_stop", j.alight_stop.str()},
                 {"board_at", format_timestamp(j.board_at)},
                 {"alight_at", format_timestamp(j.alight_at)}}
               .dump()
        << '\n';
  }
}

void write_journeys(fs::path const& p,
                    std::span<passenger_journey const> journeys) {
  write_file(p, [&](std::ostream& out) { write_journeys(out, journeys); });
}

// -- rejects -----------------------------------------------------------------

std::vector<rejected_trip> read_rejects(std::istream& in,
                                        std::string const& source) {
  line_reader r{in, source};
  std::vector<rejected_trip> out;
  std::string_view line;
  while (r.next(line)) {
    out.push_back(r.guarded([&] {
      auto const j = nlohmann::json::parse(line);
      auto const reason =
          parse_reject_reason(j.at("reason").get<std::string>());
      if (!reason) {
        throw invalid_value("unknown reject reason");
      }
      device_trip t{device_id::parse(j.at("device").get<std::string>()),
                    parse_timestamp(j.at("first_seen").get<std::string>()),
                    parse_timestamp(j.at("last_seen").get<std::string>()),
                    j.at("sighting_count").get<std::int64_t>()};
      validate(t);
      return rejected_trip{std::move(t), *reason};
    }));
  }
  return out;
}

std::vector<rejected_trip> load_rejects(fs::path const& p) {
  auto in = open_in(p);
  return read_rejects(in, p.string());
}

void write_rejects(std::ostream& out,
                   std::span<rejected_trip const> rejects) {
  for (auto const& r : rejects) {
    auto j = trip_json(r.trip);
    j["reason"] = to_string(r.reason);
    out << j.dump() << '\n';
  }
}

void write_rejects(fs::path const& p, std::span<rejected_trip const> rejects) {
  write_file(p, [&](std::ostream& out) { write_rejects(out, rejects); });
}

// -- dataset -----------------------------------------------------------------

dataset load_dataset(fs::path const& dir) {
  dataset d;
  d.sightings = load_sightings(dir / "sightings.csv");
  d.localization = load_localization(dir / "localization.csv");
  if (fs::exists(dir / "tickets.csv")) {
    d.tickets = load_tickets(dir / "tickets.csv");
  }
  d.network = load_network(dir);
  return d;
}

}  // namespace busod
