#include "busod/model.h"

#include <algorithm>
#include <chrono>
#include <set>

#include "fmt/format.h"

#include "busod/errors.h"

namespace busod {

namespace {

bool is_lower_hex(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
}

std::string normalize_hex(std::string_view raw, std::size_t length,
                          bool& ok) {
  ok = raw.size() == length;
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c >= 'A' && c <= 'F') {
      c = static_cast<char>(c - 'A' + 'a');
    }
    ok = ok && is_lower_hex(c);
    out.push_back(c);
  }
  return out;
}

bool read_digits(std::string_view s, std::size_t pos, std::size_t n,
                 int& out) {
  out = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') {
      return false;
    }
    out = out * 10 + (s[i] - '0');
  }
  return true;
}

}  // namespace

timestamp::timestamp(seconds_t seconds) : seconds_{seconds} {
  if (seconds < 0) {
    throw invalid_value(fmt::format("negative timestamp {}", seconds));
  }
}

timestamp parse_timestamp(std::string_view raw) {
  auto const fail = [&]() {
    return malformed_timestamp(fmt::format(
        "malformed timestamp \"{}\" (expected YYYY-MM-DDThh:mm:ssZ)", raw));
  };
  if (raw.size() != 20 || raw[4] != '-' || raw[7] != '-' || raw[10] != 'T' ||
      raw[13] != ':' || raw[16] != ':' || raw[19] != 'Z') {
    throw fail();
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!read_digits(raw, 0, 4, y) || !read_digits(raw, 5, 2, mo) ||
      !read_digits(raw, 8, 2, d) || !read_digits(raw, 11, 2, h) ||
      !read_digits(raw, 14, 2, mi) || !read_digits(raw, 17, 2, s)) {
    throw fail();
  }
  using namespace std::chrono;
  auto const ymd = year{y} / month{static_cast<unsigned>(mo)} /
                   day{static_cast<unsigned>(d)};
  if (y < 1970 || !ymd.ok() || h > 23 || mi > 59 || s > 59) {
    throw fail();
  }
  auto const days = sys_days{ymd}.time_since_epoch().count();
  return timestamp{static_cast<seconds_t>(days) * kSecondsPerDay +
                   h * kSecondsPerHour + mi * 60 + s};
}

std::string format_timestamp(timestamp t) {
  using namespace std::chrono;
  auto const day_count = day_index(t);
  auto const ymd = year_month_day{sys_days{days{day_count}}};
  auto const sod = t.seconds() - day_count * kSecondsPerDay;
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z",
                     static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()), sod / 3600,
                     (sod / 60) % 60, sod % 60);
}

std::int64_t day_index(timestamp t) { return t.seconds() / kSecondsPerDay; }

int hour_of_day(timestamp t) {
  return static_cast<int>((t.seconds() % kSecondsPerDay) / kSecondsPerHour);
}

day_kind day_kind_of(timestamp t) {
  using namespace std::chrono;
  auto const wd = weekday{sys_days{days{day_index(t)}}};
  if (wd == Saturday) {
    return day_kind::saturday;
  }
  if (wd == Sunday) {
    return day_kind::sunday;
  }
  return day_kind::weekday;
}

std::string_view to_string(day_kind k) {
  switch (k) {
    case day_kind::weekday: return "weekday";
    case day_kind::saturday: return "saturday";
    case day_kind::sunday: return "sunday";
  }
  return "?";
}

std::optional<day_kind> parse_day_kind(std::string_view s) {
  if (s == "weekday") {
    return day_kind::weekday;
  }
  if (s == "saturday") {
    return day_kind::saturday;
  }
  if (s == "sunday") {
    return day_kind::sunday;
  }
  return std::nullopt;
}

std::string_view to_string(direction d) {
  return d == direction::outward ? "outward" : "inward";
}

std::optional<direction> parse_direction(std::string_view s) {
  if (s == "outward") {
    return direction::outward;
  }
  if (s == "inward") {
    return direction::inward;
  }
  return std::nullopt;
}

device_id device_id::parse(std::string_view raw) {
  bool ok = false;
  auto v = normalize_hex(raw, 12, ok);
  if (!ok) {
    throw malformed_device_id(fmt::format(
        "malformed device id \"{}\" (expected 12 hex digits)", raw));
  }
  return device_id{std::move(v)};
}

device_id validate_device_id(std::string_view raw) {
  return device_id::parse(raw);
}

device_class device_class::parse(std::string_view raw) {
  bool ok = false;
  auto v = normalize_hex(raw, 6, ok);
  if (!ok) {
    throw malformed_device_class(fmt::format(
        "malformed device class \"{}\" (expected 6 hex digits)", raw));
  }
  return device_class{std::move(v)};
}

bool is_token(std::string_view s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  });
}

stop_id stop_id::parse(std::string_view raw) {
  if (!is_token(raw)) {
    throw invalid_value(fmt::format("invalid stop id \"{}\"", raw));
  }
  return stop_id{std::string{raw}};
}

void validate(device_trip const& t) {
  if (t.first_seen > t.last_seen) {
    throw invalid_value("device trip ends before it starts");
  }
  if (t.sighting_count < 1) {
    throw invalid_value("device trip without sightings");
  }
}

void validate(localization_record const& r) {
  if (!(r.lat >= -90.0 && r.lat <= 90.0)) {
    throw invalid_value(fmt::format("latitude {} out of range", r.lat));
  }
  if (!(r.lon >= -180.0 && r.lon <= 180.0)) {
    throw invalid_value(fmt::format("longitude {} out of range", r.lon));
  }
  if (!(r.odometer_m >= 0.0)) {
    throw invalid_value("negative odometer");
  }
  if (r.in_service) {
    if (!is_token(r.route_id) || !is_token(r.run_id)) {
      throw invalid_value("in-service record needs route_id and run_id");
    }
  } else if (!r.route_id.empty() || !r.run_id.empty()) {
    throw invalid_value("out-of-service record must not carry route/run");
  }
}

void validate(stop_visit const& v) {
  if (!is_token(v.run_id) || !is_token(v.route_id)) {
    throw invalid_value("stop visit needs route_id and run_id");
  }
  if (v.door_open_at > v.door_close_at) {
    throw invalid_value("stop visit closes before it opens");
  }
}

void validate(run_interval const& r) {
  if (!is_token(r.run_id) || !is_token(r.route_id)) {
    throw invalid_value("run needs route_id and run_id");
  }
  if (r.service_start > r.service_end) {
    throw invalid_value("run " + r.run_id + " ends before it starts");
  }
}

void validate(passenger_journey const& j) {
  if (!is_token(j.run_id) || !is_token(j.route_id)) {
    throw invalid_value("journey needs route_id and run_id");
  }
  if (j.board_stop == j.alight_stop) {
    throw invalid_value("journey boards and alights at " + j.board_stop.str());
  }
  if (!(j.board_at < j.alight_at)) {
    throw invalid_value("journey alights before boarding");
  }
}

void validate(ticket_validation const& t) {
  if (!is_token(t.ticket_type)) {
    throw invalid_value("invalid ticket type \"" + t.ticket_type + "\"");
  }
}

network_model network_model::build(
    std::map<stop_id, stop_info> stops,
    std::map<std::string, std::vector<stop_id>> routes,
    std::map<std::string, direction> directions) {
  for (auto const& [id, info] : stops) {
    if (!(info.lat >= -90.0 && info.lat <= 90.0) ||
        !(info.lon >= -180.0 && info.lon <= 180.0)) {
      throw invalid_value("stop " + id.str() + " has invalid coordinates");
    }
  }
  for (auto const& [route_id, route_stops] : routes) {
    if (!is_token(route_id)) {
      throw invalid_value("invalid route id \"" + route_id + "\"");
    }
    if (route_stops.size() < 2) {
      throw invalid_value("route " + route_id + " lists fewer than 2 stops");
    }
    std::set<stop_id> seen;
    for (auto const& s : route_stops) {
      if (!stops.contains(s)) {
        throw unknown_stop(route_id, s.str());
      }
      if (!seen.insert(s).second) {
        throw invalid_value("route " + route_id + " repeats stop " + s.str());
      }
    }
  }
  for (auto const& [route_id, d] : directions) {
    if (!routes.contains(route_id)) {
      throw invalid_value("direction given for unknown route " + route_id);
    }
  }
  network_model m;
  m.stops_ = std::move(stops);
  m.routes_ = std::move(routes);
  m.directions_ = std::move(directions);
  return m;
}

std::vector<stop_id> const* network_model::route(
    std::string const& route_id) const {
  auto const it = routes_.find(route_id);
  return it == routes_.end() ? nullptr : &it->second;
}

stop_info const* network_model::stop(stop_id const& id) const {
  auto const it = stops_.find(id);
  return it == stops_.end() ? nullptr : &it->second;
}

void od_matrix::add(stop_id const& origin, stop_id const& destination,
                    std::int64_t count) {
  if (origin == destination) {
    throw invalid_value("OD cell with origin = destination " + origin.str());
  }
  if (count < 1) {
    throw invalid_value("OD cell count must be >= 1");
  }
  cells_[{origin, destination}] += count;
  total_ += count;
}

std::int64_t od_matrix::at(stop_id const& origin,
                           stop_id const& destination) const {
  auto const it = cells_.find({origin, destination});
  return it == cells_.end() ? 0 : it->second;
}

}  // namespace busod
