#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace busod {

// Whole seconds. Durations and offsets share this type.
using seconds_t = std::int64_t;

constexpr seconds_t kSecondsPerHour = 3600;
constexpr seconds_t kSecondsPerDay = 86400;

// UTC seconds since the Unix epoch.
class timestamp {
public:
  constexpr timestamp() = default;
  explicit timestamp(seconds_t seconds);

  constexpr seconds_t seconds() const { return seconds_; }

  friend constexpr auto operator<=>(timestamp, timestamp) = default;

  friend timestamp operator+(timestamp t, seconds_t d) {
    return timestamp{t.seconds_ + d};
  }
  friend timestamp operator-(timestamp t, seconds_t d) {
    return timestamp{t.seconds_ - d};
  }
  friend constexpr seconds_t operator-(timestamp a, timestamp b) {
    return a.seconds_ - b.seconds_;
  }

private:
  seconds_t seconds_{0};
};

// Accepts exactly "YYYY-MM-DDThh:mm:ssZ".
timestamp parse_timestamp(std::string_view raw);
std::string format_timestamp(timestamp t);

// Days since 1970-01-01 (UTC).
std::int64_t day_index(timestamp t);
int hour_of_day(timestamp t);

enum class day_kind : std::uint8_t { weekday, saturday, sunday };

day_kind day_kind_of(timestamp t);
std::string_view to_string(day_kind k);
std::optional<day_kind> parse_day_kind(std::string_view s);

// 12 lowercase hex digits.
class device_id {
public:
  static device_id parse(std::string_view raw);

  std::string const& str() const { return value_; }

  friend auto operator<=>(device_id const&, device_id const&) = default;

private:
  explicit device_id(std::string v) : value_{std::move(v)} {}
  std::string value_;
};

device_id validate_device_id(std::string_view raw);

// 6 lowercase hex digits.
class device_class {
public:
  static device_class parse(std::string_view raw);

  std::string const& str() const { return value_; }

  friend auto operator<=>(device_class const&, device_class const&) = default;

private:
  explicit device_class(std::string v) : value_{std::move(v)} {}
  std::string value_;
};

// Non-empty, no whitespace. Used for stop, route and run identifiers.
bool is_token(std::string_view s);

class stop_id {
public:
  static stop_id parse(std::string_view raw);

  std::string const& str() const { return value_; }

  friend auto operator<=>(stop_id const&, stop_id const&) = default;

private:
  explicit stop_id(std::string v) : value_{std::move(v)} {}
  std::string value_;
};

struct device_sighting {
  device_id device;
  device_class cls;
  timestamp at;

  friend auto operator<=>(device_sighting const&,
                          device_sighting const&) = default;
};

struct device_trip {
  device_id device;
  timestamp first_seen;
  timestamp last_seen;
  std::int64_t sighting_count{1};

  friend bool operator==(device_trip const&, device_trip const&) = default;
};

void validate(device_trip const&);

struct localization_record {
  timestamp at;
  double lat{};
  double lon{};
  double odometer_m{};
  bool doors_open{false};
  bool in_service{false};
  std::string route_id;
  std::string run_id;

  friend bool operator==(localization_record const&,
                         localization_record const&) = default;
};

void validate(localization_record const&);

struct stop_visit {
  std::string run_id;
  std::string route_id;
  stop_id stop;
  timestamp door_open_at;
  timestamp door_close_at;
  std::size_t sequence_index{0};

  friend bool operator==(stop_visit const&, stop_visit const&) = default;
};

void validate(stop_visit const&);

// One in-service interval of the bus on one route.
struct run_interval {
  std::string run_id;
  std::string route_id;
  timestamp service_start;
  timestamp service_end;

  friend bool operator==(run_interval const&, run_interval const&) = default;
};

void validate(run_interval const&);

struct passenger_journey {
  device_id device;
  std::string run_id;
  std::string route_id;
  stop_id board_stop;
  stop_id alight_stop;
  timestamp board_at;
  timestamp alight_at;

  seconds_t duration() const { return alight_at - board_at; }

  friend bool operator==(passenger_journey const&,
                         passenger_journey const&) = default;
};

void validate(passenger_journey const&);

struct ticket_validation {
  timestamp at;
  std::string ticket_type;

  friend auto operator<=>(ticket_validation const&,
                          ticket_validation const&) = default;
};

void validate(ticket_validation const&);

struct stop_info {
  std::string name;
  double lat{};
  double lon{};

  friend bool operator==(stop_info const&, stop_info const&) = default;
};

enum class direction : std::uint8_t { outward, inward };

std::string_view to_string(direction d);
std::optional<direction> parse_direction(std::string_view s);

class network_model {
public:
  network_model() = default;

  // Throws unknown_stop when a route references an undefined stop and
  // invalid_value for routes with fewer than two or repeated stops.
  static network_model build(
      std::map<stop_id, stop_info> stops,
      std::map<std::string, std::vector<stop_id>> routes,
      std::map<std::string, direction> directions = {});

  std::map<stop_id, stop_info> const& stops() const { return stops_; }
  std::map<std::string, std::vector<stop_id>> const& routes() const {
    return routes_;
  }
  // Optional per-route travel direction; routes without one are unlabeled.
  std::map<std::string, direction> const& directions() const {
    return directions_;
  }

  std::vector<stop_id> const* route(std::string const& route_id) const;
  stop_info const* stop(stop_id const& id) const;

  friend bool operator==(network_model const&, network_model const&) = default;

private:
  std::map<stop_id, stop_info> stops_;
  std::map<std::string, std::vector<stop_id>> routes_;
  std::map<std::string, direction> directions_;
};

// Journey counts keyed by (origin, destination).
class od_matrix {
public:
  using key = std::pair<stop_id, stop_id>;

  od_matrix() = default;
  explicit od_matrix(std::string filter_descriptor)
      : filter_descriptor_{std::move(filter_descriptor)} {}

  // Adds count (>= 1) journeys to the cell. Rejects origin == destination.
  void add(stop_id const& origin, stop_id const& destination,
           std::int64_t count = 1);

  std::int64_t at(stop_id const& origin, stop_id const& destination) const;

  std::map<key, std::int64_t> const& cells() const { return cells_; }
  std::int64_t total_journeys() const { return total_; }
  std::string const& filter_descriptor() const { return filter_descriptor_; }
  void set_filter_descriptor(std::string d) {
    filter_descriptor_ = std::move(d);
  }

  friend bool operator==(od_matrix const&, od_matrix const&) = default;

private:
  std::map<key, std::int64_t> cells_;
  std::int64_t total_{0};
  std::string filter_descriptor_;
};

}  // namespace busod
