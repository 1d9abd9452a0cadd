#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "busod/model.h"

namespace busod {

// Selects journeys by their boarding time and route. Unset fields match
// everything.
struct time_filter {
  std::optional<std::pair<int, int>> hour_range;  // [from, to) within 0..24
  std::set<day_kind> day_kinds{day_kind::weekday, day_kind::saturday,
                               day_kind::sunday};
  std::optional<std::string> route_id;
  std::optional<direction> dir;
};

void validate(time_filter const&);
std::string describe(time_filter const&);

// The direction criterion is resolved through network.directions(); a
// journey on a route without a direction never matches it.
bool matches(time_filter const&, passenger_journey const&,
             network_model const* network = nullptr);

od_matrix build_od_matrix(std::span<passenger_journey const>,
                          time_filter const& filter = {},
                          network_model const* network = nullptr);

struct occupancy_curve {
  // Passenger-seconds onboard falling into each hour of day, summed over the
  // whole dataset. Exact.
  std::array<std::int64_t, 24> onboard_seconds{};
  std::int64_t service_days{1};

  // Time-weighted mean onboard count for hour h averaged over service days.
  double value(int hour) const;
  std::array<double, 24> values() const;
};

// A journey counts as onboard over [board_at, alight_at).
occupancy_curve occupancy_by_hour(std::span<passenger_journey const>,
                                  std::int64_t service_days);

struct duration_histogram {
  seconds_t bucket_width_s{300};
  // counts[i] holds durations in [i * width, (i + 1) * width). Trailing
  // buckets past the longest journey are omitted.
  std::vector<std::int64_t> counts;
};

duration_histogram trip_duration_histogram(std::span<passenger_journey const>,
                                           seconds_t bucket_width_s = 300);

struct ticket_correlation_report {
  std::vector<std::pair<std::int64_t, std::int64_t>> hourly_pairs;
  double r_squared{0.0};
  // Least-squares slope through the origin of tickets on device trips.
  double scale_factor{0.0};
  // 1 / scale_factor.
  double penetration{0.0};
};

// r_squared is the squared Pearson correlation of the two series. Throws
// degenerate_series when the device series is constant or has fewer than two
// nonzero hours, invalid_value when the lengths differ.
ticket_correlation_report ticket_correlation(
    std::span<std::int64_t const> device_trips,
    std::span<std::int64_t const> tickets);

enum class hour_binning : std::uint8_t {
  hour_of_day,  // 24 bins pooled over all days
  absolute      // one bin per calendar hour
};

struct hourly_series {
  std::vector<std::int64_t> hour;  // hour of day, or hours since epoch
  std::vector<std::int64_t> device_trips;
  std::vector<std::int64_t> tickets;
};

// Aligned per-hour counts of journeys (by board_at) and ticket validations.
// Only hours in which the bus is in service are kept.
hourly_series hourly_counts(std::span<passenger_journey const>,
                            std::span<ticket_validation const>,
                            std::span<run_interval const>,
                            hour_binning binning = hour_binning::hour_of_day);

struct individual_od {
  struct key {
    stop_id origin;
    stop_id destination;
    day_kind kind;
    int band_start;  // first hour of the band

    friend auto operator<=>(key const&, key const&) = default;
  };

  device_id device;
  int band_width_h{4};
  std::map<key, std::int64_t> cells;
};

// band_width_h must divide 24.
individual_od build_individual_od(std::span<passenger_journey const>,
                                  device_id const& device,
                                  int band_width_h = 4);

struct destination_prediction {
  stop_id destination;
  double confidence;
};

// Most frequent destination among cells matching origin, day kind and the
// band holding `hour`. Ties go to the lexically smallest destination.
std::optional<destination_prediction> predict_destination(
    individual_od const&, stop_id const& origin, day_kind kind, int hour);

struct cotravel_report {
  // device_a < device_b.
  std::map<std::pair<device_id, device_id>, std::int64_t> pair_encounters;
  // Connected components over pairs with at least min_encounters, each
  // sorted, ordered by first member.
  std::vector<std::vector<device_id>> groups;
};

// An encounter is two journeys on the same run whose onboard intervals
// overlap by at least min_overlap_s.
cotravel_report detect_cotravel(std::span<passenger_journey const>,
                                seconds_t min_overlap_s = 120,
                                std::int64_t min_encounters = 2);

// Number of distinct UTC calendar days on which some run starts.
std::int64_t count_service_days(std::span<run_interval const>);

}  // namespace busod
