#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "busod/analytics.h"
#include "busod/io.h"
#include "busod/model.h"

namespace busod {

// One daily service of the bus. Doors open at the first stop at
// start_of_day_s; each stop is served for dwell_s seconds and leg i takes
// leg_s[i] seconds of travel.
struct scheduled_run {
  std::string run_id;
  std::string route_id;
  seconds_t start_of_day_s{0};
  std::vector<seconds_t> leg_s;
  seconds_t dwell_s{30};
};

struct od_weight {
  stop_id origin;
  stop_id destination;
  double weight{1.0};
};

struct scenario {
  network_model network;
  std::vector<scheduled_run> runs;
  timestamp start;  // midnight UTC of the first day
  std::int64_t days{1};
  std::int64_t passengers_per_day{0};
  // Empty means every ordered stop pair served by some route weighs 1.
  std::vector<od_weight> od_weights;
  std::array<double, 24> demand_profile{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1,
                                        1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  double penetration{0.1};
  seconds_t discovery_min_s{3};
  seconds_t discovery_max_s{10};
  double miss_prob{0.1};
  std::int64_t bystanders_per_day{0};
  std::int64_t depot_devices{0};
  std::uint64_t seed{0};
  seconds_t depot_record_interval_s{60};
};

void validate(scenario const&);

// JSON scenario document; see scenarios/README.md for the schema.
scenario parse_scenario(std::string_view json_text);
scenario load_scenario(std::filesystem::path const&);

struct true_journey {
  std::optional<device_id> device;  // empty for passengers without Bluetooth
  std::string run_id;
  std::string route_id;
  stop_id board_stop;
  stop_id alight_stop;
  timestamp board_at;  // door-open instants of the two visits
  timestamp alight_at;
  timestamp onboard_from;  // interval during which the device can respond
  timestamp onboard_to;

  bool discoverable() const { return device.has_value(); }

  friend bool operator==(true_journey const&, true_journey const&) = default;
};

struct true_bystander {
  device_id device;
  std::string run_id;
  stop_id stop;
  timestamp from;
  timestamp to;

  friend bool operator==(true_bystander const&,
                         true_bystander const&) = default;
};

struct true_depot_window {
  device_id device;
  timestamp from;
  timestamp to;

  friend bool operator==(true_depot_window const&,
                         true_depot_window const&) = default;
};

struct ground_truth {
  timestamp start;
  std::int64_t days{0};
  std::int64_t passengers_per_day{0};
  double penetration{0.0};
  std::vector<true_journey> journeys;
  std::vector<true_bystander> bystanders;
  std::vector<true_depot_window> depot_windows;

  friend bool operator==(ground_truth const&, ground_truth const&) = default;
};

struct simulation {
  dataset data;
  std::vector<run_interval> runs;
  ground_truth truth;
};

// Deterministic for a given scenario (seed included). Throws
// infeasible_schedule when a weighted OD pair has no serving run.
simulation simulate(scenario const&);

void write_ground_truth(std::ostream&, ground_truth const&);
ground_truth read_ground_truth(std::istream&, std::string const& source);
ground_truth load_ground_truth(std::filesystem::path const&);

// Writes the io file set plus ground_truth.jsonl into dir.
void write_simulation(simulation const&, std::filesystem::path const& dir);

struct evaluation_report {
  std::int64_t recovered{0};
  std::int64_t truth{0};
  std::int64_t true_positives{0};
  double precision{1.0};
  double recall{1.0};
  bool zero_predictions{false};
  std::int64_t od_l1{0};
  std::optional<double> penetration_estimate;
  std::optional<double> penetration_error;
};

// OD matrix of the discoverable true journeys.
od_matrix truth_od_matrix(ground_truth const&);

// Occupancy of every true passenger, with or without Bluetooth.
occupancy_curve truth_occupancy(ground_truth const&);

// Matches journeys by (device, run, board stop, alight stop). With tickets
// and runs, also estimates penetration from the hourly series.
evaluation_report evaluate(std::span<passenger_journey const> recovered,
                           ground_truth const& truth,
                           std::span<ticket_validation const> tickets = {},
                           std::span<run_interval const> runs = {});

std::string to_json(evaluation_report const&);

}  // namespace busod
