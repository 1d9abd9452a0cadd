#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "busod/model.h"

namespace busod {

struct correlation_config {
  // Tolerance around each dwell window [door_open - eps, door_close + eps].
  seconds_t epsilon_s{10};
};

void validate(correlation_config const&);

enum class reject_reason : std::uint8_t { depot, same_stop, unmatched };

std::string_view to_string(reject_reason);
std::optional<reject_reason> parse_reject_reason(std::string_view);

struct rejected_trip {
  device_trip trip;
  reject_reason reason;

  friend bool operator==(rejected_trip const&, rejected_trip const&) = default;
};

struct correlation_result {
  std::vector<passenger_journey> journeys;
  std::vector<rejected_trip> rejected;
};

// Assigns every trip either to a journey or to a rejection. Trips must be
// sorted by (device, first_seen); visits must be ordered by door_open_at
// within each run. Throws unsorted_input otherwise.
//
//  1. The trip goes to the run whose service interval overlaps it longest
//     (ties: earlier service_start). No overlap: depot.
//  2. The trip is clipped to that run. Boarding is the dwell window holding
//     first_seen, else the latest visit closed by first_seen.
//  3. Alighting is the dwell window holding last_seen, else the earliest
//     visit opening at or after last_seen.
//  4. Missing endpoint: unmatched. Same visit: same_stop. Endpoints out of
//     route order: unmatched.
correlation_result correlate(std::span<device_trip const> trips,
                             std::span<stop_visit const> visits,
                             std::span<run_interval const> runs,
                             correlation_config const& cfg = {});

}  // namespace busod
