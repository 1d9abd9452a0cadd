#pragma once

#include <span>
#include <vector>

#include "busod/model.h"

namespace busod {

struct snap_config {
  // Door openings farther than this from every route stop are ignored.
  double max_snap_m{30.0};
  // Stop-time accuracy. Not used for snapping; downstream it becomes the
  // correlation tolerance.
  seconds_t margin_s{10};
};

void validate(snap_config const&);

struct geo_point {
  double lat{};
  double lon{};
};

constexpr double kEarthRadiusM = 6371000.0;

// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine_m(geo_point a, geo_point b);

// Maximal contiguous stretches of in-service records sharing a run_id.
// Records must be sorted by time. A run_id that reappears after another run
// or a depot interval is rejected with invalid_value.
std::vector<run_interval> derive_runs(
    std::span<localization_record const> records);

// Turns door-open dwells inside runs into stop visits, snapping each dwell
// (position at the door-open instant) to the nearest stop of the run's route.
// Ties go to the lower sequence index. Throws unknown_route and
// out_of_order_visit.
std::vector<stop_visit> derive_stop_visits(
    std::span<localization_record const> records, network_model const& network,
    snap_config const& cfg = {});

}  // namespace busod
