#include "busod/stop_events.h"

#include <cmath>
#include <numbers>
#include <optional>
#include <set>

#include "fmt/format.h"

#include "busod/errors.h"

namespace busod {

namespace {

double to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

struct dwell {
  localization_record const* first;
  localization_record const* last;
};

void check_sorted(std::span<localization_record const> records) {
  for (auto i = 1U; i < records.size(); ++i) {
    if (records[i].at < records[i - 1].at) {
      throw unsorted_input("localization records not sorted by time");
    }
  }
}

}  // namespace

void validate(snap_config const& cfg) {
  if (!(cfg.max_snap_m > 0.0)) {
    throw invalid_value("snap radius must be > 0");
  }
  if (cfg.margin_s < 0) {
    throw invalid_value("margin must be >= 0");
  }
}

double haversine_m(geo_point a, geo_point b) {
  auto const dlat = to_rad(b.lat - a.lat);
  auto const dlon = to_rad(b.lon - a.lon);
  auto const s_lat = std::sin(dlat / 2.0);
  auto const s_lon = std::sin(dlon / 2.0);
  auto const h = s_lat * s_lat + std::cos(to_rad(a.lat)) *
                                     std::cos(to_rad(b.lat)) * s_lon * s_lon;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, h)));
}

std::vector<run_interval> derive_runs(
    std::span<localization_record const> records) {
  check_sorted(records);
  std::vector<run_interval> runs;
  std::set<std::string> seen;
  bool open = false;
  for (auto const& r : records) {
    if (!r.in_service) {
      open = false;
      continue;
    }
    if (open && runs.back().run_id == r.run_id) {
      if (runs.back().route_id != r.route_id) {
        throw invalid_value("run " + r.run_id + " changes route");
      }
      runs.back().service_end = r.at;
      continue;
    }
    if (!seen.insert(r.run_id).second) {
      throw invalid_value("run id " + r.run_id + " reused for a second run");
    }
    runs.push_back(run_interval{r.run_id, r.route_id, r.at, r.at});
    open = true;
  }
  return runs;
}

std::vector<stop_visit> derive_stop_visits(
    std::span<localization_record const> records, network_model const& network,
    snap_config const& cfg) {
  validate(cfg);
  derive_runs(records);  // rejects unsorted input and reused run ids

  std::vector<stop_visit> visits;
  std::vector<stop_id> const* route = nullptr;
  std::optional<dwell> current;
  localization_record const* prev = nullptr;

  auto const close_dwell = [&]() {
    if (!current) {
      return;
    }
    auto const& open_rec = *current->first;
    geo_point const at{open_rec.lat, open_rec.lon};
    std::optional<std::size_t> best;
    double best_d = 0.0;
    for (auto i = 0U; i != route->size(); ++i) {
      auto const* info = network.stop((*route)[i]);
      auto const d = haversine_m(at, {info->lat, info->lon});
      if (!best || d < best_d) {
        best = i;
        best_d = d;
      }
    }
    if (best && best_d <= cfg.max_snap_m) {
      if (!visits.empty() && visits.back().run_id == open_rec.run_id &&
          visits.back().sequence_index > *best) {
        throw out_of_order_visit(open_rec.run_id);
      }
      visits.push_back(stop_visit{open_rec.run_id, open_rec.route_id,
                                  (*route)[*best], open_rec.at,
                                  current->last->at, *best});
    }
    current.reset();
  };

  for (auto const& r : records) {
    auto const same_run = prev != nullptr && prev->in_service &&
                          r.in_service && prev->run_id == r.run_id;
    if (!same_run) {
      close_dwell();
      route = nullptr;
      if (r.in_service) {
        route = network.route(r.route_id);
        if (route == nullptr) {
          throw unknown_route(r.route_id);
        }
      }
    }
    if (r.in_service && r.doors_open) {
      if (current) {
        current->last = &r;
      } else {
        current = dwell{&r, &r};
      }
    } else {
      close_dwell();
    }
    prev = &r;
  }
  close_dwell();
  return visits;
}

}  // namespace busod
