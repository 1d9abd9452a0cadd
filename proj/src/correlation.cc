#include "busod/correlation.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "fmt/format.h"

#include "busod/errors.h"

namespace busod {

namespace {

using visit_list = std::vector<stop_visit const*>;

seconds_t distance_to_dwell(stop_visit const& v, timestamp t) {
  if (t < v.door_open_at) {
    return v.door_open_at - t;
  }
  if (t > v.door_close_at) {
    return t - v.door_close_at;
  }
  return 0;
}

// Index of the visit whose widened dwell window holds t, nearest dwell first,
// earlier visit on ties.
std::optional<std::size_t> containing_visit(visit_list const& visits,
                                            timestamp t, seconds_t eps) {
  std::optional<std::size_t> best;
  seconds_t best_d = 0;
  for (auto i = 0U; i != visits.size(); ++i) {
    auto const& v = *visits[i];
    if (v.door_open_at - t > eps || t - v.door_close_at > eps) {
      continue;
    }
    auto const d = distance_to_dwell(v, t);
    if (!best || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

std::optional<std::size_t> boarding_visit(visit_list const& visits,
                                          timestamp first, seconds_t eps) {
  if (auto const i = containing_visit(visits, first, eps)) {
    return i;
  }
  std::optional<std::size_t> latest;
  for (auto i = 0U; i != visits.size(); ++i) {
    if (visits[i]->door_close_at <= first) {
      latest = i;
    }
  }
  return latest;
}

std::optional<std::size_t> alighting_visit(visit_list const& visits,
                                           timestamp last, seconds_t eps) {
  if (auto const i = containing_visit(visits, last, eps)) {
    return i;
  }
  for (auto i = 0U; i != visits.size(); ++i) {
    if (visits[i]->door_open_at >= last) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace

void validate(correlation_config const& cfg) {
  if (cfg.epsilon_s < 0) {
    throw invalid_value("epsilon must be >= 0");
  }
}

std::string_view to_string(reject_reason r) {
  switch (r) {
    case reject_reason::depot: return "depot";
    case reject_reason::same_stop: return "same_stop";
    case reject_reason::unmatched: return "unmatched";
  }
  return "?";
}

std::optional<reject_reason> parse_reject_reason(std::string_view s) {
  if (s == "depot") {
    return reject_reason::depot;
  }
  if (s == "same_stop") {
    return reject_reason::same_stop;
  }
  if (s == "unmatched") {
    return reject_reason::unmatched;
  }
  return std::nullopt;
}

correlation_result correlate(std::span<device_trip const> trips,
                             std::span<stop_visit const> visits,
                             std::span<run_interval const> runs,
                             correlation_config const& cfg) {
  validate(cfg);

  for (auto i = 1U; i < trips.size(); ++i) {
    auto const& a = trips[i - 1];
    auto const& b = trips[i];
    if (std::tie(b.device, b.first_seen) < std::tie(a.device, a.first_seen)) {
      throw unsorted_input(fmt::format(
          "trips not sorted by (device, first_seen) at index {}", i));
    }
  }

  std::vector<run_interval const*> sorted_runs;
  for (auto const& r : runs) {
    validate(r);
    sorted_runs.push_back(&r);
  }
  std::sort(begin(sorted_runs), end(sorted_runs), [](auto a, auto b) {
    return std::tie(a->service_start, a->run_id) <
           std::tie(b->service_start, b->run_id);
  });

  std::map<std::string, visit_list> by_run;
  for (auto const& v : visits) {
    by_run[v.run_id].push_back(&v);
  }
  for (auto& [run_id, list] : by_run) {
    std::stable_sort(begin(list), end(list), [](auto a, auto b) {
      return a->door_open_at < b->door_open_at;
    });
    for (auto i = 1U; i < list.size(); ++i) {
      if (list[i]->door_open_at <= list[i - 1]->door_close_at ||
          list[i]->sequence_index < list[i - 1]->sequence_index) {
        throw unsorted_input("overlapping or out-of-order visits in run " +
                             run_id);
      }
    }
  }
  static visit_list const kNoVisits;

  correlation_result result;
  for (auto const& trip : trips) {
    validate(trip);

    run_interval const* run = nullptr;
    seconds_t best_overlap = -1;
    for (auto const* r : sorted_runs) {
      if (r->service_start > trip.last_seen) {
        break;
      }
      auto const lo = std::max(trip.first_seen, r->service_start);
      auto const hi = std::min(trip.last_seen, r->service_end);
      if (lo <= hi && hi - lo > best_overlap) {
        run = r;
        best_overlap = hi - lo;
      }
    }
    if (run == nullptr) {
      result.rejected.push_back({trip, reject_reason::depot});
      continue;
    }

    auto const first = std::max(trip.first_seen, run->service_start);
    auto const last = std::min(trip.last_seen, run->service_end);
    auto const it = by_run.find(run->run_id);
    auto const& run_visits = it == by_run.end() ? kNoVisits : it->second;

    auto const board = boarding_visit(run_visits, first, cfg.epsilon_s);
    auto const alight = alighting_visit(run_visits, last, cfg.epsilon_s);
    if (!board || !alight) {
      result.rejected.push_back({trip, reject_reason::unmatched});
      continue;
    }
    if (*board == *alight) {
      result.rejected.push_back({trip, reject_reason::same_stop});
      continue;
    }
    auto const& b = *run_visits[*board];
    auto const& a = *run_visits[*alight];
    if (*board > *alight || b.sequence_index >= a.sequence_index ||
        b.stop == a.stop) {
      result.rejected.push_back({trip, reject_reason::unmatched});
      continue;
    }
    result.journeys.push_back(passenger_journey{trip.device, run->run_id,
                                                run->route_id, b.stop, a.stop,
                                                b.door_open_at,
                                                a.door_open_at});
  }
  return result;
}

}  // namespace busod
