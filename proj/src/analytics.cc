#include "busod/analytics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fmt/format.h"

#include "busod/errors.h"

namespace busod {

void validate(time_filter const& f) {
  if (f.hour_range) {
    auto const [from, to] = *f.hour_range;
    if (from < 0 || from >= to || to > 24) {
      throw invalid_value(
          fmt::format("hour range [{}, {}) must satisfy 0 <= from < to <= 24",
                      from, to));
    }
  }
  if (f.route_id && !is_token(*f.route_id)) {
    throw invalid_value("invalid route filter");
  }
}

std::string describe(time_filter const& f) {
  std::string hours = "all";
  if (f.hour_range) {
    hours = fmt::format("[{},{})", f.hour_range->first, f.hour_range->second);
  }
  std::string days;
  if (f.day_kinds.size() == 3) {
    days = "all";
  } else if (f.day_kinds.empty()) {
    days = "none";
  } else {
    for (auto const k : f.day_kinds) {
      if (!days.empty()) {
        days += '|';
      }
      days += to_string(k);
    }
  }
  return fmt::format("hours={} days={} route={} direction={}", hours, days,
                     f.route_id.value_or("all"),
                     f.dir ? to_string(*f.dir) : "all");
}

bool matches(time_filter const& f, passenger_journey const& j,
             network_model const* network) {
  if (f.hour_range) {
    auto const h = hour_of_day(j.board_at);
    if (h < f.hour_range->first || h >= f.hour_range->second) {
      return false;
    }
  }
  if (!f.day_kinds.contains(day_kind_of(j.board_at))) {
    return false;
  }
  if (f.route_id && *f.route_id != j.route_id) {
    return false;
  }
  if (f.dir) {
    if (network == nullptr) {
      return false;
    }
    auto const it = network->directions().find(j.route_id);
    if (it == network->directions().end() || it->second != *f.dir) {
      return false;
    }
  }
  return true;
}

od_matrix build_od_matrix(std::span<passenger_journey const> journeys,
                          time_filter const& filter,
                          network_model const* network) {
  validate(filter);
  if (filter.dir && network == nullptr) {
    throw invalid_value("direction filter needs route directions");
  }
  od_matrix m{describe(filter)};
  for (auto const& j : journeys) {
    if (matches(filter, j, network)) {
      m.add(j.board_stop, j.alight_stop);
    }
  }
  return m;
}

double occupancy_curve::value(int hour) const {
  return static_cast<double>(onboard_seconds.at(static_cast<std::size_t>(hour))) /
         (static_cast<double>(kSecondsPerHour) *
          static_cast<double>(service_days));
}

std::array<double, 24> occupancy_curve::values() const {
  std::array<double, 24> out{};
  for (auto h = 0; h != 24; ++h) {
    out[static_cast<std::size_t>(h)] = value(h);
  }
  return out;
}

occupancy_curve occupancy_by_hour(std::span<passenger_journey const> journeys,
                                  std::int64_t service_days) {
  if (service_days < 1) {
    throw invalid_value("service_days must be >= 1");
  }
  occupancy_curve c;
  c.service_days = service_days;
  for (auto const& j : journeys) {
    auto t = j.board_at.seconds();
    auto const end = j.alight_at.seconds();
    while (t < end) {
      auto const hour_end = (t / kSecondsPerHour + 1) * kSecondsPerHour;
      auto const chunk_end = std::min(hour_end, end);
      c.onboard_seconds[static_cast<std::size_t>(
          (t % kSecondsPerDay) / kSecondsPerHour)] += chunk_end - t;
      t = chunk_end;
    }
  }
  return c;
}

duration_histogram trip_duration_histogram(
    std::span<passenger_journey const> journeys, seconds_t bucket_width_s) {
  if (bucket_width_s < 1) {
    throw invalid_value("bucket width must be >= 1 s");
  }
  duration_histogram h;
  h.bucket_width_s = bucket_width_s;
  for (auto const& j : journeys) {
    auto const d = std::max<seconds_t>(0, j.duration());
    auto const bucket = static_cast<std::size_t>(d / bucket_width_s);
    if (h.counts.size() <= bucket) {
      h.counts.resize(bucket + 1, 0);
    }
    ++h.counts[bucket];
  }
  return h;
}

ticket_correlation_report ticket_correlation(
    std::span<std::int64_t const> device_trips,
    std::span<std::int64_t const> tickets) {
  if (device_trips.size() != tickets.size()) {
    throw invalid_value("device and ticket series differ in length");
  }
  auto const nonzero = std::count_if(device_trips.begin(), device_trips.end(),
                                     [](auto v) { return v != 0; });
  if (nonzero < 2) {
    throw degenerate_series("fewer than two hours with device trips");
  }

  ticket_correlation_report r;
  auto const n = static_cast<double>(device_trips.size());
  double sum_d = 0, sum_t = 0, sum_dd = 0, sum_dt = 0;
  for (auto i = 0U; i != device_trips.size(); ++i) {
    auto const d = static_cast<double>(device_trips[i]);
    auto const t = static_cast<double>(tickets[i]);
    r.hourly_pairs.emplace_back(device_trips[i], tickets[i]);
    sum_d += d;
    sum_t += t;
    sum_dd += d * d;
    sum_dt += d * t;
  }
  auto const mean_d = sum_d / n;
  auto const mean_t = sum_t / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (auto i = 0U; i != device_trips.size(); ++i) {
    auto const dx = static_cast<double>(device_trips[i]) - mean_d;
    auto const dy = static_cast<double>(tickets[i]) - mean_t;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) {
    throw degenerate_series("device trip series is constant");
  }
  r.r_squared = syy == 0.0 ? 0.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  r.scale_factor = sum_dt / sum_dd;
  if (!(r.scale_factor > 0.0)) {
    throw degenerate_series("ticket series gives a non-positive slope");
  }
  r.penetration = 1.0 / r.scale_factor;
  return r;
}

hourly_series hourly_counts(std::span<passenger_journey const> journeys,
                            std::span<ticket_validation const> tickets,
                            std::span<run_interval const> runs,
                            hour_binning binning) {
  auto const bin = [&](timestamp t) -> std::int64_t {
    return binning == hour_binning::hour_of_day ? hour_of_day(t)
                                                : t.seconds() / kSecondsPerHour;
  };

  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> bins;
  for (auto const& r : runs) {
    auto const first = r.service_start.seconds() / kSecondsPerHour;
    auto const last = r.service_end.seconds() / kSecondsPerHour;
    for (auto h = first; h <= last; ++h) {
      bins.try_emplace(bin(timestamp{h * kSecondsPerHour}), 0, 0);
    }
  }
  for (auto const& j : journeys) {
    if (auto const it = bins.find(bin(j.board_at)); it != bins.end()) {
      ++it->second.first;
    }
  }
  for (auto const& t : tickets) {
    if (auto const it = bins.find(bin(t.at)); it != bins.end()) {
      ++it->second.second;
    }
  }

  hourly_series s;
  for (auto const& [hour, counts] : bins) {
    s.hour.push_back(hour);
    s.device_trips.push_back(counts.first);
    s.tickets.push_back(counts.second);
  }
  return s;
}

individual_od build_individual_od(std::span<passenger_journey const> journeys,
                                  device_id const& device, int band_width_h) {
  if (band_width_h < 1 || band_width_h > 24 || 24 % band_width_h != 0) {
    throw invalid_value(
        fmt::format("hour band width {} does not divide 24", band_width_h));
  }
  individual_od od{device, band_width_h, {}};
  for (auto const& j : journeys) {
    if (j.device != device) {
      continue;
    }
    auto const band = hour_of_day(j.board_at) / band_width_h * band_width_h;
    ++od.cells[{j.board_stop, j.alight_stop, day_kind_of(j.board_at), band}];
  }
  return od;
}

std::optional<destination_prediction> predict_destination(
    individual_od const& od, stop_id const& origin, day_kind kind, int hour) {
  if (hour < 0 || hour > 23) {
    throw invalid_value(fmt::format("hour {} outside 0..23", hour));
  }
  auto const band = hour / od.band_width_h * od.band_width_h;
  std::int64_t total = 0;
  std::optional<std::pair<stop_id, std::int64_t>> best;
  // Cells are ordered by destination for a fixed origin, so the first
  // maximum is the lexically smallest.
  for (auto const& [key, count] : od.cells) {
    if (key.origin != origin || key.kind != kind || key.band_start != band) {
      continue;
    }
    total += count;
    if (!best || count > best->second) {
      best.emplace(key.destination, count);
    }
  }
  if (!best) {
    return std::nullopt;
  }
  return destination_prediction{
      best->first,
      static_cast<double>(best->second) / static_cast<double>(total)};
}

namespace {

struct union_find {
  explicit union_find(std::size_t n) : parent(n) {
    std::iota(begin(parent), end(parent), 0U);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::size_t> parent;
};

}  // namespace

cotravel_report detect_cotravel(std::span<passenger_journey const> journeys,
                                seconds_t min_overlap_s,
                                std::int64_t min_encounters) {
  if (min_overlap_s < 0 || min_encounters < 1) {
    throw invalid_value("co-travel thresholds out of range");
  }
  std::map<std::string, std::vector<passenger_journey const*>> by_run;
  for (auto const& j : journeys) {
    by_run[j.run_id].push_back(&j);
  }

  cotravel_report report;
  for (auto const& [run_id, list] : by_run) {
    for (auto i = 0U; i < list.size(); ++i) {
      for (auto k = i + 1; k < list.size(); ++k) {
        auto const& a = *list[i];
        auto const& b = *list[k];
        if (a.device == b.device) {
          continue;
        }
        auto const overlap = std::min(a.alight_at, b.alight_at) -
                             std::max(a.board_at, b.board_at);
        if (overlap < min_overlap_s) {
          continue;
        }
        auto key = a.device < b.device ? std::pair{a.device, b.device}
                                       : std::pair{b.device, a.device};
        ++report.pair_encounters[std::move(key)];
      }
    }
  }

  std::map<device_id, std::size_t> index;
  std::vector<device_id const*> devices;
  for (auto const& [pair, count] : report.pair_encounters) {
    if (count < min_encounters) {
      continue;
    }
    for (auto const* d : {&pair.first, &pair.second}) {
      if (index.try_emplace(*d, devices.size()).second) {
        devices.push_back(d);
      }
    }
  }
  union_find uf{devices.size()};
  for (auto const& [pair, count] : report.pair_encounters) {
    if (count >= min_encounters) {
      uf.unite(index.at(pair.first), index.at(pair.second));
    }
  }
  std::map<std::size_t, std::vector<device_id>> components;
  for (auto i = 0U; i != devices.size(); ++i) {
    components[uf.find(i)].push_back(*devices[i]);
  }
  for (auto& [root, members] : components) {
    std::sort(begin(members), end(members));
    report.groups.push_back(std::move(members));
  }
  std::sort(begin(report.groups), end(report.groups));
  return report;
}

std::int64_t count_service_days(std::span<run_interval const> runs) {
  std::set<std::int64_t> days;
  for (auto const& r : runs) {
    days.insert(day_index(r.service_start));
  }
  return static_cast<std::int64_t>(days.size());
}

}  // namespace busod
