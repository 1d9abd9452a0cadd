#include "busod/trips.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "fmt/format.h"

#include "busod/errors.h"

namespace busod {

void validate(gap_threshold const& g) {
  if (g.seconds < 1) {
    throw invalid_value(
        fmt::format("gap threshold must be >= 1 s, got {}", g.seconds));
  }
}

std::vector<device_trip> derive_trips(
    std::span<device_sighting const> sightings, gap_threshold gap) {
  validate(gap);

  for (auto i = 1U; i < sightings.size(); ++i) {
    auto const& a = sightings[i - 1];
    auto const& b = sightings[i];
    if (std::tie(b.at, b.device) < std::tie(a.at, a.device)) {
      throw unsorted_input(
          fmt::format("sightings not sorted by (at, device) at index {}", i));
    }
  }

  // Input is time-ordered, so each device's list is time-ordered as well.
  std::map<device_id, std::vector<timestamp>> by_device;
  for (auto const& s : sightings) {
    by_device[s.device].push_back(s.at);
  }

  std::vector<device_trip> trips;
  for (auto const& [device, times] : by_device) {
    device_trip current{device, times.front(), times.front(), 1};
    for (auto i = 1U; i < times.size(); ++i) {
      if (times[i] - times[i - 1] < gap.seconds) {
        current.last_seen = times[i];
        ++current.sighting_count;
      } else {
        trips.push_back(current);
        current = device_trip{device, times[i], times[i], 1};
      }
    }
    trips.push_back(current);
  }
  return trips;
}

}  // namespace busod
