#pragma once

#include <span>
#include <vector>

#include "busod/model.h"

namespace busod {

// Consecutive sightings of one device closer than this merge into one trip.
// A gap of exactly `seconds` splits.
struct gap_threshold {
  seconds_t seconds{300};
};

void validate(gap_threshold const&);

// Sessionizes sightings (sorted by (at, device), else unsorted_input) into
// device trips sorted by (device, first_seen).
std::vector<device_trip> derive_trips(std::span<device_sighting const>,
                                      gap_threshold gap = {});

}  // namespace busod
