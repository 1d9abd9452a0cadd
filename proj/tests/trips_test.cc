#include "gtest/gtest.h"

#include <algorithm>
#include <map>
#include <random>

#include "fmt/format.h"

#include "busod/errors.h"
#include "busod/trips.h"

#include "test_util.h"

using namespace busod;
using namespace busod::test;

namespace {

auto const kDevA = "0a1b2c3d4e5f";
auto const kDevB = "00000000000b";

std::vector<device_sighting> sightings_at(
    std::vector<std::pair<std::string, seconds_t>> raw) {
  std::vector<device_sighting> out;
  for (auto const& [d, s] : raw) {
    out.push_back({dev(d), cls(), timestamp{1212400000 + s}});
  }
  std::sort(begin(out), end(out), [](auto const& a, auto const& b) {
    return std::tie(a.at, a.device) < std::tie(b.at, b.device);
  });
  return out;
}

// Enumerates every way to cut a device's time list into consecutive groups
// and keeps those where members are chained by gaps < T and neighbouring
// groups are separated by gaps >= T. A branch dies as soon as its last
// decision contradicts the rule.
void enumerate(std::vector<timestamp> const& t, seconds_t gap, std::size_t i,
               std::vector<std::size_t>& cuts,
               std::vector<std::vector<std::size_t>>& valid) {
  if (i == t.size()) {
    valid.push_back(cuts);
    return;
  }
  auto const d = t[i] - t[i - 1];
  if (d >= gap) {
    cuts.push_back(i);
    enumerate(t, gap, i + 1, cuts, valid);
    cuts.pop_back();
  }
  if (d < gap) {
    enumerate(t, gap, i + 1, cuts, valid);
  }
}

std::vector<device_trip> oracle(std::vector<device_sighting> const& s,
                                seconds_t gap) {
  std::map<device_id, std::vector<timestamp>> by;
  for (auto const& x : s) {
    by[x.device].push_back(x.at);
  }
  std::vector<device_trip> out;
  for (auto& [d, t] : by) {
    std::sort(begin(t), end(t));
    std::vector<std::vector<std::size_t>> valid;
    std::vector<std::size_t> cuts;
    enumerate(t, gap, 1, cuts, valid);
    EXPECT_EQ(valid.size(), 1U) << "partition must be unique";
    auto bounds = valid.front();
    bounds.insert(bounds.begin(), 0);
    bounds.push_back(t.size());
    for (auto k = 0U; k + 1 < bounds.size(); ++k) {
      out.push_back({d, t[bounds[k]], t[bounds[k + 1] - 1],
                     static_cast<std::int64_t>(bounds[k + 1] - bounds[k])});
    }
  }
  return out;
}

std::vector<device_sighting> random_sightings(std::mt19937_64& g, int devices,
                                              int n) {
  std::vector<std::pair<std::string, seconds_t>> raw;
  seconds_t t = 0;
  for (int i = 0; i < n; ++i) {
    // Mix of short gaps, near-threshold gaps and long gaps.
    switch (g() % 4) {
      case 0: t += static_cast<seconds_t>(g() % 20); break;
      case 1: t += 295 + static_cast<seconds_t>(g() % 11); break;
      case 2: t += static_cast<seconds_t>(g() % 600); break;
      default: t += static_cast<seconds_t>(g() % 100); break;
    }
    raw.emplace_back(fmt::format("{:012x}", g() % devices), t);
  }
  return sightings_at(raw);
}

}  // namespace

TEST(derive_trips, gaps_below_threshold_merge) {
  auto const trips =
      derive_trips(sightings_at({{kDevA, 0}, {kDevA, 120}, {kDevA, 400}}));
  ASSERT_EQ(trips.size(), 1U);
  EXPECT_EQ(trips[0].first_seen.seconds(), 1212400000);
  EXPECT_EQ(trips[0].last_seen.seconds(), 1212400400);
  EXPECT_EQ(trips[0].sighting_count, 3);
}

TEST(derive_trips, gap_equal_to_threshold_splits) {
  auto const trips = derive_trips(sightings_at({{kDevA, 0}, {kDevA, 300}}));
  ASSERT_EQ(trips.size(), 2U);
  EXPECT_EQ(trips[0].sighting_count, 1);
  EXPECT_EQ(trips[1].first_seen.seconds(), 1212400300);
  EXPECT_EQ(derive_trips(sightings_at({{kDevA, 0}, {kDevA, 299}})).size(), 1U);
}

TEST(derive_trips, singleton_and_empty) {
  auto const trips = derive_trips(sightings_at({{kDevA, 42}}));
  ASSERT_EQ(trips.size(), 1U);
  EXPECT_EQ(trips[0].first_seen, trips[0].last_seen);
  EXPECT_EQ(trips[0].sighting_count, 1);
  EXPECT_TRUE(derive_trips({}).empty());
}

TEST(derive_trips, devices_are_independent_and_sorted) {
  auto const trips = derive_trips(sightings_at(
      {{kDevA, 0}, {kDevB, 100}, {kDevA, 200}, {kDevB, 500}, {kDevA, 900}}));
  ASSERT_EQ(trips.size(), 4U);
  EXPECT_EQ(trips[0].device.str(), kDevB);
  EXPECT_EQ(trips[0].sighting_count, 1);
  EXPECT_EQ(trips[1].device.str(), kDevB);
  EXPECT_EQ(trips[2].device.str(), kDevA);
  EXPECT_EQ(trips[2].sighting_count, 2);
  EXPECT_EQ(trips[3].first_seen.seconds(), 1212400900);
}

TEST(derive_trips, duplicate_sightings_count) {
  auto const trips = derive_trips(sightings_at({{kDevA, 5}, {kDevA, 5}}));
  ASSERT_EQ(trips.size(), 1U);
  EXPECT_EQ(trips[0].sighting_count, 2);
}

TEST(derive_trips, unsorted_input_rejected) {
  auto s = sightings_at({{kDevA, 0}, {kDevA, 10}});
  std::swap(s[0], s[1]);
  EXPECT_THROW(derive_trips(s), unsorted_input);
}

TEST(derive_trips, invalid_threshold) {
  EXPECT_THROW(derive_trips({}, gap_threshold{0}), invalid_value);
}

TEST(derive_trips, matches_partition_oracle) {
  std::mt19937_64 g{11};
  for (int round = 0; round < 300; ++round) {
    auto const s = random_sightings(g, 1 + static_cast<int>(g() % 4),
                                    1 + static_cast<int>(g() % 50));
    auto const gap = std::vector<seconds_t>{1, 60, 300, 301}[g() % 4];
    ASSERT_EQ(derive_trips(s, {gap}), oracle(s, gap)) << "round " << round;
  }
}

TEST(derive_trips, trips_partition_sightings) {
  std::mt19937_64 g{12};
  for (int round = 0; round < 200; ++round) {
    auto const s = random_sightings(g, 3, 60);
    auto const trips = derive_trips(s);
    std::map<device_id, std::int64_t> count;
    for (auto const& x : s) {
      ++count[x.device];
    }
    std::map<device_id, std::int64_t> covered;
    for (auto i = 0U; i < trips.size(); ++i) {
      auto const& t = trips[i];
      covered[t.device] += t.sighting_count;
      if (i > 0 && trips[i - 1].device == t.device) {
        // Disjoint and separated by at least the threshold.
        ASSERT_GE(t.first_seen - trips[i - 1].last_seen, 300);
      }
      for (auto const& x : s) {
        if (x.device == t.device) {
          bool const inside = x.at >= t.first_seen && x.at <= t.last_seen;
          bool const other = std::any_of(
              begin(trips), end(trips), [&](device_trip const& u) {
                return &u != &t && u.device == x.device &&
                       x.at >= u.first_seen && x.at <= u.last_seen;
              });
          ASSERT_FALSE(inside && other);
        }
      }
    }
    ASSERT_EQ(covered, count);
  }
}

TEST(derive_trips, larger_threshold_never_adds_trips) {
  std::mt19937_64 g{13};
  for (int round = 0; round < 200; ++round) {
    auto const s = random_sightings(g, 3, 50);
    auto prev = derive_trips(s, {1}).size();
    for (seconds_t gap : {10, 60, 299, 300, 301, 600, 3600}) {
      auto const n = derive_trips(s, {gap}).size();
      ASSERT_LE(n, prev);
      prev = n;
    }
  }
}

TEST(derive_trips, sighting_near_existing_one_never_adds_trips) {
  std::mt19937_64 g{14};
  for (int round = 0; round < 200; ++round) {
    auto s = random_sightings(g, 1, 30);
    auto const before = derive_trips(s).size();
    auto const t = s[g() % s.size()].at + static_cast<seconds_t>(g() % 200);
    s.push_back({s.front().device, cls(), t});
    std::sort(begin(s), end(s), [](auto const& a, auto const& b) {
      return std::tie(a.at, a.device) < std::tie(b.at, b.device);
    });
    // The new sighting lies within 200 s after an old one, so it can only
    // bridge gaps, never open a new trip.
    ASSERT_LE(derive_trips(s).size(), before);
  }
}
