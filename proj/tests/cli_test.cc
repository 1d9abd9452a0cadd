#include "gtest/gtest.h"

#include <sstream>

#include "busod/io.h"
#include "busod/simulator.h"

#include "cli.h"
#include "test_util.h"

using namespace busod;
using namespace busod::test;
namespace fs = std::filesystem;

namespace {

struct result {
  int code;
  std::string out;
  std::string err;
};

result run(std::vector<std::string> args) {
  args.insert(args.begin(), "busod");
  std::ostringstream out, err;
  auto const code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

constexpr auto kScenario = R"({
  "stops": [
    {"id": "A", "name": "Alpha", "lat": 32.65, "lon": -16.93},
    {"id": "B", "name": "Beta", "lat": 32.65, "lon": -16.9257},
    {"id": "C", "name": "Gamma", "lat": 32.65, "lon": -16.9214}
  ],
  "routes": [
    {"id": "R1", "stops": ["A", "B", "C"], "direction": "outward"},
    {"id": "R2", "stops": ["C", "B", "A"], "direction": "inward"}
  ],
  "run_pattern": {"routes": ["R1", "R2"], "first": "07:00:00",
                  "last_start": "12:00:00", "headway_seconds": 1800,
                  "leg_seconds": 120, "dwell_seconds": 30},
  "days": 2,
  "passengers_per_day": 80,
  "penetration": 1.0,
  "miss_prob": 0.0,
  "bystanders_per_day": 5,
  "depot_devices": 1,
  "seed": 3
})";

// Simulated dataset shared by the tests below.
class cli_data : public ::testing::Test {
protected:
  void SetUp() override {
    write_text(dir_ / "scenario.json", kScenario);
    auto const r = run({"simulate", "--config", path("scenario.json"), "--out",
                        path("data")});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  std::string path(std::string_view name) const { return (dir_ / name).string(); }

  temp_dir dir_;
};

}  // namespace

TEST(cli, version_and_help) {
  auto const v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("busod 1.0.0"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
}

TEST_F(cli_data, zero_gap_is_usage_error) {
  auto const r = run({"derive-trips", "--sightings", path("data/sightings.csv"),
                      "--out", path("t.csv"), "--gap-seconds", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(path("t.csv")));
}

TEST_F(cli_data, empty_hour_range_is_usage_error) {
  ASSERT_EQ(run({"pipeline", "--data", path("data"), "--out", path("out")}).code,
            0);
  auto const r = run({"od-matrix", "--journeys", path("out/journeys.jsonl"),
                      "--out", path("od.csv"), "--from-hour", "9",
                      "--to-hour", "9"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("empty hour range"), std::string::npos);
  EXPECT_EQ(run({"od-matrix", "--journeys", path("out/journeys.jsonl"), "--out",
                 path("od.csv"), "--direction", "outward"})
                .code,
            1);
  EXPECT_EQ(run({"od-matrix", "--journeys", path("out/journeys.jsonl"), "--out",
                 path("od.csv"), "--days", "holiday"})
                .code,
            1);
}

TEST_F(cli_data, malformed_data_is_data_error) {
  write_text(dir_ / "bad.csv",
             "at,device,class\n2008-06-02T10:00:00Z,0a1b2c3d4e5,5a020c\n");
  auto const r = run({"derive-trips", "--sightings", path("bad.csv"), "--out",
                      path("t.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.csv:2"), std::string::npos);
}

TEST_F(cli_data, pipeline_matches_separate_stages) {
  ASSERT_EQ(run({"pipeline", "--data", path("data"), "--out", path("pipe")}).code,
            0);
  ASSERT_EQ(run({"derive-trips", "--sightings", path("data/sightings.csv"),
                 "--out", path("step/trips.csv")})
                .code,
            0);
  ASSERT_EQ(run({"stop-visits", "--localization", path("data/localization.csv"),
                 "--network", path("data"), "--out", path("step/visits.csv"),
                 "--runs-out", path("step/runs.csv")})
                .code,
            0);
  ASSERT_EQ(run({"correlate", "--trips", path("step/trips.csv"), "--visits",
                 path("step/visits.csv"), "--runs", path("step/runs.csv"),
                 "--out", path("step/journeys.jsonl"), "--rejects",
                 path("step/rejects.jsonl")})
                .code,
            0);
  ASSERT_EQ(run({"od-matrix", "--journeys", path("step/journeys.jsonl"),
                 "--out", path("step/od.csv")})
                .code,
            0);
  for (auto const* f : {"trips.csv", "visits.csv", "runs.csv", "journeys.jsonl",
                        "rejects.jsonl", "od.csv"}) {
    EXPECT_EQ(read_file(dir_ / "pipe" / f), read_file(dir_ / "step" / f)) << f;
  }
  EXPECT_FALSE(read_file(dir_ / "pipe" / "rejects.jsonl").empty());
}

TEST_F(cli_data, pipeline_od_equals_truth_od_at_full_penetration) {
  ASSERT_EQ(run({"pipeline", "--data", path("data"), "--out", path("out")}).code,
            0);
  auto const e = run({"evaluate", "--journeys", path("out/journeys.jsonl"),
                      "--truth", path("data/ground_truth.jsonl"), "--truth-od",
                      path("truth_od.csv")});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("\"od_l1\":0"), std::string::npos) << e.out;
  auto const got = load_od_matrix(dir_ / "out" / "od.csv");
  auto const want = load_od_matrix(dir_ / "truth_od.csv");
  EXPECT_EQ(got.cells(), want.cells());
  EXPECT_EQ(got.total_journeys(), 160);
}

TEST_F(cli_data, simulate_seed_override) {
  ASSERT_EQ(run({"simulate", "--config", path("scenario.json"), "--out",
                 path("again")})
                .code,
            0);
  EXPECT_EQ(read_file(dir_ / "again" / "sightings.csv"),
            read_file(dir_ / "data" / "sightings.csv"));
  ASSERT_EQ(run({"simulate", "--config", path("scenario.json"), "--out",
                 path("other"), "--seed", "4"})
                .code,
            0);
  EXPECT_NE(read_file(dir_ / "other" / "sightings.csv"),
            read_file(dir_ / "data" / "sightings.csv"));
}

TEST_F(cli_data, hashed_devices_are_stable_and_opaque) {
  ASSERT_EQ(run({"derive-trips", "--sightings", path("data/sightings.csv"),
                 "--out", path("plain.csv")})
                .code,
            0);
  for (auto const* name : {"h1.csv", "h2.csv"}) {
    ASSERT_EQ(run({"derive-trips", "--sightings", path("data/sightings.csv"),
                   "--out", path(name), "--hash-devices", "secret"})
                  .code,
              0);
  }
  EXPECT_EQ(read_file(dir_ / "h1.csv"), read_file(dir_ / "h2.csv"));
  auto const plain = load_trips(dir_ / "plain.csv");
  auto const hashed = load_trips(dir_ / "h1.csv");
  ASSERT_EQ(plain.size(), hashed.size());
  std::set<device_id> raw;
  for (auto const& t : plain) {
    raw.insert(t.device);
  }
  for (auto const& t : hashed) {
    EXPECT_FALSE(raw.contains(t.device));
  }
}

TEST_F(cli_data, analyses_write_reports) {
  ASSERT_EQ(run({"pipeline", "--data", path("data"), "--out", path("out")}).code,
            0);
  auto const j = path("out/journeys.jsonl");
  EXPECT_EQ(run({"analyze", "occupancy", "--journeys", j, "--out",
                 path("occ.csv"), "--runs", path("out/runs.csv")})
                .code,
            0);
  EXPECT_EQ(read_file(dir_ / "occ.csv").substr(0, 11), "hour,value\n");
  EXPECT_EQ(run({"analyze", "occupancy", "--journeys", j, "--out",
                 path("occ.csv")})
                .code,
            1);
  EXPECT_EQ(run({"analyze", "durations", "--journeys", j, "--out",
                 path("dur.csv"), "--bucket-seconds", "60"})
                .code,
            0);
  auto const t = run({"analyze", "tickets", "--journeys", j, "--tickets",
                      path("data/tickets.csv"), "--runs", path("out/runs.csv"),
                      "--out", path("tix.csv")});
  EXPECT_EQ(t.code, 0) << t.err;
  // Every passenger carries a device, so the slope is one.
  EXPECT_NE(t.out.find("scale_factor=1.000000"), std::string::npos) << t.out;
  EXPECT_EQ(run({"analyze", "cotravel", "--journeys", j, "--out",
                 path("co.csv"), "--groups-out", path("groups.txt")})
                .code,
            0);

  auto const journeys = load_journeys(j);
  auto const& first = journeys.front();
  auto const p = run({"analyze", "predict", "--journeys", j, "--device",
                      first.device.str(), "--origin", first.board_stop.str(),
                      "--day-kind", "weekday", "--hour",
                      std::to_string(hour_of_day(first.board_at))});
  EXPECT_EQ(p.code, 0);
  EXPECT_EQ(p.out, first.alight_stop.str() + ",1.000000\n");
  auto const none = run({"analyze", "predict", "--journeys", j, "--device",
                         first.device.str(), "--origin", "Z", "--day-kind",
                         "sunday", "--hour", "3"});
  EXPECT_EQ(none.out, "none\n");
  EXPECT_EQ(run({"analyze", "predict", "--journeys", j, "--device", "xyz",
                 "--origin", "A", "--day-kind", "sunday", "--hour", "3"})
                .code,
            1);
}
