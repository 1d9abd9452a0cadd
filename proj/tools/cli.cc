#include "cli.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fmt/format.h"

#include "busod/analytics.h"
#include "busod/correlation.h"
#include "busod/errors.h"
#include "busod/io.h"
#include "busod/privacy.h"
#include "busod/simulator.h"
#include "busod/stop_events.h"
#include "busod/trips.h"

namespace fs = std::filesystem;

namespace busod::cli {

namespace {

constexpr auto kVersion = "busod 1.0.0";
constexpr auto kMaxI64 = std::numeric_limits<std::int64_t>::max();

// Raised for flag combinations CLI11 cannot check on its own.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct stage_flags {
  seconds_t gap_seconds{300};
  double snap_meters{30.0};
  seconds_t margin_seconds{10};
  std::optional<seconds_t> epsilon_seconds;
  std::string hash_key;
};

void add_gap_flag(CLI::App* app, stage_flags& f) {
  app->add_option("--gap-seconds", f.gap_seconds,
                  "Sightings closer than this belong to one trip")
      ->check(CLI::Range(std::int64_t{1}, kMaxI64));
}

void add_snap_flags(CLI::App* app, stage_flags& f) {
  app->add_option("--snap-meters", f.snap_meters,
                  "Max distance from a door opening to its stop")
      ->check(CLI::PositiveNumber);
  app->add_option("--margin-seconds", f.margin_seconds,
                  "Stop-time margin, default for --epsilon-seconds")
      ->check(CLI::Range(std::int64_t{0}, kMaxI64));
}

void add_epsilon_flag(CLI::App* app, stage_flags& f) {
  app->add_option("--epsilon-seconds", f.epsilon_seconds,
                  "Tolerance around dwell windows [default: margin or 10]")
      ->check(CLI::Range(std::int64_t{0}, kMaxI64));
}

void add_hash_flag(CLI::App* app, stage_flags& f) {
  app->add_option("--hash-devices", f.hash_key,
                  "Replace device ids by a keyed one-way hash (key)");
}

std::vector<device_trip> derive_trips_step(
    std::vector<device_sighting> sightings, stage_flags const& f) {
  if (!f.hash_key.empty()) {
    for (auto& s : sightings) {
      s.device = hash_device(s.device, f.hash_key);
    }
    std::sort(begin(sightings), end(sightings),
              [](auto const& a, auto const& b) {
                return std::tie(a.at, a.device) < std::tie(b.at, b.device);
              });
  }
  return derive_trips(sightings, gap_threshold{f.gap_seconds});
}

void ensure_parent(fs::path const& p) {
  if (p.has_parent_path()) {
    fs::create_directories(p.parent_path());
  }
}

template <typename T>
void write_lines(fs::path const& p, T const& lines) {
  ensure_parent(p);
  std::ofstream out{p, std::ios::binary | std::ios::trunc};
  if (!out) {
    throw io_error("cannot write " + p.string());
  }
  out << lines;
  if (!out) {
    throw io_error("write failed: " + p.string());
  }
}

time_filter make_filter(std::optional<int> from, std::optional<int> to,
                        std::vector<std::string> const& days,
                        std::optional<std::string> const& route,
                        std::optional<std::string> const& dir) {
  time_filter f;
  if (from || to) {
    f.hour_range = std::pair{from.value_or(0), to.value_or(24)};
    if (f.hour_range->first >= f.hour_range->second) {
      throw usage_error(fmt::format(
          "--from-hour {} / --to-hour {}: empty hour range",
          f.hour_range->first, f.hour_range->second));
    }
  }
  if (!days.empty()) {
    f.day_kinds.clear();
    for (auto const& d : days) {
      auto const k = parse_day_kind(d);
      if (!k) {
        throw usage_error("--days: unknown day kind \"" + d + "\"");
      }
      f.day_kinds.insert(*k);
    }
  }
  f.route_id = route;
  if (dir) {
    f.dir = parse_direction(*dir);
    if (!f.dir) {
      throw usage_error("--direction must be outward or inward");
    }
  }
  return f;
}

std::string csv_double(double v) { return fmt::format("{:.6f}", v); }

}  // namespace

int run(std::vector<std::string> const& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Passenger journeys and OD matrices from Bluetooth sightings",
               "busod"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  stage_flags flags;

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a scenario dataset");
  std::string sim_config;
  std::string sim_out;
  std::optional<std::uint64_t> sim_seed;
  sim_cmd->add_option("--config", sim_config, "Scenario JSON")
      ->required()
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--out", sim_out, "Output directory")->required();
  sim_cmd->add_option("--seed", sim_seed, "Override the scenario seed");

  // derive-trips
  auto* trips_cmd =
      app.add_subcommand("derive-trips", "Sessionize sightings into trips");
  std::string trips_in;
  std::string trips_out;
  trips_cmd->add_option("--sightings", trips_in, "sightings.csv")
      ->required()
      ->check(CLI::ExistingFile);
  trips_cmd->add_option("--out", trips_out, "trips.csv")->required();
  add_gap_flag(trips_cmd, flags);
  add_hash_flag(trips_cmd, flags);

  // stop-visits
  auto* visits_cmd = app.add_subcommand(
      "stop-visits", "Extract runs and stop visits from localization");
  std::string visits_loc;
  std::string visits_net;
  std::string visits_out;
  std::string runs_out;
  visits_cmd->add_option("--localization", visits_loc, "localization.csv")
      ->required()
      ->check(CLI::ExistingFile);
  visits_cmd
      ->add_option("--network", visits_net,
                   "Directory with stops.csv and routes.csv")
      ->required()
      ->check(CLI::ExistingDirectory);
  visits_cmd->add_option("--out", visits_out, "visits.csv")->required();
  visits_cmd->add_option("--runs-out", runs_out, "runs.csv")->required();
  add_snap_flags(visits_cmd, flags);

  // correlate
  auto* corr_cmd = app.add_subcommand(
      "correlate", "Assign trips to boarding and alighting stops");
  std::string corr_trips;
  std::string corr_visits;
  std::string corr_runs;
  std::string corr_out;
  std::string corr_rejects;
  corr_cmd->add_option("--trips", corr_trips, "trips.csv")
      ->required()
      ->check(CLI::ExistingFile);
  corr_cmd->add_option("--visits", corr_visits, "visits.csv")
      ->required()
      ->check(CLI::ExistingFile);
  corr_cmd->add_option("--runs", corr_runs, "runs.csv")
      ->required()
      ->check(CLI::ExistingFile);
  corr_cmd->add_option("--out", corr_out, "journeys.jsonl")->required();
  corr_cmd->add_option("--rejects", corr_rejects, "rejects.jsonl")->required();
  add_epsilon_flag(corr_cmd, flags);

  // od-matrix
  auto* od_cmd = app.add_subcommand("od-matrix", "Aggregate journeys");
  std::string od_journeys;
  std::string od_out;
  std::optional<int> od_from;
  std::optional<int> od_to;
  std::vector<std::string> od_days;
  std::optional<std::string> od_route;
  std::optional<std::string> od_dir;
  std::string od_network;
  od_cmd->add_option("--journeys", od_journeys, "journeys.jsonl")
      ->required()
      ->check(CLI::ExistingFile);
  od_cmd->add_option("--out", od_out, "od.csv")->required();
  od_cmd->add_option("--from-hour", od_from, "First boarding hour (0-23)")
      ->check(CLI::Range(0, 23));
  od_cmd->add_option("--to-hour", od_to, "End boarding hour, exclusive")
      ->check(CLI::Range(1, 24));
  od_cmd
      ->add_option("--days", od_days,
                   "Day kinds: weekday, saturday, sunday [default: all]")
      ->delimiter(',');
  od_cmd->add_option("--route", od_route, "Only this route");
  od_cmd->add_option("--direction", od_dir, "outward or inward");
  od_cmd->add_option("--network", od_network,
                     "Network directory (directions.csv for --direction)");

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "Derived analyses");
  an_cmd->require_subcommand(1);
  std::string an_journeys;
  std::string an_out;

  auto* occ_cmd = an_cmd->add_subcommand("occupancy", "Mean onboard by hour");
  std::optional<std::int64_t> occ_days;
  std::string occ_runs;
  occ_cmd->add_option("--journeys", an_journeys)->required()->check(
      CLI::ExistingFile);
  occ_cmd->add_option("--out", an_out, "occupancy.csv")->required();
  occ_cmd->add_option("--service-days", occ_days, "Days to average over")
      ->check(CLI::Range(std::int64_t{1}, kMaxI64));
  occ_cmd->add_option("--runs", occ_runs, "runs.csv to count service days")
      ->check(CLI::ExistingFile);

  auto* dur_cmd = an_cmd->add_subcommand("durations", "Trip durations");
  seconds_t bucket_seconds = 300;
  dur_cmd->add_option("--journeys", an_journeys)->required()->check(
      CLI::ExistingFile);
  dur_cmd->add_option("--out", an_out, "durations.csv")->required();
  dur_cmd->add_option("--bucket-seconds", bucket_seconds, "Bucket width")
      ->check(CLI::Range(std::int64_t{1}, kMaxI64));

  auto* tix_cmd = an_cmd->add_subcommand(
      "tickets", "Correlate hourly journeys with ticket validations");
  std::string tix_tickets;
  std::string tix_runs;
  std::string tix_binning = "hour-of-day";
  tix_cmd->add_option("--journeys", an_journeys)->required()->check(
      CLI::ExistingFile);
  tix_cmd->add_option("--tickets", tix_tickets, "tickets.csv")
      ->required()
      ->check(CLI::ExistingFile);
  tix_cmd->add_option("--runs", tix_runs, "runs.csv")
      ->required()
      ->check(CLI::ExistingFile);
  tix_cmd->add_option("--out", an_out, "tickets_report.csv")->required();
  tix_cmd->add_option("--binning", tix_binning, "hour-of-day or absolute")
      ->check(CLI::IsMember({"hour-of-day", "absolute"}));

  auto* co_cmd = an_cmd->add_subcommand("cotravel", "Devices travelling together");
  seconds_t min_overlap = 120;
  std::int64_t min_encounters = 2;
  std::string groups_out;
  co_cmd->add_option("--journeys", an_journeys)->required()->check(
      CLI::ExistingFile);
  co_cmd->add_option("--out", an_out, "cotravel.csv")->required();
  co_cmd->add_option("--groups-out", groups_out, "groups.txt")->required();
  co_cmd->add_option("--min-overlap-seconds", min_overlap)
      ->check(CLI::Range(std::int64_t{0}, kMaxI64));
  co_cmd->add_option("--min-encounters", min_encounters)
      ->check(CLI::Range(std::int64_t{1}, kMaxI64));

  auto* pred_cmd =
      an_cmd->add_subcommand("predict", "Likely destination of one device");
  std::string pred_device;
  std::string pred_origin;
  std::string pred_day;
  int pred_hour = 0;
  int band_hours = 4;
  pred_cmd->add_option("--journeys", an_journeys)->required()->check(
      CLI::ExistingFile);
  pred_cmd->add_option("--device", pred_device)->required();
  pred_cmd->add_option("--origin", pred_origin)->required();
  pred_cmd->add_option("--day-kind", pred_day)
      ->required()
      ->check(CLI::IsMember({"weekday", "saturday", "sunday"}));
  pred_cmd->add_option("--hour", pred_hour)->required()->check(
      CLI::Range(0, 23));
  pred_cmd->add_option("--band-hours", band_hours)
      ->check(CLI::IsMember({1, 2, 3, 4, 6, 8, 12, 24}));

  // evaluate
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Score journeys against ground truth");
  std::string eval_journeys;
  std::string eval_truth;
  std::string eval_tickets;
  std::string eval_runs;
  std::string eval_truth_od;
  std::string eval_out;
  eval_cmd->add_option("--journeys", eval_journeys)->required()->check(
      CLI::ExistingFile);
  eval_cmd->add_option("--truth", eval_truth, "ground_truth.jsonl")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--tickets", eval_tickets)->check(CLI::ExistingFile);
  eval_cmd->add_option("--runs", eval_runs)->check(CLI::ExistingFile);
  eval_cmd->add_option("--truth-od", eval_truth_od,
                       "Write the ground-truth OD matrix here");
  eval_cmd->add_option("--out", eval_out, "Report file [default: stdout]");

  // pipeline
  auto* pipe_cmd = app.add_subcommand(
      "pipeline", "derive-trips, stop-visits, correlate and od-matrix");
  std::string pipe_data;
  std::string pipe_out;
  pipe_cmd->add_option("--data", pipe_data, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  pipe_cmd->add_option("--out", pipe_out, "Output directory")->required();
  add_gap_flag(pipe_cmd, flags);
  add_snap_flags(pipe_cmd, flags);
  add_epsilon_flag(pipe_cmd, flags);
  add_hash_flag(pipe_cmd, flags);

  std::vector<char const*> argv;
  argv.reserve(args.size());
  for (auto const& a : args) {
    argv.push_back(a.c_str());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (CLI::ParseError const& e) {
    auto const code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim_cmd->parsed()) {
      auto sc = load_scenario(sim_config);
      if (sim_seed) {
        sc.seed = *sim_seed;
      }
      write_simulation(simulate(sc), sim_out);
    } else if (trips_cmd->parsed()) {
      auto const trips = derive_trips_step(load_sightings(trips_in), flags);
      ensure_parent(trips_out);
      write_trips(trips_out, trips);
    } else if (visits_cmd->parsed()) {
      auto const loc = load_localization(visits_loc);
      auto const net = load_network(visits_net);
      auto const visits = derive_stop_visits(
          loc, net, snap_config{flags.snap_meters, flags.margin_seconds});
      ensure_parent(visits_out);
      ensure_parent(runs_out);
      write_stop_visits(visits_out, visits, flags.margin_seconds);
      write_runs(runs_out, derive_runs(loc));
    } else if (corr_cmd->parsed()) {
      std::optional<seconds_t> margin;
      auto const visits = load_stop_visits(corr_visits, &margin);
      auto const eps = flags.epsilon_seconds.value_or(margin.value_or(10));
      auto const result = correlate(load_trips(corr_trips), visits,
                                    load_runs(corr_runs),
                                    correlation_config{eps});
      ensure_parent(corr_out);
      ensure_parent(corr_rejects);
      write_journeys(corr_out, result.journeys);
      write_rejects(corr_rejects, result.rejected);
    } else if (od_cmd->parsed()) {
      auto const filter = make_filter(od_from, od_to, od_days, od_route, od_dir);
      if (filter.dir && od_network.empty()) {
        throw usage_error("--direction requires --network");
      }
      std::optional<network_model> net;
      if (!od_network.empty()) {
        net = load_network(od_network);
      }
      auto const m = build_od_matrix(load_journeys(od_journeys), filter,
                                     net ? &*net : nullptr);
      ensure_parent(od_out);
      write_od_matrix(m, od_out);
    } else if (occ_cmd->parsed()) {
      if (occ_days.has_value() == !occ_runs.empty()) {
        throw usage_error("give exactly one of --service-days and --runs");
      }
      auto const days =
          occ_days ? *occ_days : count_service_days(load_runs(occ_runs));
      auto const curve =
          occupancy_by_hour(load_journeys(an_journeys), std::max<std::int64_t>(1, days));
      std::ostringstream s;
      s << "hour,value\n";
      for (auto h = 0; h != 24; ++h) {
        s << h << ',' << csv_double(curve.value(h)) << '\n';
      }
      write_lines(an_out, s.str());
    } else if (dur_cmd->parsed()) {
      auto const hist =
          trip_duration_histogram(load_journeys(an_journeys), bucket_seconds);
      std::ostringstream s;
      s << "bucket_start_s,count\n";
      for (auto i = 0U; i != hist.counts.size(); ++i) {
        s << static_cast<seconds_t>(i) * hist.bucket_width_s << ','
          << hist.counts[i] << '\n';
      }
      write_lines(an_out, s.str());
    } else if (tix_cmd->parsed()) {
      auto const series = hourly_counts(
          load_journeys(an_journeys), load_tickets(tix_tickets),
          load_runs(tix_runs),
          tix_binning == "absolute" ? hour_binning::absolute
                                    : hour_binning::hour_of_day);
      auto const rep = ticket_correlation(series.device_trips, series.tickets);
      std::ostringstream s;
      s << "hour,device_trips,tickets\n";
      for (auto i = 0U; i != series.hour.size(); ++i) {
        s << series.hour[i] << ',' << series.device_trips[i] << ','
          << series.tickets[i] << '\n';
      }
      write_lines(an_out, s.str());
      out << fmt::format("r_squared={} scale_factor={} penetration={}\n",
                         csv_double(rep.r_squared),
                         csv_double(rep.scale_factor),
                         csv_double(rep.penetration));
    } else if (co_cmd->parsed()) {
      auto const rep = detect_cotravel(load_journeys(an_journeys), min_overlap,
                                       min_encounters);
      std::ostringstream s;
      s << "device_a,device_b,encounters\n";
      for (auto const& [pair, n] : rep.pair_encounters) {
        s << pair.first.str() << ',' << pair.second.str() << ',' << n << '\n';
      }
      write_lines(an_out, s.str());
      std::ostringstream g;
      for (auto const& group : rep.groups) {
        for (auto i = 0U; i != group.size(); ++i) {
          g << (i == 0 ? "" : " ") << group[i].str();
        }
        g << '\n';
      }
      write_lines(groups_out, g.str());
    } else if (pred_cmd->parsed()) {
      auto const device = [&] {
        try {
          return device_id::parse(pred_device);
        } catch (error const& e) {
          throw usage_error(std::string{"--device: "} + e.what());
        }
      }();
      auto const origin = [&] {
        try {
          return stop_id::parse(pred_origin);
        } catch (error const& e) {
          throw usage_error(std::string{"--origin: "} + e.what());
        }
      }();
      auto const od =
          build_individual_od(load_journeys(an_journeys), device, band_hours);
      auto const p = predict_destination(od, origin, *parse_day_kind(pred_day),
                                         pred_hour);
      if (p) {
        out << p->destination.str() << ',' << csv_double(p->confidence)
            << '\n';
      } else {
        out << "none\n";
      }
    } else if (eval_cmd->parsed()) {
      auto const truth = load_ground_truth(eval_truth);
      std::vector<ticket_validation> tickets;
      std::vector<run_interval> runs;
      if (!eval_tickets.empty() && !eval_runs.empty()) {
        tickets = load_tickets(eval_tickets);
        runs = load_runs(eval_runs);
      } else if (!eval_tickets.empty() || !eval_runs.empty()) {
        throw usage_error("--tickets and --runs go together");
      }
      auto const rep =
          evaluate(load_journeys(eval_journeys), truth, tickets, runs);
      if (!eval_truth_od.empty()) {
        ensure_parent(eval_truth_od);
        write_od_matrix(truth_od_matrix(truth), eval_truth_od);
      }
      if (eval_out.empty()) {
        out << to_json(rep) << '\n';
      } else {
        write_lines(eval_out, to_json(rep) + "\n");
      }
    } else if (pipe_cmd->parsed()) {
      fs::path const data{pipe_data};
      fs::path const dir{pipe_out};
      fs::create_directories(dir);
      auto const ds = load_dataset(data);
      auto const trips = derive_trips_step(ds.sightings, flags);
      auto const visits = derive_stop_visits(
          ds.localization, ds.network,
          snap_config{flags.snap_meters, flags.margin_seconds});
      auto const runs = derive_runs(ds.localization);
      auto const result =
          correlate(trips, visits, runs,
                    correlation_config{flags.epsilon_seconds.value_or(
                        flags.margin_seconds)});
      write_trips(dir / "trips.csv", trips);
      write_stop_visits(dir / "visits.csv", visits, flags.margin_seconds);
      write_runs(dir / "runs.csv", runs);
      write_journeys(dir / "journeys.jsonl", result.journeys);
      write_rejects(dir / "rejects.jsonl", result.rejected);
      write_od_matrix(build_od_matrix(result.journeys), dir / "od.csv");
      err << fmt::format("{} sightings, {} trips, {} visits, {} journeys, {} "
                         "rejected\n",
                         ds.sightings.size(), trips.size(), visits.size(),
                         result.journeys.size(), result.rejected.size());
    }
  } catch (usage_error const& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (error const& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (fs::filesystem_error const& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace busod::cli
