#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "busod/model.h"

namespace busod {

struct rejected_trip;

// Everything the pipeline reads from one data directory.
struct dataset {
  std::vector<device_sighting> sightings;  // sorted by (at, device)
  std::vector<localization_record> localization;  // sorted by at
  std::vector<ticket_validation> tickets;  // sorted by at
  network_model network;
};

// Readers take the stream plus a source name used in error messages.
// Loaders open the file and delegate. All readers fail fast on the first
// malformed row with a format_error carrying the line number.

std::vector<device_sighting> read_sightings(std::istream&,
                                            std::string const& source);
std::vector<device_sighting> load_sightings(std::filesystem::path const&);
void write_sightings(std::ostream&, std::span<device_sighting const>);
void write_sightings(std::filesystem::path const&,
                     std::span<device_sighting const>);

// Also checks that the odometer never decreases within a contiguous
// in-service run (monotonicity_error).
std::vector<localization_record> read_localization(std::istream&,
                                                   std::string const& source);
std::vector<localization_record> load_localization(
    std::filesystem::path const&);
void write_localization(std::ostream&, std::span<localization_record const>);
void write_localization(std::filesystem::path const&,
                        std::span<localization_record const>);
void check_odometer_monotonic(std::span<localization_record const>);

std::vector<ticket_validation> read_tickets(std::istream&,
                                            std::string const& source);
std::vector<ticket_validation> load_tickets(std::filesystem::path const&);
void write_tickets(std::ostream&, std::span<ticket_validation const>);
void write_tickets(std::filesystem::path const&,
                   std::span<ticket_validation const>);

// stops.csv (stop_id,name,lat,lon), routes.csv (route_id,seq,stop_id) and an
// optional directions.csv (route_id,direction).
network_model read_network(std::istream& stops, std::string const& stops_src,
                           std::istream& routes,
                           std::string const& routes_src,
                           std::istream* directions = nullptr,
                           std::string const& directions_src = {});
network_model load_network(std::filesystem::path const& dir);
void write_network(std::filesystem::path const& dir, network_model const&);

// Long-format origin,destination,count with "#" comment lines for the filter
// descriptor and total.
od_matrix read_od_matrix(std::istream&, std::string const& source);
od_matrix load_od_matrix(std::filesystem::path const&);
void write_od_matrix(std::ostream&, od_matrix const&);
void write_od_matrix(od_matrix const&, std::filesystem::path const&);

std::vector<device_trip> read_trips(std::istream&, std::string const& source);
std::vector<device_trip> load_trips(std::filesystem::path const&);
void write_trips(std::ostream&, std::span<device_trip const>);
void write_trips(std::filesystem::path const&, std::span<device_trip const>);

// The optional margin travels as a "# margin_s: N" comment so that a later
// correlate step can default its tolerance to it.
std::vector<stop_visit> read_stop_visits(
    std::istream&, std::string const& source,
    std::optional<seconds_t>* margin_s = nullptr);
std::vector<stop_visit> load_stop_visits(
    std::filesystem::path const&,
    std::optional<seconds_t>* margin_s = nullptr);
void write_stop_visits(std::ostream&, std::span<stop_visit const>,
                       std::optional<seconds_t> margin_s = std::nullopt);
void write_stop_visits(std::filesystem::path const&,
                       std::span<stop_visit const>,
                       std::optional<seconds_t> margin_s = std::nullopt);

std::vector<run_interval> read_runs(std::istream&, std::string const& source);
std::vector<run_interval> load_runs(std::filesystem::path const&);
void write_runs(std::ostream&, std::span<run_interval const>);
void write_runs(std::filesystem::path const&, std::span<run_interval const>);

// JSON Lines.
std::vector<passenger_journey> read_journeys(std::istream&,
                                             std::string const& source);
std::vector<passenger_journey> load_journeys(std::filesystem::path const&);
void write_journeys(std::ostream&, std::span<passenger_journey const>);
void write_journeys(std::filesystem::path const&,
                    std::span<passenger_journey const>);

std::vector<rejected_trip> read_rejects(std::istream&,
                                        std::string const& source);
std::vector<rejected_trip> load_rejects(std::filesystem::path const&);
void write_rejects(std::ostream&, std::span<rejected_trip const>);
void write_rejects(std::filesystem::path const&,
                   std::span<rejected_trip const>);

// sightings.csv, localization.csv, stops.csv, routes.csv and, when present,
// tickets.csv and directions.csv.
dataset load_dataset(std::filesystem::path const& dir);

// Decimal degrees/meters with up to 6 fractional digits, trailing zeros
// trimmed.
std::string format_decimal(double v);

}  // namespace busod
