#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace busod {

// Base of every data error raised by the library. The CLI maps these to exit
// code 2.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct malformed_device_id : error {
  using error::error;
};

struct malformed_device_class : error {
  using error::error;
};

struct malformed_timestamp : error {
  using error::error;
};

// A value violates one of its type's invariants.
struct invalid_value : error {
  using error::error;
};

struct io_error : error {
  using error::error;
};

struct format_error : error {
  format_error(std::string source, std::size_t line, std::string const& what)
      : error(source + ":" + std::to_string(line) + ": " + what),
        source_{std::move(source)},
        line_{line} {}

  std::string const& source() const { return source_; }
  std::size_t line() const { return line_; }

private:
  std::string source_;
  std::size_t line_;
};

struct monotonicity_error : error {
  explicit monotonicity_error(std::string run_id)
      : error("odometer decreases within run " + run_id),
        run_id_{std::move(run_id)} {}
  std::string const& run_id() const { return run_id_; }

private:
  std::string run_id_;
};

struct unknown_stop : error {
  unknown_stop(std::string route_id, std::string stop_id)
      : error("route " + route_id + " references undefined stop " + stop_id),
        route_id_{std::move(route_id)},
        stop_id_{std::move(stop_id)} {}
  std::string const& route_id() const { return route_id_; }
  std::string const& stop_id() const { return stop_id_; }

private:
  std::string route_id_;
  std::string stop_id_;
};

struct unknown_route : error {
  explicit unknown_route(std::string route_id)
      : error("run references unknown route " + route_id),
        route_id_{std::move(route_id)} {}
  std::string const& route_id() const { return route_id_; }

private:
  std::string route_id_;
};

struct out_of_order_visit : error {
  explicit out_of_order_visit(std::string run_id)
      : error("stop visits out of route order in run " + run_id),
        run_id_{std::move(run_id)} {}
  std::string const& run_id() const { return run_id_; }

private:
  std::string run_id_;
};

struct unsorted_input : error {
  using error::error;
};

struct degenerate_series : error {
  using error::error;
};

struct infeasible_schedule : error {
  using error::error;
};

}  // namespace busod
