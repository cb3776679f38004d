#pragma once

#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "formation/controller.hpp"
#include "formation/simulation.hpp"

namespace formation {

class MetricsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct VehicleMetrics {
  // Against the rigid-formation reference r_i.
  double max_position_error = 0.0;
  double terminal_position_error = 0.0;
  double max_velocity_error = 0.0;
  double terminal_velocity_error = 0.0;
  // Against the filtered virtual leader.
  double terminal_tracking_error = 0.0;  // |e_p|
  double window_max_tracking_error = 0.0;
  // First time the reference error drops below the threshold, and the time
  // after which it never exceeds it again; negative when never reached.
  double first_converged_time = -1.0;
  double settled_time = -1.0;
  double mean_thrust = 0.0;            // over the window
  double thrust_reduction_pct = 0.0;   // vs vehicle 1, positive = less thrust
  double max_estimation_error = 0.0;   // |d_tilde| over the run
  double window_max_estimation_error = 0.0;
  std::size_t saturation_count = 0;
};

struct Metrics {
  double window_start = 0.0;
  double window_end = 0.0;
  double threshold = 0.0;
  std::vector<VehicleMetrics> vehicles;
  double trim_thrust = 0.0;        // straight-and-level at the center's initial speed
  double terminal_filter_error = 0.0;  // |(r_hat - r, v_hat - r_dot)| stacked
  ModalDecomposition modes;
};

/// Throws MetricsError for an empty log or a window outside it.
Metrics compute_metrics(const SimLog& log, const Scenario& sc);

nlohmann::json to_json(const Metrics& m);

}  // namespace formation
