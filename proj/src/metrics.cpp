#include "formation/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace formation {

Metrics compute_metrics(const SimLog& log, const Scenario& sc) {
  if (log.steps.empty()) throw MetricsError("metrics need a non-empty log");
  const double t_first = log.steps.front().t, t_last = log.steps.back().t;
  const auto& ms = sc.metrics;
  const double slack = 1e-9 * std::max(1.0, t_last);
  if (ms.window_start < t_first - slack || ms.window_end > t_last + slack || !(ms.window_start < ms.window_end)) {
    throw MetricsError("metrics window [" + format_double(ms.window_start) + ", " + format_double(ms.window_end) +
                       "] is outside the log range [" + format_double(t_first) + ", " + format_double(t_last) + "]");
  }

  Metrics m;
  m.window_start = ms.window_start;
  m.window_end = ms.window_end;
  m.threshold = ms.convergence_threshold;
  m.vehicles.resize(log.n);
  std::vector<std::size_t> window_samples(log.n, 0);

  for (const auto& st : log.steps) {
    const bool in_window = st.t >= ms.window_start - slack && st.t <= ms.window_end + slack;
    for (std::size_t i = 0; i < log.n; ++i) {
      const auto& r = st.vehicles[i];
      auto& v = m.vehicles[i];
      const double pos = (r.state.position - r.ref.r).norm();
      const double vel = (r.state.velocity() - r.ref.r_dot).norm();
      const double est = r.d_tilde.norm();
      v.max_position_error = std::max(v.max_position_error, pos);
      v.max_velocity_error = std::max(v.max_velocity_error, vel);
      v.max_estimation_error = std::max(v.max_estimation_error, est);
      if (pos < ms.convergence_threshold) {
        if (v.first_converged_time < 0.0) v.first_converged_time = st.t;
        if (v.settled_time < 0.0) v.settled_time = st.t;
      } else {
        v.settled_time = -1.0;
      }
      v.saturation_count += r.actuators.thrust_saturated ? 1 : 0;
      if (in_window) {
        v.mean_thrust += r.actuators.thrust;
        v.window_max_tracking_error = std::max(v.window_max_tracking_error, r.e_p.norm());
        v.window_max_estimation_error = std::max(v.window_max_estimation_error, est);
        ++window_samples[i];
      }
    }
  }

  const auto& last = log.steps.back();
  for (std::size_t i = 0; i < log.n; ++i) {
    auto& v = m.vehicles[i];
    const auto& r = last.vehicles[i];
    v.terminal_position_error = (r.state.position - r.ref.r).norm();
    v.terminal_velocity_error = (r.state.velocity() - r.ref.r_dot).norm();
    v.terminal_tracking_error = r.e_p.norm();
    v.mean_thrust /= static_cast<double>(std::max<std::size_t>(window_samples[i], 1));
  }
  for (auto& v : m.vehicles) {
    const double lead = m.vehicles.front().mean_thrust;
    v.thrust_reduction_pct = lead != 0.0 ? 100.0 * (lead - v.mean_thrust) / lead : 0.0;
  }

  double filter_sq = 0.0;
  for (const auto& r : last.vehicles) {
    filter_sq += (r.filter.r_hat - r.ref.r).squaredNorm() + (r.filter.v_hat - r.ref.r_dot).squaredNorm();
  }
  m.terminal_filter_error = std::sqrt(filter_sq);

  UavState level;
  level.speed = sc.center.speed;
  m.trim_thrust = trim_thrust(level, sc.uav);
  const auto g = sc.graph();
  if (g.is_connected()) m.modes = modal_decomposition(g, sc.controller);
  return m;
}

nlohmann::json to_json(const Metrics& m) {
  using nlohmann::json;
  json out;
  out["window"] = {m.window_start, m.window_end};
  out["convergence_threshold"] = m.threshold;
  out["trim_thrust"] = m.trim_thrust;
  out["terminal_filter_error"] = m.terminal_filter_error;
  json vehicles = json::array();
  for (std::size_t i = 0; i < m.vehicles.size(); ++i) {
    const auto& v = m.vehicles[i];
    vehicles.push_back({
        {"vehicle", i + 1},
        {"max_position_error", v.max_position_error},
        {"terminal_position_error", v.terminal_position_error},
        {"max_velocity_error", v.max_velocity_error},
        {"terminal_velocity_error", v.terminal_velocity_error},
        {"terminal_tracking_error", v.terminal_tracking_error},
        {"window_max_tracking_error", v.window_max_tracking_error},
        {"first_converged_time", v.first_converged_time < 0.0 ? json(nullptr) : json(v.first_converged_time)},
        {"settled_time", v.settled_time < 0.0 ? json(nullptr) : json(v.settled_time)},
        {"mean_thrust", v.mean_thrust},
        {"thrust_reduction_pct", v.thrust_reduction_pct},
        {"max_estimation_error", v.max_estimation_error},
        {"window_max_estimation_error", v.window_max_estimation_error},
        {"saturation_count", v.saturation_count},
    });
  }
  out["vehicles"] = vehicles;
  json modes = json::array();
  for (const auto& md : m.modes.modes) {
    modes.push_back({{"mode", md.index + 1},
                     {"axis", std::string(1, kAxisNames[md.axis])},
                     {"lambda", md.lambda},
                     {"dc_gain", md.dc_gain},
                     {"dc_gain_swapped", md.dc_gain_swapped},
                     {"ultimate_bound_factor", md.ultimate_bound_factor},
                     {"pole_real", {md.poles(0).real(), md.poles(1).real()}},
                     {"pole_imag", {md.poles(0).imag(), md.poles(1).imag()}}});
  }
  out["modes"] = modes;
  return out;
}

}  // namespace formation
