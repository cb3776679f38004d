#include "formation/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace formation {

Eigen::VectorXd rk4_step(const Derivative& f, const Eigen::VectorXd& x, double t, double dt,
                         const std::function<std::string(Eigen::Index)>& describe) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step needs dt > 0");
  const auto checked = [&](double ts, const Eigen::VectorXd& xs, int stage) {
    Eigen::VectorXd k = f(ts, xs);
    for (Eigen::Index i = 0; i < k.size(); ++i) {
      if (!std::isfinite(k(i))) {
        std::ostringstream os;
        os << "non-finite derivative at t=" << ts << " (stage " << stage << ") in "
           << (describe ? describe(i) : "component " + std::to_string(i));
        throw SimulationError(os.str(), ts);
      }
    }
    return k;
  };
  const Eigen::VectorXd k1 = checked(t, x, 1);
  const Eigen::VectorXd k2 = checked(t + 0.5 * dt, x + 0.5 * dt * k1, 2);
  const Eigen::VectorXd k3 = checked(t + 0.5 * dt, x + 0.5 * dt * k2, 3);
  const Eigen::VectorXd k4 = checked(t + dt, x + dt * k3, 4);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::string StateLayout::describe(Eigen::Index k) {
  static const char* center[] = {"x", "y", "z", "V", "gamma", "psi"};
  static const char* vehicle[] = {"x",       "y",       "z",       "vx",      "vy",
                                  "vz",      "r_hat.x", "r_hat.y", "r_hat.z", "v_hat.x",
                                  "v_hat.y", "v_hat.z", "int_u0.x", "int_u0.y", "int_u0.z"};
  if (k < kCenter) return std::string("center ") + center[k];
  const auto off = k - kCenter;
  return "vehicle " + std::to_string(off / kVehicle + 1) + " " + vehicle[off % kVehicle];
}

namespace {

FormationCenterState unpack_center(const Eigen::VectorXd& x) {
  FormationCenterState c;
  c.position = x.segment<3>(0);
  c.speed = x(3);
  c.path_angle = x(4);
  c.heading = x(5);
  return c;
}

UavState unpack_uav(const Eigen::VectorXd& x, std::size_t i) {
  const auto o = StateLayout::vehicle(i);
  return state_from_velocity(x.segment<3>(o), x.segment<3>(o + 3));
}

}  // namespace

struct ClosedLoop::Evaluation {
  FormationCenterState center;
  std::vector<VirtualLeaderRef> refs;
  std::vector<UavState> states;
  std::vector<FilterState> filters;
  std::vector<FilterStateRate> filter_rates;
  std::vector<TrackingErrors> errors;
  std::vector<VehicleRecord> records;
  std::vector<Vec3> accelerations;
};

ClosedLoop::ClosedLoop(const Scenario& sc) : sc_(sc), graph_(sc.graph()) {
  for (const auto& s : sc_.initial) v0_.push_back(s.velocity());
}

Eigen::VectorXd ClosedLoop::initial_state() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(StateLayout::size(sc_.n));
  x.segment<3>(0) = sc_.center.position;
  x(3) = sc_.center.speed;
  x(4) = sc_.center.path_angle;
  x(5) = sc_.center.heading;
  const auto filters = sc_.resolved_filter_initial();
  for (std::size_t i = 0; i < sc_.n; ++i) {
    const auto o = StateLayout::vehicle(i);
    const auto& s = sc_.initial[i];
    x.segment<3>(o) = s.position;
    x.segment<3>(o + 3) = s.velocity();
    x.segment<3>(o + 6) = filters[i].r_hat;
    x.segment<3>(o + 9) = filters[i].v_hat;
  }
  return x;
}

void ClosedLoop::evaluate(double t, const Eigen::VectorXd& x, const CenterInputs& in,
                          Evaluation& ev) const {
  const std::size_t n = sc_.n;
  ev.center = unpack_center(x);
  ev.refs = leader_refs(ev.center, in, sc_.layout);
  ev.states.resize(n);
  ev.filters.resize(n);
  ev.errors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto o = StateLayout::vehicle(i);
    ev.states[i] = unpack_uav(x, i);
    ev.filters[i] = {x.segment<3>(o + 6), x.segment<3>(o + 9)};
    ev.errors[i] = {ev.states[i].position - ev.filters[i].r_hat, x.segment<3>(o + 3) - ev.filters[i].v_hat};
  }
  ev.filter_rates = filter_derivative(ev.filters, ev.refs, graph_, sc_.filter);

  ev.records.resize(n);
  ev.accelerations.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto o = StateLayout::vehicle(i);
    const auto& s = ev.states[i];
    auto& r = ev.records[i];
    r.state = s;
    r.ref = ev.refs[i];
    r.filter = ev.filters[i];
    r.e_p = ev.errors[i].position;
    r.e_v = ev.errors[i].velocity;
    try {
      r.d_polar = disturbance_at(i, ev.states, t, sc_.disturbance, sc_.uav);
      r.d = disturbance_to_cartesian(r.d_polar, s);
      r.u0 = baseline_control(i, ev.errors, ev.refs[i].r_ddot, graph_, sc_.controller);
      const UdeState ude{sc_.ude_time_constants, x.segment<3>(o + 12), v0_[i]};
      r.d_hat = ude_estimate(ude, x.segment<3>(o + 3));
      r.d_tilde = r.d_hat - r.d;
      r.u = composite_control(r.u0, r.d_hat);
      r.actuators = cartesian_to_actuators(r.u, s, sc_.uav);
      ev.accelerations[i] = velocity_derivative(s, r.actuators, r.d_polar, sc_.uav);
    } catch (const EnvelopeError& e) {
      std::ostringstream os;
      os << "vehicle " << i + 1 << " at t=" << t << ": " << e.what();
      throw SimulationError(os.str(), t);
    }
  }
}

Eigen::VectorXd ClosedLoop::derivative(double t, const Eigen::VectorXd& x, const CenterInputs& in) const {
  Evaluation ev;
  evaluate(t, x, in, ev);
  Eigen::VectorXd dx(x.size());
  const auto cr = center_derivative(ev.center, in);
  dx.segment<3>(0) = cr.position;
  dx(3) = cr.speed;
  dx(4) = cr.path_angle;
  dx(5) = cr.heading;
  for (std::size_t i = 0; i < sc_.n; ++i) {
    const auto o = StateLayout::vehicle(i);
    dx.segment<3>(o) = x.segment<3>(o + 3);
    dx.segment<3>(o + 3) = ev.accelerations[i];
    dx.segment<3>(o + 6) = ev.filter_rates[i].r_hat;
    dx.segment<3>(o + 9) = ev.filter_rates[i].v_hat;
    dx.segment<3>(o + 12) = ev.records[i].u0;
  }
  return dx;
}

StepRecord ClosedLoop::record(double t, const Eigen::VectorXd& x, const CenterInputs& in) const {
  Evaluation ev;
  evaluate(t, x, in, ev);
  return {t, ev.center, in, std::move(ev.records)};
}

SimLog run(const Scenario& sc) {
  sc.validate();
  const ClosedLoop loop(sc);
  const auto steps = static_cast<std::size_t>(std::llround(sc.duration / sc.dt));
  auto breaks = sc.command.breakpoints();

  SimLog log;
  log.n = sc.n;
  log.dt = sc.dt;
  log.steps.reserve(steps + 1);

  Eigen::VectorXd x = loop.initial_state();
  log.steps.push_back(loop.record(0.0, x, sc.command.at(0.0)));
  const auto describe = [](Eigen::Index k) { return StateLayout::describe(k); };

  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * sc.dt;
    const double t1 = static_cast<double>(k + 1) * sc.dt;
    // Breakpoints strictly inside the step split it; ones within rounding
    // of a grid point already coincide with a step boundary.
    const double eps = 1e-9 * std::max(1.0, t1);
    std::vector<double> cuts{t0};
    for (double b : breaks) {
      if (b > t0 + eps && b < t1 - eps) cuts.push_back(b);
    }
    cuts.push_back(t1);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c], b = cuts[c + 1];
      const CenterInputs in = sc.command.on_interval(a, b);
      const Derivative f = [&](double t, const Eigen::VectorXd& s) { return loop.derivative(t, s, in); };
      x = rk4_step(f, x, a, b - a, describe);
    }
    log.steps.push_back(loop.record(t1, x, sc.command.at(t1)));
  }
  return log;
}

}  // namespace formation
