#include "formation/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "formation/log_io.hpp"
#include "formation/simulation.hpp"

namespace formation {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

DiagGain random_gain(Rng& rng, double lo, double hi) {
  return DiagGain(uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi));
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PropertyResult property(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, std::move(detail)};
}

SuiteReport graph_report(std::uint64_t seed) {
  SuiteReport r{"graph", {}};
  const auto s = spectral_suite(1000, seed);
  r.results.push_back(property("laplacian smallest eigenvalue is zero", s.max_abs_lambda_min <= 1e-9,
                               "max |lambda_min| = " + sci(s.max_abs_lambda_min) + " over " +
                                   std::to_string(s.graphs) + " graphs"));
  r.results.push_back(property("connected graphs have lambda_2 > 0", s.min_lambda2 > 1e-9,
                               "min lambda_2 = " + sci(s.min_lambda2)));
  r.results.push_back(property("disconnected graphs have lambda_2 = 0", s.max_disconnected_lambda2 <= 1e-9,
                               "max lambda_2 = " + sci(s.max_disconnected_lambda2)));
  r.results.push_back(property("pinned coupling matrix is positive definite", s.min_pinned > 1e-9,
                               "min lambda_min = " + sci(s.min_pinned)));
  r.results.push_back(property("suite runtime under 30 s", s.seconds < 30.0, sci(s.seconds) + " s"));
  return r;
}

SuiteReport filter_report(std::uint64_t seed) {
  SuiteReport r{"filter", {}};
  const auto s = filter_suite(100, seed);
  r.results.push_back(property("filter error matrix is Hurwitz", s.max_real_part < 0.0,
                               "max Re = " + sci(s.max_real_part) + " over " + std::to_string(s.draws) + " draws"));
  r.results.push_back(property("filter energy never increases", s.max_lyapunov_increase <= 1e-9,
                               "max relative increase = " + sci(s.max_lyapunov_increase)));
  return r;
}

SuiteReport ude_report() {
  SuiteReport r{"ude", {}};
  const double tc = 0.2;
  for (double a : {0.1, 1.0}) {
    for (double w : {0.5, 2.0}) {
      const auto h = ude_harness([=](double t) { return a * std::sin(w * t); }, tc, 20.0);
      const double bound = std::max(0.0, tc * a * w) + 1e-3;
      std::ostringstream name;
      name << "sinusoid A=" << a << " w=" << w << " stays within max(|d(0)|, T A w)";
      r.results.push_back(property(name.str(), h.max_error <= bound,
                                   "sup |d~| = " + sci(h.max_error) + ", bound " + sci(bound)));
    }
  }
  const auto c = ude_harness([](double) { return 0.7; }, tc, 8.0);
  r.results.push_back(property("constant disturbance estimate converges by 40 T", c.terminal_error < 1e-4,
                               "|d~(8)| = " + sci(c.terminal_error)));
  return r;
}

SuiteReport conversions_report(std::uint64_t seed) {
  SuiteReport r{"conversions", {}};
  const auto s = conversion_suite(10000, seed);
  r.results.push_back(property("cartesian/polar roundtrip", s.max_polar_roundtrip <= 1e-9,
                               "max error " + sci(s.max_polar_roundtrip)));
  r.results.push_back(property("polar/actuator roundtrip", s.max_actuator_roundtrip <= 1e-9 && s.clamped == 0,
                               "max error " + sci(s.max_actuator_roundtrip) + ", " + std::to_string(s.clamped) +
                                   " clamped draws skipped"));
  r.results.push_back(property("velocity form matches polar equations", s.max_vector_form_gap <= 1e-9,
                               "max gap " + sci(s.max_vector_form_gap)));
  r.results.push_back(property("suite runtime under 5 s", s.seconds < 5.0, sci(s.seconds) + " s"));
  return r;
}

SuiteReport closedloop_report() {
  SuiteReport r{"closedloop", {}};
  {
    const auto sc = equilibrium_scenario();
    const auto log = run(sc);
    double worst = 0.0;
    for (const auto& st : log.steps) {
      for (const auto& v : st.vehicles) worst = std::max(worst, (v.state.position - v.ref.r).norm());
    }
    r.results.push_back(property("equilibrium stays on its references", worst < 1e-6, "max |p - r| = " + sci(worst)));
  }
  const auto sc = Scenario::vshape5();
  const auto log = run(sc);
  double identity = 0.0;
  for (const auto& st : log.steps) {
    for (const auto& v : st.vehicles) {
      const Vec3 gap = (v.state.position - v.ref.r) - ((v.filter.r_hat - v.ref.r) + v.e_p);
      identity = std::max(identity, gap.norm() / std::max(1.0, v.state.position.norm()));
    }
  }
  r.results.push_back(property("p - r equals filter error plus tracking error", identity <= 1e-12,
                               "max scaled gap " + sci(identity)));
  std::ostringstream a, b;
  write_csv(a, log);
  write_csv(b, run(sc));
  r.results.push_back(property("identical scenarios give identical logs", a.str() == b.str(),
                               std::to_string(a.str().size()) + " bytes compared"));
  const auto modes = modal_decomposition(sc.graph(), sc.controller);
  bool hurwitz = true;
  for (const auto& m : modes.modes) hurwitz = hurwitz && m.hurwitz;
  r.results.push_back(property("every tracking mode is Hurwitz", hurwitz, std::to_string(modes.modes.size()) + " modes"));
  return r;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& p) { return p.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"graph", "filter", "ude", "conversions", "closedloop"};
  return names;
}

std::vector<SuiteReport> run_suite(std::string_view name, std::uint64_t seed) {
  if (name == "all") {
    std::vector<SuiteReport> out;
    for (const auto& s : suite_names()) out.push_back(run_suite(s, seed).front());
    return out;
  }
  if (name == "graph") return {graph_report(seed)};
  if (name == "filter") return {filter_report(seed)};
  if (name == "ude") return {ude_report()};
  if (name == "conversions") return {conversions_report(seed)};
  if (name == "closedloop") return {closedloop_report()};
  throw std::invalid_argument("unknown check suite '" + std::string(name) + "'");
}

FormationGraph random_connected_graph(std::size_t n, Rng& rng, double extra_edge_prob) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Edge> edges;
  Eigen::MatrixXi used = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t parent = order[std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)];
    edges.emplace_back(parent, order[k]);
    used(static_cast<Eigen::Index>(parent), static_cast<Eigen::Index>(order[k])) = 1;
    used(static_cast<Eigen::Index>(order[k]), static_cast<Eigen::Index>(parent)) = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!used(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) && uniform(rng, 0.0, 1.0) < extra_edge_prob) {
        edges.emplace_back(i, j);
      }
    }
  }
  return FormationGraph::build(n, edges);
}

SpectralSummary spectral_suite(std::size_t count, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(seed);
  SpectralSummary s;
  s.min_lambda2 = s.min_pinned = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const auto g = random_connected_graph(n, rng, uniform(rng, 0.0, 0.8));
    const auto spec = laplacian_spectrum(g);
    s.max_abs_lambda_min = std::max(s.max_abs_lambda_min, std::abs(spec(0)));
    s.min_lambda2 = std::min(s.min_lambda2, spec(1));

    PinningMatrix b{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
    for (Eigen::Index i = 0; i < b.diag.size(); ++i) {
      if (uniform(rng, 0.0, 1.0) < 0.4) b.diag(i) = uniform(rng, 0.1, 2.0);
    }
    if ((b.diag.array() > 0.0).count() == 0) {
      b.diag(std::uniform_int_distribution<Eigen::Index>(0, b.diag.size() - 1)(rng)) = uniform(rng, 0.1, 2.0);
    }
    const auto pinned = pinned_min_eigenvalue(g, b, random_gain(rng, 0.1, 2.0), random_gain(rng, 0.1, 2.0));
    s.min_pinned = std::min(s.min_pinned, pinned.value);

    // Dropping every edge of one vertex disconnects it.
    if (n >= 3) {
      const std::size_t cut = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      std::vector<Edge> kept;
      for (const auto& e : g.edges()) {
        if (e.first != cut && e.second != cut) kept.push_back(e);
      }
      const auto split = laplacian_spectrum(FormationGraph::build(n, kept));
      s.max_disconnected_lambda2 = std::max(s.max_disconnected_lambda2, std::abs(split(1)));
    }
    ++s.graphs;
  }
  s.seconds = seconds_since(t0);
  return s;
}

FilterSummary filter_suite(std::size_t draws, std::uint64_t seed) {
  Rng rng(seed);
  FilterSummary s;
  s.max_real_part = -std::numeric_limits<double>::infinity();
  const auto check = [&](const FormationGraph& g, const FilterGains& gains) {
    const Eigen::MatrixXd a = filter_error_matrix(g, gains);
    s.max_real_part = std::max(s.max_real_part, a.eigenvalues().real().maxCoeff());
    const Eigen::Index half = a.rows() / 2;
    Eigen::VectorXd e(a.rows());
    for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = uniform(rng, -10.0, 10.0);
    const Derivative f = [&](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; };
    double v_prev = filter_lyapunov(g, gains, e.head(half), e.tail(half));
    for (int k = 0; k < 2000; ++k) {
      e = rk4_step(f, e, 0.01 * k, 0.01);
      const double v = filter_lyapunov(g, gains, e.head(half), e.tail(half));
      s.max_lyapunov_increase = std::max(s.max_lyapunov_increase, (v - v_prev) / std::max(1.0, v_prev));
      v_prev = v;
    }
    ++s.draws;
  };
  const auto preset = Scenario::vshape5();
  check(preset.graph(), preset.filter);
  for (std::size_t k = 0; k < draws; ++k) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const auto g = random_connected_graph(n, rng);
    FilterGains gains;
    gains.kappa_p = random_gain(rng, 0.1, 3.0);
    gains.kappa_v = random_gain(rng, 0.1, 3.0);
    gains.c_p = random_gain(rng, 0.05, 2.0);
    gains.c_v = random_gain(rng, 0.05, 2.0);
    check(g, gains);
  }
  return s;
}

UdeHarnessResult ude_harness(const std::function<double(double)>& d, double time_constant, double duration,
                             double dt) {
  // State: position, velocity, integral of u0.
  constexpr double kp = 1.0, kv = 2.0;
  const Eigen::Vector3d x0(0.5, -0.2, 0.0);
  const double v0 = x0(1);
  const auto estimate = [&](const Eigen::VectorXd& x) { return (x(1) - v0 - x(2)) / time_constant; };
  const Derivative f = [&](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double u0 = -kp * x(0) - kv * x(1);
    const double u = u0 - estimate(x);
    return Eigen::Vector3d(x(1), u + d(t), u0);
  };
  UdeHarnessResult r;
  Eigen::VectorXd x = x0;
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  r.max_error = std::abs(estimate(x) - d(0.0));
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    x = rk4_step(f, x, t, dt);
    r.terminal_error = std::abs(estimate(x) - d(t + dt));
    r.max_error = std::max(r.max_error, r.terminal_error);
  }
  return r;
}

ConversionSummary conversion_suite(std::size_t count, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(seed);
  const UavParams p = UavParams::f16();
  ConversionSummary s;
  for (std::size_t k = 0; k < count; ++k) {
    UavState st;
    st.position = Vec3(uniform(rng, -1e3, 1e3), uniform(rng, -1e3, 1e3), uniform(rng, -6e3, -1e3));
    st.speed = uniform(rng, 60.0, 300.0);
    st.path_angle = uniform(rng, -1.3, 1.3);
    st.course_angle = uniform(rng, -std::numbers::pi, std::numbers::pi);
    const Vec3 u(uniform(rng, -20.0, 20.0), uniform(rng, -20.0, 20.0), uniform(rng, -20.0, 20.0));

    const auto polar = cartesian_to_polar(u, st);
    s.max_polar_roundtrip = std::max(s.max_polar_roundtrip, (polar_to_cartesian(polar, st) - u).norm());

    // Speed-channel command drawn above the value that zeroes thrust.
    const double u_v_min = -kGravity * std::sin(st.path_angle) - drag(st, p) / p.mass;
    const PolarControls cmd{u_v_min + uniform(rng, 0.01, 30.0), uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2)};
    const auto act = polar_to_actuators(cmd, st, p);
    if (act.thrust_saturated) {
      ++s.clamped;
    } else {
      const auto back = actuators_to_polar(act, st, p);
      const double err = std::max({std::abs(back.speed - cmd.speed), std::abs(back.path - cmd.path),
                                   std::abs(back.course - cmd.course)});
      s.max_actuator_roundtrip = std::max(s.max_actuator_roundtrip, err);
    }

    const PolarDisturbance d{uniform(rng, -1.0, 1.0), uniform(rng, -0.01, 0.01), uniform(rng, -0.01, 0.01)};
    const auto rate = state_derivative(st, act, d, p);
    const PolarTriple polar_rate{rate.speed, rate.path_angle, rate.course_angle};
    const Vec3 via_polar = polar_to_cartesian(polar_rate, st);
    s.max_vector_form_gap =
        std::max(s.max_vector_form_gap, (velocity_derivative(st, act, d, p) - via_polar).norm());
  }
  s.states = count;
  s.seconds = seconds_since(t0);
  return s;
}

Scenario equilibrium_scenario(double duration) {
  Scenario sc = Scenario::vshape5();
  sc.name = "equilibrium";
  sc.command = CenterCommand{};
  sc.duration = duration;
  sc.metrics.window_start = 0.0;
  sc.metrics.window_end = duration;
  const auto refs = leader_refs(sc.center, CenterInputs{}, sc.layout);
  for (std::size_t i = 0; i < sc.n; ++i) sc.initial[i] = state_from_velocity(refs[i].r, refs[i].r_dot);
  return sc;
}

}  // namespace formation
