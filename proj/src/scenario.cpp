#include "formation/scenario.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace formation {

Scenario Scenario::vshape5() {
  using std::numbers::pi;
  Scenario sc;
  sc.name = "vshape5";
  sc.uav = UavParams::f16();
  sc.n = 5;
  sc.edges = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}};
  const double b = sc.uav.wing_span;
  sc.layout.offsets = {Vec3(8 * b, 0, 0), Vec3(2 * b, b, 0), Vec3(0, -b, 0), Vec3(-4 * b, 2 * b, 0),
                       Vec3(-6 * b, -b, 0)};
  sc.center.position = Vec3(26.87, 200.0, -5000.0);
  sc.center.speed = 120.0;
  sc.command.path_rate = Schedule({{10, 45, pi / 60}, {45, 80, -pi / 60}});
  sc.command.heading_rate = Schedule({{10, 40, pi / 1080}, {50, 80, -pi / 1080}});
  const auto uav = [](double x, double y, double z, double v, double psi) {
    UavState s;
    s.position = Vec3(x, y, z);
    s.speed = v;
    s.course_angle = psi;
    return s;
  };
  sc.initial = {uav(190, 190, -5005, 121, 0), uav(155, 215, -5015, 116, 0),
                uav(140, 182, -5005, 115, pi / 120), uav(85, 225, -5015, 119, 0),
                uav(65, 172, -5015, 120, pi / 100)};
  sc.ude_time_constants = Vec3::Constant(0.2);
  sc.dt = 0.01;
  sc.duration = 120.0;
  return sc;
}

std::vector<FilterState> Scenario::resolved_filter_initial() const {
  if (!filter_initial.empty()) return filter_initial;
  std::vector<FilterState> out;
  for (const auto& s : initial) out.push_back({s.position, s.velocity()});
  return out;
}

std::vector<std::string> Scenario::validate() const {
  std::vector<std::string> warnings;
  const auto bad = [](const std::string& m) { throw ConfigError(m); };
  if (!(dt > 0.0)) bad("scenario.dt must be positive");
  if (!(duration >= dt)) bad("scenario.duration must be at least one step");
  if (n == 0) bad("graph.n must be at least 1");
  if (layout.offsets.size() != n) {
    bad("layout has " + std::to_string(layout.offsets.size()) + " offsets for " + std::to_string(n) +
        " vehicles");
  }
  if (initial.size() != n) {
    bad(std::to_string(initial.size()) + " vehicle initial states for " + std::to_string(n) + " vehicles");
  }
  if (!filter_initial.empty() && filter_initial.size() != n) {
    bad(std::to_string(filter_initial.size()) + " filter initial states for " + std::to_string(n) +
        " vehicles");
  }
  const auto section = [](const char* name, const auto& check) {
    try {
      check();
    } catch (const std::exception& e) {
      throw ConfigError(std::string(name) + ": " + e.what());
    }
  };
  section("uav", [&] { uav.validate(); });
  section("filter", [&] { filter.validate(); });
  section("controller", [&] { controller.validate(); });
  section("disturbance", [&] { disturbance.validate(); });
  if (!graph().is_connected()) warnings.push_back("communication graph is not connected");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string key = "vehicle." + std::to_string(i + 1);
    if (!initial[i].position.allFinite() || !std::isfinite(initial[i].speed)) bad(key + ": initial state is not finite");
    section(key.c_str(), [&] { check_envelope(initial[i]); });
  }
  if ((ude_time_constants.array() <= 0.0).any() || !ude_time_constants.allFinite()) {
    bad("ude.T must be positive");
  }
  if (!(center.speed > 0.0)) bad("center.speed must be positive");
  if (!(metrics.window_start < metrics.window_end) || metrics.window_start < 0.0 ||
      metrics.window_end > duration + 1e-9) {
    bad("metrics.window must satisfy 0 <= start < end <= duration");
  }
  if (!(metrics.convergence_threshold > 0.0)) bad("metrics.convergence_threshold must be positive");
  return warnings;
}

namespace {

std::string vec_text(const Vec3& v) {
  return format_double(v.x()) + ", " + format_double(v.y()) + ", " + format_double(v.z());
}

std::string schedule_text(const Schedule& s) {
  std::string out;
  for (const auto& seg : s.segments()) {
    if (!out.empty()) out += ", ";
    out += format_double(seg.start) + ":" + format_double(seg.end) + ":" + format_double(seg.value);
  }
  return out;
}

Schedule read_schedule(Config& cfg, const std::string& key, const Schedule& fallback) {
  if (!cfg.has(key)) return fallback;
  std::vector<Schedule::Segment> segs;
  const std::string raw = cfg.text(key);
  if (trim(raw).empty()) return Schedule();
  for (const auto& item : split_list(raw)) {
    const auto parts = split_list(item, ':');
    if (parts.size() != 3) cfg.fail(key, "segment '" + item + "' is not start:end:value");
    Schedule::Segment seg{};
    double* fields[3] = {&seg.start, &seg.end, &seg.value};
    for (int k = 0; k < 3; ++k) {
      *fields[k] = cfg.evaluate(key, parts[k]);
    }
    segs.push_back(seg);
  }
  try {
    return Schedule(std::move(segs));
  } catch (const std::invalid_argument& e) {
    cfg.fail(key, e.what());
  }
}

std::size_t read_index(Config& cfg, const std::string& key, const std::string& token) {
  unsigned long long v = 0;
  const auto t = trim(token);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    cfg.fail(key, "'" + t + "' is not a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

std::vector<Edge> read_edges(Config& cfg, const std::string& key, std::size_t n) {
  std::vector<Edge> edges;
  const std::string raw = cfg.text(key);
  if (trim(raw).empty()) return edges;
  for (const auto& item : split_list(raw)) {
    const auto parts = split_list(item, '-');
    if (parts.size() != 2) cfg.fail(key, "edge '" + item + "' is not i-j");
    const std::size_t i = read_index(cfg, key, parts[0]);
    const std::size_t j = read_index(cfg, key, parts[1]);
    if (i < 1 || j < 1 || i > n || j > n) {
      cfg.fail(key, "edge '" + item + "' refers to a vehicle outside 1.." + std::to_string(n));
    }
    edges.emplace_back(i - 1, j - 1);
  }
  return edges;
}

}  // namespace

Scenario scenario_from_config(Config& cfg) {
  Scenario sc;
  const Scenario defaults;

  sc.name = cfg.text_or("scenario.name", defaults.name);
  sc.dt = cfg.number_or("scenario.dt", defaults.dt);
  sc.duration = cfg.number_or("scenario.duration", defaults.duration);
  if (cfg.has("scenario.seed")) sc.seed = read_index(cfg, "scenario.seed", cfg.text("scenario.seed"));

  auto& u = sc.uav;
  u.mass = cfg.number_or("uav.mass", u.mass);
  u.wing_area = cfg.number_or("uav.wing_area", u.wing_area);
  u.wing_span = cfg.number_or("uav.wing_span", u.wing_span);
  u.drag_coeff = cfg.number_or("uav.drag_coeff", u.drag_coeff);
  u.lift_bias = cfg.number_or("uav.lift_bias", u.lift_bias);
  if (cfg.has("uav.lift_slope")) u.lift_slope = cfg.number("uav.lift_slope");
  u.lift_curve_slope = cfg.number_or("uav.lift_curve_slope", u.lift_curve_slope);
  u.air_density = cfg.number_or("uav.air_density", u.air_density);
  cfg.define("b", u.wing_span);

  const double n_raw = cfg.number("graph.n");
  if (n_raw < 1 || n_raw != std::floor(n_raw) || n_raw > 1000) cfg.fail("graph.n", "must be an integer in 1..1000");
  sc.n = static_cast<std::size_t>(n_raw);
  sc.edges = cfg.has("graph.edges") ? read_edges(cfg, "graph.edges", sc.n) : std::vector<Edge>{};

  for (std::size_t i = 1; i <= sc.n; ++i) {
    const std::string id = std::to_string(i);
    sc.layout.offsets.push_back(cfg.vec3("layout.p" + id));
    UavState s;
    const std::string v = "vehicle." + id + ".";
    s.position = cfg.vec3(v + "position");
    s.speed = cfg.number(v + "speed");
    s.path_angle = cfg.number_or(v + "path_angle", 0.0);
    s.course_angle = cfg.number_or(v + "course_angle", 0.0);
    sc.initial.push_back(s);
  }
  bool any_filter = false;
  for (std::size_t i = 1; i <= sc.n; ++i) {
    any_filter |= cfg.has("filter." + std::to_string(i) + ".r_hat");
  }
  if (any_filter) {
    for (std::size_t i = 1; i <= sc.n; ++i) {
      const std::string f = "filter." + std::to_string(i) + ".";
      sc.filter_initial.push_back({cfg.vec3(f + "r_hat"), cfg.vec3(f + "v_hat")});
    }
  }

  sc.center.position = cfg.vec3_or("center.position", defaults.center.position);
  sc.center.speed = cfg.number("center.speed");
  sc.center.path_angle = cfg.number_or("center.path_angle", 0.0);
  sc.center.heading = cfg.number_or("center.heading", 0.0);
  sc.command.accel = read_schedule(cfg, "command.accel", {});
  sc.command.path_rate = read_schedule(cfg, "command.path_rate", {});
  sc.command.heading_rate = read_schedule(cfg, "command.heading_rate", {});

  sc.filter.kappa_p = cfg.vec3_or("filter.kappa_p", defaults.filter.kappa_p);
  sc.filter.kappa_v = cfg.vec3_or("filter.kappa_v", defaults.filter.kappa_v);
  sc.filter.c_p = cfg.vec3_or("filter.c_p", defaults.filter.c_p);
  sc.filter.c_v = cfg.vec3_or("filter.c_v", defaults.filter.c_v);
  sc.controller.k_p = cfg.vec3_or("controller.Kp", defaults.controller.k_p);
  sc.controller.k_v = cfg.vec3_or("controller.Kv", defaults.controller.k_v);
  sc.controller.c_p = cfg.vec3_or("controller.Cp", defaults.controller.c_p);
  sc.controller.c_v = cfg.vec3_or("controller.Cv", defaults.controller.c_v);
  sc.ude_time_constants = cfg.vec3_or("ude.T", defaults.ude_time_constants);

  auto& d = sc.disturbance;
  if (cfg.has("disturbance.kind")) {
    try {
      d.kind = disturbance_kind_from_string(cfg.text("disturbance.kind"));
    } catch (const std::invalid_argument& e) {
      cfg.fail("disturbance.kind", e.what());
    }
  }
  d.constant = cfg.vec3_or("disturbance.constant", d.constant);
  d.caps = cfg.vec3_or("disturbance.caps", d.caps);
  d.rate_caps = cfg.vec3_or("disturbance.rate_caps", d.rate_caps);
  d.sinusoid.amplitude = cfg.vec3_or("disturbance.sinusoid.amplitude", d.sinusoid.amplitude);
  d.sinusoid.frequency = cfg.vec3_or("disturbance.sinusoid.frequency", d.sinusoid.frequency);
  d.sinusoid.phase = cfg.vec3_or("disturbance.sinusoid.phase", d.sinusoid.phase);
  d.sinusoid.vehicle_phase_step =
      cfg.number_or("disturbance.sinusoid.vehicle_phase_step", d.sinusoid.vehicle_phase_step);
  d.ramp.final_value = cfg.vec3_or("disturbance.ramp.final_value", d.ramp.final_value);
  d.ramp.start = cfg.number_or("disturbance.ramp.start", d.ramp.start);
  d.ramp.duration = cfg.number_or("disturbance.ramp.duration", d.ramp.duration);
  auto& vx = d.vortex;
  vx.circulation = cfg.number_or("disturbance.vortex.circulation", vx.circulation);
  vx.core_radius = cfg.number_or("disturbance.vortex.core_radius", vx.core_radius);
  vx.span_fraction = cfg.number_or("disturbance.vortex.span_fraction", vx.span_fraction);
  const double samples = cfg.number_or("disturbance.vortex.span_samples", vx.span_samples);
  if (samples < 1 || samples != std::floor(samples) || samples > 1001) {
    cfg.fail("disturbance.vortex.span_samples", "must be an integer in 1..1001");
  }
  vx.span_samples = static_cast<int>(samples);
  vx.lift_gain = cfg.number_or("disturbance.vortex.lift_gain", vx.lift_gain);
  vx.side_force_gain = cfg.number_or("disturbance.vortex.side_force_gain", vx.side_force_gain);

  if (cfg.has("metrics.window")) {
    const auto w = cfg.numbers("metrics.window");
    if (w.size() != 2) cfg.fail("metrics.window", "expected start, end");
    sc.metrics.window_start = w[0];
    sc.metrics.window_end = w[1];
  }
  sc.metrics.convergence_threshold =
      cfg.number_or("metrics.convergence_threshold", defaults.metrics.convergence_threshold);

  cfg.reject_unused();
  return sc;
}

std::string scenario_to_config(const Scenario& sc) {
  std::ostringstream o;
  const auto kv = [&](const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; };
  const auto num = [&](const std::string& k, double v) { kv(k, format_double(v)); };

  o << "[scenario]\n";
  kv("name", sc.name);
  num("dt", sc.dt);
  num("duration", sc.duration);
  kv("seed", std::to_string(sc.seed));

  o << "\n[uav]\n";
  num("mass", sc.uav.mass);
  num("wing_area", sc.uav.wing_area);
  num("wing_span", sc.uav.wing_span);
  num("drag_coeff", sc.uav.drag_coeff);
  num("lift_bias", sc.uav.lift_bias);
  if (sc.uav.lift_slope) num("lift_slope", *sc.uav.lift_slope);
  num("lift_curve_slope", sc.uav.lift_curve_slope);
  num("air_density", sc.uav.air_density);

  o << "\n[graph]\n";
  kv("n", std::to_string(sc.n));
  std::string edges;
  for (const auto& [i, j] : sc.edges) {
    if (!edges.empty()) edges += ", ";
    edges += std::to_string(i + 1) + "-" + std::to_string(j + 1);
  }
  kv("edges", edges);

  o << "\n[layout]\n";
  for (std::size_t i = 0; i < sc.layout.offsets.size(); ++i) {
    kv("p" + std::to_string(i + 1), vec_text(sc.layout.offsets[i]));
  }

  o << "\n[center]\n";
  kv("position", vec_text(sc.center.position));
  num("speed", sc.center.speed);
  num("path_angle", sc.center.path_angle);
  num("heading", sc.center.heading);

  o << "\n[command]\n";
  kv("accel", schedule_text(sc.command.accel));
  kv("path_rate", schedule_text(sc.command.path_rate));
  kv("heading_rate", schedule_text(sc.command.heading_rate));

  for (std::size_t i = 0; i < sc.initial.size(); ++i) {
    const auto& s = sc.initial[i];
    o << "\n[vehicle." << i + 1 << "]\n";
    kv("position", vec_text(s.position));
    num("speed", s.speed);
    num("path_angle", s.path_angle);
    num("course_angle", s.course_angle);
  }
  for (std::size_t i = 0; i < sc.filter_initial.size(); ++i) {
    o << "\n[filter." << i + 1 << "]\n";
    kv("r_hat", vec_text(sc.filter_initial[i].r_hat));
    kv("v_hat", vec_text(sc.filter_initial[i].v_hat));
  }

  o << "\n[filter]\n";
  kv("kappa_p", vec_text(sc.filter.kappa_p));
  kv("kappa_v", vec_text(sc.filter.kappa_v));
  kv("c_p", vec_text(sc.filter.c_p));
  kv("c_v", vec_text(sc.filter.c_v));

  o << "\n[controller]\n";
  kv("Kp", vec_text(sc.controller.k_p));
  kv("Kv", vec_text(sc.controller.k_v));
  kv("Cp", vec_text(sc.controller.c_p));
  kv("Cv", vec_text(sc.controller.c_v));

  o << "\n[ude]\n";
  kv("T", vec_text(sc.ude_time_constants));

  const auto& d = sc.disturbance;
  o << "\n[disturbance]\n";
  kv("kind", std::string(to_string(d.kind)));
  kv("constant", vec_text(d.constant));
  kv("caps", vec_text(d.caps));
  kv("rate_caps", vec_text(d.rate_caps));
  kv("sinusoid.amplitude", vec_text(d.sinusoid.amplitude));
  kv("sinusoid.frequency", vec_text(d.sinusoid.frequency));
  kv("sinusoid.phase", vec_text(d.sinusoid.phase));
  num("sinusoid.vehicle_phase_step", d.sinusoid.vehicle_phase_step);
  kv("ramp.final_value", vec_text(d.ramp.final_value));
  num("ramp.start", d.ramp.start);
  num("ramp.duration", d.ramp.duration);
  num("vortex.circulation", d.vortex.circulation);
  num("vortex.core_radius", d.vortex.core_radius);
  num("vortex.span_fraction", d.vortex.span_fraction);
  kv("vortex.span_samples", std::to_string(d.vortex.span_samples));
  num("vortex.lift_gain", d.vortex.lift_gain);
  num("vortex.side_force_gain", d.vortex.side_force_gain);

  o << "\n[metrics]\n";
  kv("window", format_double(sc.metrics.window_start) + ", " + format_double(sc.metrics.window_end));
  num("convergence_threshold", sc.metrics.convergence_threshold);
  return o.str();
}

}  // namespace formation
