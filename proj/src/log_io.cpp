#include "formation/log_io.hpp"

#include <stdexcept>

#include "formation/config.hpp"

namespace formation {

namespace {

constexpr const char* kCenterColumns[] = {"xc", "yc", "zc", "Vc", "gamma_c", "psi_c", "a_V", "a_gamma", "a_psi"};

constexpr const char* kVehicleColumns[] = {
    "x",     "y",     "z",     "V",     "gamma", "psi",   "rx",    "ry",    "rz",    "rdx",   "rdy",
    "rdz",   "rddx",  "rddy",  "rddz",  "rhx",   "rhy",   "rhz",   "vhx",   "vhy",   "vhz",   "epx",
    "epy",   "epz",   "evx",   "evy",   "evz",   "dV",    "dgamma", "dpsi", "dx",    "dy",    "dz",
    "dhx",   "dhy",   "dhz",   "dtx",   "dty",   "dtz",   "u0x",   "u0y",   "u0z",   "ux",    "uy",
    "uz",    "T",     "L",     "mu",    "alpha", "sat"};

void put(std::ostream& os, double v) { os << ',' << format_double(v); }

void put(std::ostream& os, const Vec3& v) {
  put(os, v.x());
  put(os, v.y());
  put(os, v.z());
}

void write_row(std::ostream& os, const StepRecord& st) {
  os << format_double(st.t);
  put(os, st.center.position);
  put(os, st.center.speed);
  put(os, st.center.path_angle);
  put(os, st.center.heading);
  put(os, st.inputs.accel);
  put(os, st.inputs.path_rate);
  put(os, st.inputs.heading_rate);
  for (const auto& r : st.vehicles) {
    put(os, r.state.position);
    put(os, r.state.speed);
    put(os, r.state.path_angle);
    put(os, r.state.course_angle);
    put(os, r.ref.r);
    put(os, r.ref.r_dot);
    put(os, r.ref.r_ddot);
    put(os, r.filter.r_hat);
    put(os, r.filter.v_hat);
    put(os, r.e_p);
    put(os, r.e_v);
    put(os, r.d_polar.speed);
    put(os, r.d_polar.path);
    put(os, r.d_polar.course);
    put(os, r.d);
    put(os, r.d_hat);
    put(os, r.d_tilde);
    put(os, r.u0);
    put(os, r.u);
    put(os, r.actuators.thrust);
    put(os, r.actuators.lift);
    put(os, r.actuators.bank);
    put(os, r.actuators.alpha);
    os << ',' << (r.actuators.thrust_saturated ? 1 : 0);
  }
  os << '\n';
}

}  // namespace

std::vector<std::string> csv_columns(std::size_t n) {
  std::vector<std::string> cols{"t"};
  for (const char* c : kCenterColumns) cols.emplace_back(c);
  for (std::size_t i = 1; i <= n; ++i) {
    for (const char* c : kVehicleColumns) cols.push_back("v" + std::to_string(i) + "_" + c);
  }
  return cols;
}

void write_csv(std::ostream& os, const SimLog& log, std::size_t decimate) {
  if (decimate == 0) throw std::invalid_argument("decimation factor must be at least 1");
  const auto cols = csv_columns(log.n);
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << '\n';
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    if (k % decimate == 0 || k + 1 == log.steps.size()) write_row(os, log.steps[k]);
  }
}

}  // namespace formation
