#include "formation/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace formation {

Vec3 FormationCenterState::velocity() const {
  const double cg = std::cos(path_angle);
  return speed * Vec3(cg * std::cos(heading), cg * std::sin(heading), -std::sin(path_angle));
}

Schedule::Schedule(std::vector<Segment> segments) : segments_(std::move(segments)) {
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& s = segments_[k];
    if (!std::isfinite(s.start) || !std::isfinite(s.end) || !std::isfinite(s.value)) {
      throw std::invalid_argument("schedule segment has a non-finite entry");
    }
    if (!(s.end > s.start)) throw std::invalid_argument("schedule segment must have end > start");
    if (k > 0 && s.start < segments_[k - 1].end) {
      throw std::invalid_argument("schedule segments must be sorted and non-overlapping");
    }
  }
}

double Schedule::at(double t) const {
  for (const auto& s : segments_) {
    if (t > s.start && t <= s.end) return s.value;
  }
  return 0.0;
}

double Schedule::on_interval(double t0, double t1) const { return at(0.5 * (t0 + t1)); }

std::vector<double> Schedule::breakpoints() const {
  std::vector<double> out;
  for (const auto& s : segments_) {
    out.push_back(s.start);
    out.push_back(s.end);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CenterInputs CenterCommand::at(double t) const {
  return {accel.at(t), path_rate.at(t), heading_rate.at(t)};
}

CenterInputs CenterCommand::on_interval(double t0, double t1) const {
  return {accel.on_interval(t0, t1), path_rate.on_interval(t0, t1), heading_rate.on_interval(t0, t1)};
}

std::vector<double> CenterCommand::breakpoints() const {
  std::vector<double> out;
  for (const auto* s : {&accel, &path_rate, &heading_rate}) {
    const auto b = s->breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void FilterGains::validate() const {
  for (const auto* g : {&kappa_p, &kappa_v, &c_p, &c_v}) {
    if ((g->array() <= 0.0).any() || !g->allFinite()) {
      throw std::invalid_argument("cooperative filter gains must be positive");
    }
  }
}

Mat3 heading_rotation(double heading) {
  const double c = std::cos(heading), s = std::sin(heading);
  Mat3 m;
  m << c, s, 0.0,
      -s, c, 0.0,
      0.0, 0.0, 1.0;
  return m;
}

Mat3 yaw_rate_cross(double heading_rate) {
  Mat3 m = Mat3::Zero();
  m(0, 1) = -heading_rate;
  m(1, 0) = heading_rate;
  return m;
}

CenterRate center_derivative(const FormationCenterState& c, const CenterInputs& in) {
  return {c.velocity(), in.accel, in.path_rate, in.heading_rate};
}

Vec3 center_acceleration(const FormationCenterState& c, const CenterInputs& in) {
  const double cg = std::cos(c.path_angle), sg = std::sin(c.path_angle);
  const double cp = std::cos(c.heading), sp = std::sin(c.heading);
  const Vec3 along(cg * cp, cg * sp, -sg);
  const Vec3 d_gamma(-sg * cp, -sg * sp, -cg);
  const Vec3 d_psi(-cg * sp, cg * cp, 0.0);
  return in.accel * along + c.speed * (in.path_rate * d_gamma + in.heading_rate * d_psi);
}

std::vector<VirtualLeaderRef> leader_refs(const FormationCenterState& c, const CenterInputs& in,
                                          const FormationLayout& layout) {
  const Mat3 to_inertial = heading_rotation(c.heading).transpose();
  const Mat3 w = yaw_rate_cross(in.heading_rate);
  const Vec3 rc_dot = c.velocity();
  const Vec3 rc_ddot = center_acceleration(c, in);

  std::vector<VirtualLeaderRef> refs;
  refs.reserve(layout.offsets.size());
  for (const auto& p : layout.offsets) {
    VirtualLeaderRef ref;
    ref.r = c.position + to_inertial * p;
    ref.r_dot = rc_dot + to_inertial * (w * p);
    ref.r_ddot = rc_ddot + to_inertial * (w * (w * p));
    refs.push_back(ref);
  }
  return refs;
}

std::vector<FilterStateRate> filter_derivative(std::span<const FilterState> states,
                                               std::span<const VirtualLeaderRef> refs,
                                               const FormationGraph& g, const FilterGains& gains) {
  const std::size_t n = states.size();
  if (refs.size() != n || g.size() != n) {
    throw std::invalid_argument("filter bank, references and graph sizes differ");
  }
  std::vector<Vec3> e_p(n), e_v(n);
  for (std::size_t i = 0; i < n; ++i) {
    e_p[i] = states[i].r_hat - refs[i].r;
    e_v[i] = states[i].v_hat - refs[i].r_dot;
  }

  std::vector<FilterStateRate> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 coupling = Vec3::Zero();
    for (std::size_t j : g.neighbors(i)) {
      coupling += gains.c_p.cwiseProduct(e_p[i] - e_p[j]) + gains.c_v.cwiseProduct(e_v[i] - e_v[j]);
    }
    out[i].r_hat = states[i].v_hat;
    out[i].v_hat = refs[i].r_ddot - gains.kappa_p.cwiseProduct(e_p[i]) -
                   gains.kappa_v.cwiseProduct(e_v[i]) - coupling;
  }
  return out;
}

Eigen::MatrixXd filter_error_matrix(const FormationGraph& g, const FilterGains& gains) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd lap = g.laplacian();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6 * n, 6 * n);
  a.topRightCorner(3 * n, 3 * n).setIdentity();
  a.bottomLeftCorner(3 * n, 3 * n) = -(kron_diag3(id, gains.kappa_p) + kron_diag3(lap, gains.c_p));
  a.bottomRightCorner(3 * n, 3 * n) = -(kron_diag3(id, gains.kappa_v) + kron_diag3(lap, gains.c_v));
  return a;
}

double filter_lyapunov(const FormationGraph& g, const FilterGains& gains,
                       const Eigen::VectorXd& e_p, const Eigen::VectorXd& e_v) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::MatrixXd p =
      kron_diag3(Eigen::MatrixXd::Identity(n, n), gains.kappa_p) + kron_diag3(g.laplacian(), gains.c_p);
  return 0.5 * e_p.dot(p * e_p) + 0.5 * e_v.squaredNorm();
}

}  // namespace formation
