#include "formation/controller.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace formation {

void ControllerGains::validate() const {
  if ((k_p.array() <= 0.0).any() || (k_v.array() <= 0.0).any()) {
    throw ConfigurationError("tracking gains Kp and Kv must be positive");
  }
  if ((c_p.array() < 0.0).any() || (c_v.array() < 0.0).any()) {
    throw ConfigurationError("coupling gains Cp and Cv must be nonnegative");
  }
  if (!k_p.allFinite() || !k_v.allFinite() || !c_p.allFinite() || !c_v.allFinite()) {
    throw ConfigurationError("controller gains must be finite");
  }
}

Vec3 baseline_control(std::size_t i, std::span<const TrackingErrors> errors, const Vec3& ref_accel,
                      const FormationGraph& g, const ControllerGains& gains) {
  const auto& e = errors[i];
  Vec3 coupling = Vec3::Zero();
  for (std::size_t j : g.neighbors(i)) {
    coupling += gains.c_p.cwiseProduct(e.position - errors[j].position) +
                gains.c_v.cwiseProduct(e.velocity - errors[j].velocity);
  }
  return ref_accel - gains.k_p.cwiseProduct(e.position) - gains.k_v.cwiseProduct(e.velocity) - coupling;
}

UdeState UdeState::start(const Vec3& v0, const Vec3& time_constants) {
  UdeState st;
  st.time_constants = time_constants;
  st.v0 = v0;
  return st;
}

Vec3 ude_estimate(const UdeState& st, const Vec3& v_now) {
  return (v_now - st.v0 - st.u0_integral).cwiseQuotient(st.time_constants);
}

Vec3 composite_control(const Vec3& u0, const Vec3& d_hat) { return u0 - d_hat; }

UdeState ude_update(const UdeState& st, const StageSamples& u0, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("ude_update needs dt > 0");
  UdeState out = st;
  out.u0_integral += (dt / 6.0) * (u0.start + 4.0 * u0.mid + u0.end);
  return out;
}

UdeState ude_update(const UdeState& st, const Vec3& u0_constant, double dt) {
  return ude_update(st, StageSamples{u0_constant, u0_constant, u0_constant}, dt);
}

Eigen::Matrix2d lyapunov_2x2(const Eigen::Matrix2d& a) {
  // Unknowns (p11, p12, p22) of the symmetric solution.
  Eigen::Matrix3d m;
  m << 2 * a(0, 0), 2 * a(1, 0), 0.0,
      a(0, 1), a(0, 0) + a(1, 1), a(1, 0),
      0.0, 2 * a(0, 1), 2 * a(1, 1);
  const Eigen::Vector3d rhs(-1.0, 0.0, -1.0);
  const Eigen::Vector3d x = m.fullPivLu().solve(rhs);
  Eigen::Matrix2d p;
  p << x(0), x(1), x(1), x(2);
  return p;
}

ModalDecomposition modal_decomposition(const FormationGraph& g, const ControllerGains& gains) {
  if (!g.is_connected()) throw ConfigurationError("modal decomposition needs a connected graph");
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.laplacian());

  ModalDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  out.basis = solver.eigenvectors();
  // The kernel of a connected Laplacian is spanned by the ones vector.
  out.basis.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  out.eigenvalues(0) = 0.0;

  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = out.eigenvalues(i);
    for (int axis = 0; axis < 3; ++axis) {
      ModeDynamics mode;
      mode.axis = axis;
      mode.index = static_cast<std::size_t>(i);
      mode.lambda = lambda;
      const double stiffness = gains.k_p(axis) + lambda * gains.c_p(axis);
      const double damping = gains.k_v(axis) + lambda * gains.c_v(axis);
      mode.a << 0.0, 1.0, -stiffness, -damping;
      mode.poles = mode.a.eigenvalues();
      mode.hurwitz = mode.poles.real().maxCoeff() < 0.0;
      if (!mode.hurwitz) {
        throw ConfigurationError("mode " + std::to_string(i) + " on axis " + kAxisNames[axis] +
                                 " is not Hurwitz");
      }
      mode.dc_gain = 1.0 / stiffness;
      mode.dc_gain_swapped = 1.0 / damping;
      const Eigen::Matrix2d p = lyapunov_2x2(mode.a);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> ps(p, Eigen::EigenvaluesOnly);
      const double pmin = ps.eigenvalues()(0), pmax = ps.eigenvalues()(1);
      mode.ultimate_bound_factor = 2.0 * pmax * pmax / pmin;
      out.modes.push_back(mode);
    }
  }
  return out;
}

Eigen::MatrixXd tracking_error_matrix(const FormationGraph& g, const ControllerGains& gains) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd lap = g.laplacian();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6 * n, 6 * n);
  a.topRightCorner(3 * n, 3 * n).setIdentity();
  a.bottomLeftCorner(3 * n, 3 * n) = -(kron_diag3(id, gains.k_p) + kron_diag3(lap, gains.c_p));
  a.bottomRightCorner(3 * n, 3 * n) = -(kron_diag3(id, gains.k_v) + kron_diag3(lap, gains.c_v));
  return a;
}

}  // namespace formation
