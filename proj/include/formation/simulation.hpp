#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "formation/scenario.hpp"

namespace formation {

/// Integration aborted. Carries the time and the offending state entry.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
  double time;
};

using Derivative = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x)>;

/// Classical fourth-order Runge-Kutta step. Throws SimulationError naming
/// the stage and component when a derivative is not finite; describe maps a
/// component index to a readable name.
Eigen::VectorXd rk4_step(const Derivative& f, const Eigen::VectorXd& x, double t, double dt,
                         const std::function<std::string(Eigen::Index)>& describe = {});

/// Everything known about one vehicle at one logged instant.
struct VehicleRecord {
  UavState state;
  VirtualLeaderRef ref;
  FilterState filter;
  Vec3 e_p = Vec3::Zero();      // p - r_hat
  Vec3 e_v = Vec3::Zero();      // v - v_hat
  PolarDisturbance d_polar;
  Vec3 d = Vec3::Zero();        // Cartesian disturbance acceleration
  Vec3 d_hat = Vec3::Zero();
  Vec3 d_tilde = Vec3::Zero();  // d_hat - d
  Vec3 u0 = Vec3::Zero();
  Vec3 u = Vec3::Zero();
  ActuatorCommands actuators;
};

struct StepRecord {
  double t = 0.0;
  FormationCenterState center;
  CenterInputs inputs;
  std::vector<VehicleRecord> vehicles;
};

/// One record per grid step k * dt, k = 0..steps.
struct SimLog {
  std::size_t n = 0;
  double dt = 0.0;
  std::vector<StepRecord> steps;
};

/// Layout of the concatenated state vector.
struct StateLayout {
  static constexpr Eigen::Index kCenter = 6;   // x y z V gamma psi
  static constexpr Eigen::Index kVehicle = 15; // p 3, v 3, r_hat 3, v_hat 3, int u0 3
  static Eigen::Index size(std::size_t n) { return kCenter + kVehicle * static_cast<Eigen::Index>(n); }
  static Eigen::Index vehicle(std::size_t i) { return kCenter + kVehicle * static_cast<Eigen::Index>(i); }
  static std::string describe(Eigen::Index k);
};

/// Coupled closed-loop system of one scenario.
class ClosedLoop {
 public:
  explicit ClosedLoop(const Scenario& sc);

  Eigen::VectorXd initial_state() const;
  Eigen::VectorXd derivative(double t, const Eigen::VectorXd& x, const CenterInputs& in) const;
  StepRecord record(double t, const Eigen::VectorXd& x, const CenterInputs& in) const;

  const Scenario& scenario() const { return sc_; }
  const FormationGraph& graph() const { return graph_; }

 private:
  struct Evaluation;
  void evaluate(double t, const Eigen::VectorXd& x, const CenterInputs& in, Evaluation& out) const;

  Scenario sc_;
  FormationGraph graph_;
  std::vector<Vec3> v0_;
};

/// Integrates the scenario over [0, duration]. Steps that straddle a
/// command breakpoint are split there. Throws SimulationError.
SimLog run(const Scenario& sc);

}  // namespace formation
