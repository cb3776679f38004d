#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "formation/controller.hpp"
#include "formation/graph.hpp"
#include "formation/planner.hpp"
#include "formation/scenario.hpp"

namespace formation {

using Rng = std::mt19937_64;

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> results;
  bool passed() const;
};

/// graph, filter, ude, conversions, closedloop.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws std::invalid_argument
/// for an unknown name.
std::vector<SuiteReport> run_suite(std::string_view name, std::uint64_t seed = 1);

/// Random connected graph: a random spanning tree plus each remaining pair
/// with probability extra_edge_prob.
FormationGraph random_connected_graph(std::size_t n, Rng& rng, double extra_edge_prob = 0.3);

struct SpectralSummary {
  std::size_t graphs = 0;
  double max_abs_lambda_min = 0.0;  // |smallest Laplacian eigenvalue|
  double min_lambda2 = 0.0;
  double min_pinned = 0.0;          // min over draws of lambda_min(L x C1 + B x C2)
  double max_disconnected_lambda2 = 0.0;
  double seconds = 0.0;
};

/// Connectivity and pinning spectra over random graphs with 2..8 nodes,
/// random nonzero pinning and random positive diagonal gains.
SpectralSummary spectral_suite(std::size_t count, std::uint64_t seed);

struct FilterSummary {
  std::size_t draws = 0;
  double max_real_part = 0.0;           // over every eigenvalue of every draw
  double max_lyapunov_increase = 0.0;   // relative, along simulated trajectories
};

/// Error-system spectra for the preset plus random gain and graph draws, and
/// the energy function evaluated along RK4 trajectories of the error system.
FilterSummary filter_suite(std::size_t draws, std::uint64_t seed);

struct UdeHarnessResult {
  double max_error = 0.0;       // sup |d_hat - d|
  double terminal_error = 0.0;  // |d_hat - d| at the end
};

/// One axis of a double integrator under the estimator plus a PD baseline,
/// disturbed by d(t). The estimator starts from zero.
UdeHarnessResult ude_harness(const std::function<double(double)>& d, double time_constant, double duration,
                             double dt = 1e-3);

struct ConversionSummary {
  std::size_t states = 0;
  double max_polar_roundtrip = 0.0;     // Cartesian -> polar -> Cartesian
  double max_actuator_roundtrip = 0.0;  // polar -> actuators -> polar
  double max_vector_form_gap = 0.0;     // velocity form vs polar equations
  std::size_t clamped = 0;              // draws whose thrust was clamped (excluded)
  double seconds = 0.0;
};

ConversionSummary conversion_suite(std::size_t count, std::uint64_t seed);

/// Scenario with every vehicle and filter started exactly on its reference
/// in straight, level flight and no disturbance.
Scenario equilibrium_scenario(double duration = 20.0);

}  // namespace formation
