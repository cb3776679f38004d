#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "formation/types.hpp"

namespace formation {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected, unweighted communication topology with zero diagonal.
///
/// Vehicle indices are 0-based here; scenario files use 1-based numbering
/// and are converted on load. Immutable after construction.
class FormationGraph {
 public:
  /// Throws GraphError on self-loops or out-of-range endpoints. Duplicate
  /// edges are accepted and collapse to a single a_ij = 1.
  static FormationGraph build(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const { return static_cast<std::size_t>(adjacency_.rows()); }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_.at(i); }
  std::vector<Edge> edges() const;

  Eigen::VectorXd degrees() const;
  Eigen::MatrixXd laplacian() const;

  /// Breadth-first reachability from vertex 0.
  bool is_connected() const;

 private:
  explicit FormationGraph(Eigen::MatrixXd adjacency);

  Eigen::MatrixXd adjacency_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

/// Diagonal of the pinning matrix B; entries must be nonnegative.
struct PinningMatrix {
  Eigen::VectorXd diag;
};

/// Ascending eigenvalues of the Laplacian.
Eigen::VectorXd laplacian_spectrum(const FormationGraph& g);

/// Threshold below which a Laplacian eigenvalue counts as zero.
double zero_eigenvalue_tolerance(const Eigen::MatrixXd& m);

struct MinEigenvalue {
  double value = 0.0;
  std::string warning;  // empty when the pinning has rank >= 1
};

/// lambda_min(L kron C1 + B kron C2). Throws GraphError for a disconnected
/// graph. A zero pinning is reported, not rejected: the value comes back as
/// computed (numerically zero) with a warning attached.
MinEigenvalue pinned_min_eigenvalue(const FormationGraph& g, const PinningMatrix& b,
                                    const DiagGain& c1, const DiagGain& c2);

/// Kronecker product of a dense matrix with a diagonal 3x3 matrix.
Eigen::MatrixXd kron_diag3(const Eigen::MatrixXd& m, const DiagGain& d);

}  // namespace formation
