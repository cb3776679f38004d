#include "formation/graph.hpp"

#include <algorithm>
#include <queue>

#include <Eigen/Eigenvalues>

namespace formation {

FormationGraph::FormationGraph(Eigen::MatrixXd adjacency) : adjacency_(std::move(adjacency)) {
  const auto n = size();
  neighbors_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency_(i, j) != 0.0) neighbors_[i].push_back(j);
    }
  }
}

FormationGraph FormationGraph::build(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw GraphError("graph must have at least one vertex");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) {
      throw GraphError("edge (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                       ") references a vehicle outside 1.." + std::to_string(n));
    }
    if (i == j) throw GraphError("self-loop on vehicle " + std::to_string(i + 1));
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return FormationGraph(std::move(a));
}

std::vector<Edge> FormationGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j : neighbors_[i]) {
      if (j > i) out.emplace_back(i, j);
    }
  }
  return out;
}

Eigen::VectorXd FormationGraph::degrees() const { return adjacency_.rowwise().sum(); }

Eigen::MatrixXd FormationGraph::laplacian() const {
  Eigen::MatrixXd l = -adjacency_;
  l.diagonal() = degrees();
  return l;
}

bool FormationGraph::is_connected() const {
  const auto n = size();
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop();
    for (std::size_t w : neighbors_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == n;
}

Eigen::VectorXd laplacian_spectrum(const FormationGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.laplacian(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double zero_eigenvalue_tolerance(const Eigen::MatrixXd& m) {
  return 1e-9 * std::max(1.0, m.norm());
}

Eigen::MatrixXd kron_diag3(const Eigen::MatrixXd& m, const DiagGain& d) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(3 * m.rows(), 3 * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == 0.0) continue;
      for (int k = 0; k < 3; ++k) out(3 * i + k, 3 * j + k) = m(i, j) * d(k);
    }
  }
  return out;
}

MinEigenvalue pinned_min_eigenvalue(const FormationGraph& g, const PinningMatrix& b,
                                    const DiagGain& c1, const DiagGain& c2) {
  const auto n = g.size();
  if (static_cast<std::size_t>(b.diag.size()) != n) {
    throw GraphError("pinning vector has " + std::to_string(b.diag.size()) +
                     " entries, graph has " + std::to_string(n) + " vertices");
  }
  if ((b.diag.array() < 0.0).any()) throw GraphError("pinning entries must be nonnegative");
  if ((c1.array() <= 0.0).any() || (c2.array() <= 0.0).any()) {
    throw GraphError("C1 and C2 must be positive diagonal matrices");
  }
  if (!g.is_connected()) {
    throw GraphError("graph is disconnected; positive definiteness of L+B needs a connected graph");
  }

  const Eigen::MatrixXd pinning = b.diag.asDiagonal();
  const Eigen::MatrixXd m = kron_diag3(g.laplacian(), c1) + kron_diag3(pinning, c2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);

  MinEigenvalue out;
  out.value = solver.eigenvalues()(0);
  if ((b.diag.array() > 0.0).count() == 0) {
    out.warning = "pinning matrix has rank 0; the consensus direction 1_n kron q stays in the kernel";
  }
  return out;
}

}  // namespace formation
