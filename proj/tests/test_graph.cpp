#include <cmath>

#include <gtest/gtest.h>

#include "formation/checks.hpp"
#include "formation/graph.hpp"

using namespace formation;

namespace {

FormationGraph vshape_graph() {
  const std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}};
  return FormationGraph::build(5, edges);
}

}  // namespace

TEST(Graph, VShapeDegreesAndLaplacianRow) {
  const auto g = vshape_graph();
  const Eigen::VectorXd deg = g.degrees();
  EXPECT_EQ(deg, (Eigen::VectorXd(5) << 2, 3, 4, 3, 2).finished());
  const Eigen::MatrixXd l = g.laplacian();
  EXPECT_EQ(l.row(0), (Eigen::RowVectorXd(5) << 2, -1, -1, 0, 0).finished());
  EXPECT_TRUE(l.isApprox(l.transpose()));
  EXPECT_LT((l * Eigen::VectorXd::Ones(5)).norm(), 1e-15);
  EXPECT_TRUE(g.is_connected());
}

TEST(Graph, VShapeSpectrum) {
  // Characteristic polynomial factors as s (s - 3) (s - 5) (s^2 - 6 s + 7).
  const auto spec = laplacian_spectrum(vshape_graph());
  const double expected[] = {0.0, 3.0 - std::sqrt(2.0), 3.0, 3.0 + std::sqrt(2.0), 5.0};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(spec(i), expected[i], 1e-12);
}

TEST(Graph, SingleEdge) {
  const std::vector<Edge> edges{{0, 1}};
  const auto g = FormationGraph::build(2, edges);
  EXPECT_EQ(g.adjacency(), (Eigen::Matrix2d() << 0, 1, 1, 0).finished());
  const auto spec = laplacian_spectrum(g);
  EXPECT_NEAR(spec(0), 0.0, 1e-15);
  EXPECT_NEAR(spec(1), 2.0, 1e-15);
}

TEST(Graph, EmptyGraphIsDisconnected) {
  const auto g = FormationGraph::build(3, {});
  EXPECT_TRUE(g.adjacency().isZero());
  EXPECT_TRUE(g.degrees().isZero());
  EXPECT_FALSE(g.is_connected());
}

TEST(Graph, CompleteAndPathGraphs) {
  const std::vector<Edge> k3{{0, 1}, {0, 2}, {1, 2}};
  EXPECT_EQ(FormationGraph::build(3, k3).degrees(), Eigen::Vector3d(2, 2, 2));
  const std::vector<Edge> path{{0, 1}, {1, 2}, {2, 3}};
  EXPECT_TRUE(FormationGraph::build(4, path).is_connected());
}

TEST(Graph, RejectsSelfLoopsAndOutOfRange) {
  const std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(FormationGraph::build(3, loop), GraphError);
  const std::vector<Edge> far{{0, 3}};
  EXPECT_THROW(FormationGraph::build(3, far), GraphError);
}

TEST(Graph, DuplicateEdgesKeepUnitWeight) {
  const std::vector<Edge> twice{{0, 1}, {1, 0}};
  const auto g = FormationGraph::build(2, twice);
  EXPECT_EQ(g.adjacency()(0, 1), 1.0);
  EXPECT_EQ(g.neighbors(0).size(), 1u);
}

TEST(Graph, PinnedMinimumEigenvalueVShape) {
  const PinningMatrix b{(Eigen::VectorXd(5) << 1, 0, 0, 0, 0).finished()};
  const auto r = pinned_min_eigenvalue(vshape_graph(), b, DiagGain::Ones(), DiagGain::Ones());
  EXPECT_NEAR(r.value, 0.14179848740736833, 1e-12);
  EXPECT_TRUE(r.warning.empty());

  const auto r2 = pinned_min_eigenvalue(vshape_graph(), b, DiagGain(1, 2, 3), DiagGain::Constant(0.5));
  EXPECT_NEAR(r2.value, 0.083442200267035374, 1e-12);
}

TEST(Graph, PinnedMinimumEigenvalueTwoNodes) {
  // L + B = [[2, -1], [-1, 1]] per axis; eigenvalues (3 -+ sqrt 5) / 2.
  const std::vector<Edge> edges{{0, 1}};
  const PinningMatrix b{Eigen::Vector2d(1, 0)};
  const auto r = pinned_min_eigenvalue(FormationGraph::build(2, edges), b, DiagGain::Ones(), DiagGain::Ones());
  EXPECT_NEAR(r.value, (3.0 - std::sqrt(5.0)) / 2.0, 1e-14);
}

TEST(Graph, ZeroPinningReportsKernel) {
  const PinningMatrix b{Eigen::VectorXd::Zero(5)};
  const auto r = pinned_min_eigenvalue(vshape_graph(), b, DiagGain::Ones(), DiagGain::Ones());
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  EXPECT_FALSE(r.warning.empty());
}

TEST(Graph, PinnedRejectsBadInputs) {
  const auto g = vshape_graph();
  EXPECT_THROW(pinned_min_eigenvalue(g, {Eigen::VectorXd::Ones(4)}, DiagGain::Ones(), DiagGain::Ones()), GraphError);
  EXPECT_THROW(pinned_min_eigenvalue(g, {-Eigen::VectorXd::Ones(5)}, DiagGain::Ones(), DiagGain::Ones()), GraphError);
  EXPECT_THROW(pinned_min_eigenvalue(g, {Eigen::VectorXd::Ones(5)}, DiagGain(1, 0, 1), DiagGain::Ones()), GraphError);
  const auto split = FormationGraph::build(3, {});
  EXPECT_THROW(pinned_min_eigenvalue(split, {Eigen::VectorXd::Ones(3)}, DiagGain::Ones(), DiagGain::Ones()), GraphError);
}

TEST(Graph, TraversalAgreesWithSpectrum) {
  Rng rng(7);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.3) edges.emplace_back(i, j);
      }
    }
    const auto g = FormationGraph::build(n, edges);
    const auto spec = laplacian_spectrum(g);
    ASSERT_GE(spec(0), -1e-9);
    ASSERT_EQ(g.is_connected(), spec(1) > 1e-9) << "n=" << n << " trial " << k;
  }
}

TEST(Graph, KroneckerWithDiagonal) {
  const Eigen::Matrix2d m = (Eigen::Matrix2d() << 1, 2, 3, 4).finished();
  const Eigen::MatrixXd k = kron_diag3(m, DiagGain(1, 10, 100));
  ASSERT_EQ(k.rows(), 6);
  EXPECT_EQ(k(0, 3), 2.0);
  EXPECT_EQ(k(4, 1), 30.0);
  EXPECT_EQ(k(5, 5), 400.0);
  EXPECT_EQ(k(0, 1), 0.0);
}
