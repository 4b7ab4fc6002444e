// Copyright 2026 The chancompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chancompat/sdp.hpp"

#include <gtest/gtest.h>

#include "chancompat/marginal.hpp"
#include "test_util.hpp"

using namespace chancompat;
using namespace chancompat::testing;

namespace {

RealMatrix random_symmetric(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> g;
  RealMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(rng);
  return 0.5 * (m + m.transpose());
}

/// Random problem with a known interior primal point and dual point.
SdpProblem random_problem(Rng& rng, std::vector<std::size_t> dims, int rows) {
  SdpProblem p;
  p.block_dims = dims;
  std::vector<RealMatrix> x0, z0;
  for (auto d : dims) {
    const auto n = static_cast<Eigen::Index>(d);
    const RealMatrix g = random_symmetric(n, rng);
    x0.push_back(g * g + RealMatrix::Identity(n, n));
    const RealMatrix h = random_symmetric(n, rng);
    z0.push_back(h * h + RealMatrix::Identity(n, n));
  }
  std::normal_distribution<double> gy;
  std::vector<RealMatrix> c = z0;
  for (int i = 0; i < rows; ++i) {
    SdpConstraint row;
    double rhs = 0.0;
    const double y = gy(rng);
    for (std::size_t k = 0; k < dims.size(); ++k) {
      row.blocks.push_back(random_symmetric(static_cast<Eigen::Index>(dims[k]), rng));
      rhs += row.blocks[k].cwiseProduct(x0[k]).sum();
      c[k] += y * row.blocks[k];
    }
    row.rhs = rhs;
    p.constraints.push_back(std::move(row));
  }
  p.objective = c;
  return p;
}

void expect_optimal_invariants(const SdpSolution& s) {
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_LE(s.gap, 1e-6 * (1.0 + std::abs(s.primal_objective)));
  EXPECT_LE(s.primal_residual, 1e-7);
  for (const auto& b : s.primal) EXPECT_GE(min_eigenvalue(b), -1e-8);
  for (const auto& b : s.dual_slack) EXPECT_GE(min_eigenvalue(b), -1e-8);
}

HermitianConstraint entry_constraint(std::size_t n, Eigen::Index i, Eigen::Index j, bool imag, double rhs) {
  ComplexMatrix op = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (i == j) {
    op(i, i) = 1.0;
  } else if (!imag) {
    op(i, j) = op(j, i) = 0.5;
  } else {
    op(i, j) = Complex(0, 0.5);
    op(j, i) = Complex(0, -0.5);
  }
  return {HermitianMatrix(op), rhs};
}

}  // namespace

TEST(Solve, ScalarMaximize) {
  SdpProblem p;
  p.block_dims = {1};
  p.objective = {RealMatrix::Constant(1, 1, 1.0)};
  p.sense = Sense::Maximize;
  p.constraints.push_back({{RealMatrix::Constant(1, 1, 1.0)}, 5.0});
  const SdpSolution s = solve(p);
  expect_optimal_invariants(s);
  EXPECT_NEAR(s.primal_objective, 5.0, 1e-6);
  EXPECT_NEAR(s.primal[0](0, 0), 5.0, 1e-7);
}

TEST(Solve, MinEigenvalueOfRandomMatrix) {
  Rng rng(40);
  for (int trial = 0; trial < 5; ++trial) {
    const RealMatrix c = random_symmetric(5, rng);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(c);
    SdpProblem p;
    p.block_dims = {5};
    p.objective = {c};
    p.constraints.push_back({{RealMatrix::Identity(5, 5)}, 1.0});
    const SdpSolution lo = solve(p);
    expect_optimal_invariants(lo);
    EXPECT_NEAR(lo.primal_objective, es.eigenvalues()(0), 1e-6);
    p.sense = Sense::Maximize;
    const SdpSolution hi = solve(p);
    expect_optimal_invariants(hi);
    EXPECT_NEAR(hi.primal_objective, es.eigenvalues()(4), 1e-6);
    EXPECT_NEAR(hi.dual(0), es.eigenvalues()(4), 1e-6);
  }
}

TEST(Solve, RandomMultiBlockProblems) {
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const SdpProblem p = random_problem(rng, {3, 4, 2}, 6);
    SolverOptions opt;
    opt.check_weak_duality = true;
    const SdpSolution s = solve(p, opt);
    expect_optimal_invariants(s);
    // Complementary slackness at the optimum.
    double xz = 0.0;
    for (std::size_t k = 0; k < s.primal.size(); ++k) xz += s.primal[k].cwiseProduct(s.dual_slack[k]).sum();
    EXPECT_LE(xz, 1e-5 * (1.0 + std::abs(s.primal_objective)));
  }
}

TEST(Solve, PredictorCorrectorAgrees) {
  Rng rng(42);
  const SdpProblem p = random_problem(rng, {4, 3}, 5);
  SolverOptions pc;
  pc.predictor_corrector = true;
  const SdpSolution a = solve(p), b = solve(p, pc);
  expect_optimal_invariants(a);
  expect_optimal_invariants(b);
  EXPECT_NEAR(a.primal_objective, b.primal_objective, 1e-5 * (1.0 + std::abs(a.primal_objective)));
}

TEST(Solve, RedundantRowsArePruned) {
  SdpProblem p;
  p.block_dims = {2};
  p.objective = {RealMatrix::Identity(2, 2)};
  RealMatrix e00 = RealMatrix::Zero(2, 2);
  e00(0, 0) = 1.0;
  p.constraints.push_back({{RealMatrix::Identity(2, 2)}, 1.0});
  p.constraints.push_back({{RealMatrix::Identity(2, 2)}, 1.0});
  p.constraints.push_back({{2.0 * RealMatrix::Identity(2, 2)}, 2.0});
  p.constraints.push_back({{e00}, 0.25});
  const SdpSolution s = solve(p);
  expect_optimal_invariants(s);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-7);
  EXPECT_EQ(s.dual.size(), 4);
}

TEST(Solve, InconsistentRowsAreLinearlyInfeasible) {
  SdpProblem p;
  p.block_dims = {2};
  p.objective = {RealMatrix::Identity(2, 2)};
  p.constraints.push_back({{RealMatrix::Identity(2, 2)}, 1.0});
  p.constraints.push_back({{RealMatrix::Identity(2, 2)}, 2.0});
  const SdpSolution s = solve(p);
  EXPECT_EQ(s.status, SdpStatus::LinearlyInfeasible);
  EXPECT_GT(s.linear_residual, 0.1);
}

TEST(Solve, Deterministic) {
  Rng rng(43);
  const SdpProblem p = random_problem(rng, {4, 2}, 4);
  const SdpSolution a = solve(p), b = solve(p);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.primal_objective, b.primal_objective);
  EXPECT_EQ(a.primal[0], b.primal[0]);
  EXPECT_EQ(a.dual, b.dual);
}

TEST(Solve, ValidationErrors) {
  SdpProblem p;
  p.block_dims = {2};
  p.objective = {RealMatrix::Identity(3, 3)};
  EXPECT_THROW(solve(p), DimensionError);
  p.objective = {RealMatrix::Identity(2, 2)};
  RealMatrix asym = RealMatrix::Zero(2, 2);
  asym(0, 1) = 1.0;
  p.constraints.push_back({{asym}, 1.0});
  EXPECT_THROW(solve(p), ValidationError);
  p.constraints = {{{RealMatrix::Identity(2, 2), RealMatrix::Identity(2, 2)}, 1.0}};
  EXPECT_THROW(solve(p), DimensionError);
}

TEST(Feasibility, TraceOnly) {
  const FeasibilityReport r = feasibility(2, {{HermitianMatrix::identity(2), 1.0}});
  EXPECT_EQ(r.status, Feasibility::Feasible);
  EXPECT_NEAR(r.slack, 0.5, 1e-7);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_LE(max_abs_entry(r.witness->matrix() - 0.5 * id(2)), 1e-7);
}

TEST(Feasibility, ScalarSlack) {
  const FeasibilityReport r = feasibility(1, {{HermitianMatrix::identity(1), 5.0}});
  EXPECT_EQ(r.status, Feasibility::Feasible);
  EXPECT_NEAR(r.slack, 5.0, 1e-6);
}

TEST(Feasibility, NegativeDiagonalIsInfeasible) {
  const FeasibilityReport r =
      feasibility(2, {{HermitianMatrix::identity(2), 1.0}, entry_constraint(2, 0, 0, false, 2.0)});
  EXPECT_EQ(r.status, Feasibility::Infeasible);
  EXPECT_NEAR(r.slack, -1.0, 1e-6);
}

TEST(Feasibility, FixedMatrixSlackIsMinEigenvalue) {
  const std::vector<HermitianConstraint> cs{{HermitianMatrix::identity(2), 1.0},
                                            {HermitianMatrix(pauli_z()), 0.0},
                                            entry_constraint(2, 0, 1, false, 0.7)};
  const FeasibilityReport r = feasibility(2, cs);
  EXPECT_EQ(r.status, Feasibility::Infeasible);
  EXPECT_NEAR(r.slack, -0.2, 1e-6);
}

TEST(Feasibility, SlackBoundedByTraceOverDimension) {
  Rng rng(44);
  for (std::size_t d : {2u, 3u, 4u}) {
    const DensityMatrix rho = random_state(d, rng);
    std::vector<HermitianConstraint> cs{{HermitianMatrix::identity(d), 1.0}};
    cs.push_back(entry_constraint(d, 0, 0, false, rho.matrix()(0, 0).real()));
    const FeasibilityReport r = feasibility(d, cs);
    EXPECT_LE(r.slack, 1.0 / static_cast<double>(d) + 1e-9);
  }
}

TEST(Feasibility, MissingNormalizationThrows) {
  EXPECT_THROW(feasibility(2, {entry_constraint(2, 0, 0, false, 0.5)}), ValidationError);
  EXPECT_THROW(feasibility(2, {}), ValidationError);
  EXPECT_THROW(feasibility(2, {{HermitianMatrix::identity(3), 1.0}}), DimensionError);
}

TEST(Feasibility, ComplexPhaseMatters) {
  // X01 = i/2 on a trace-one qubit: feasible only at the pure state |+i⟩.
  std::vector<HermitianConstraint> cs{{HermitianMatrix::identity(2), 1.0},
                                      entry_constraint(2, 0, 1, false, 0.0),
                                      entry_constraint(2, 0, 1, true, 0.3)};
  const FeasibilityReport r = feasibility(2, cs);
  EXPECT_EQ(r.status, Feasibility::Feasible);
  EXPECT_NEAR(r.slack, 0.2, 1e-6);
  EXPECT_NEAR(r.witness->matrix()(0, 1).imag(), 0.3, 1e-7);
}

TEST(Feasibility, FeasibleWitnessReverifies) {
  Rng rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = random_state(4, rng);
    MarginalSpec spec;
    spec.shape = SubsystemShape{2, 2};
    spec.targets = {{{1}, partial_trace(rho.hermitian(), spec.shape, {2})},
                    {{2}, partial_trace(rho.hermitian(), spec.shape, {1})}};
    const auto cs = spec.constraints();
    const FeasibilityReport r = feasibility(4, cs);
    ASSERT_EQ(r.status, Feasibility::Feasible);
    EXPECT_GE(min_eigenvalue(*r.witness), -1e-8);
    EXPECT_LE(max_constraint_residual(*r.witness, cs), 1e-6);
    EXPECT_LE(r.duality_gap, 1e-6 * (1.0 + std::abs(r.primal_objective)));
  }
}

TEST(Feasibility, RealificationConsistency) {
  // Each instance is decided as a Hermitian problem and as its real
  // embedding, posed as a problem over 2n x 2n real symmetric operators.
  Rng rng(46);
  std::vector<std::pair<std::size_t, std::vector<HermitianConstraint>>> cases;
  auto add_spec = [&](const MarginalSpec& s) { cases.emplace_back(s.shape.total(), s.constraints()); };
  cases.emplace_back(2, std::vector<HermitianConstraint>{{HermitianMatrix::identity(2), 1.0}});
  cases.emplace_back(2, std::vector<HermitianConstraint>{{HermitianMatrix::identity(2), 1.0},
                                                         entry_constraint(2, 0, 1, true, 0.3)});
  cases.emplace_back(3, std::vector<HermitianConstraint>{{HermitianMatrix::identity(3), 2.0},
                                                         entry_constraint(3, 1, 1, false, 0.5)});
  {
    const DensityMatrix rho = random_state(4, rng);
    MarginalSpec s;
    s.shape = SubsystemShape{2, 2};
    s.targets = {{{1}, partial_trace(rho.hermitian(), s.shape, {2})}};
    add_spec(s);
  }
  add_spec(compatibility_spec(depolarizing_channel(2), depolarizing_channel(2)));
  cases.emplace_back(2, std::vector<HermitianConstraint>{{HermitianMatrix::identity(2), 1.0},
                                                         entry_constraint(2, 0, 0, false, 2.0)});
  cases.emplace_back(2, std::vector<HermitianConstraint>{{HermitianMatrix::identity(2), 1.0},
                                                         {HermitianMatrix(pauli_z()), 0.0},
                                                         entry_constraint(2, 0, 1, false, 0.7)});
  cases.emplace_back(2, std::vector<HermitianConstraint>{{HermitianMatrix::identity(2), 1.0},
                                                         entry_constraint(2, 0, 1, false, 0.4),
                                                         entry_constraint(2, 0, 1, true, 0.4)});
  add_spec(compatibility_spec(identity_channel(2), identity_channel(2)));
  add_spec(steering_spec(max_entangled(2), identity_channel(2), unitary_channel(hadamard())));

  std::vector<Feasibility> want{Feasibility::Feasible,   Feasibility::Feasible,   Feasibility::Feasible,
                                Feasibility::Feasible,   Feasibility::Feasible,   Feasibility::Infeasible,
                                Feasibility::Infeasible, Feasibility::Infeasible, Feasibility::Infeasible,
                                Feasibility::Infeasible};
  ASSERT_EQ(cases.size(), want.size());
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& [n, cs] = cases[k];
    std::vector<HermitianConstraint> real;
    for (const auto& c : cs) real.push_back({HermitianMatrix(ComplexMatrix(0.5 * realify(c.op).cast<Complex>())), c.rhs});
    const FeasibilityReport h = feasibility(n, cs);
    const FeasibilityReport r = feasibility(2 * n, real);
    EXPECT_EQ(h.status, want[k]) << "case " << k;
    EXPECT_EQ(r.status, want[k]) << "case " << k;
  }
}
