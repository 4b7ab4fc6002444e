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

#include "chancompat/marginal.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace chancompat;
using namespace chancompat::testing;

namespace {

DensityMatrix product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.hermitian(), b.hermitian()));
}

Channel mp(const ComplexMatrix& sigma, double s) { return measure_prepare(noisy_effect(sigma, s)); }

void expect_witness_valid(const FeasibilityReport& r, const MarginalSpec& spec) {
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_GE(min_eigenvalue(*r.witness), -1e-8);
  EXPECT_NEAR(r.witness->trace(), spec.normalization, 1e-6);
  EXPECT_LE(marginal_residual(*r.witness, spec), 1e-6);
}

}  // namespace

TEST(MarginalFeasibility, ProductOfMixedMarginals) {
  MarginalSpec spec;
  spec.shape = SubsystemShape{2, 2};
  spec.targets = {{{1}, HermitianMatrix::identity(2) * 0.5}, {{2}, HermitianMatrix::identity(2) * 0.5}};
  const FeasibilityReport r = marginal_feasibility(spec);
  EXPECT_EQ(r.status, Feasibility::Feasible);
  expect_witness_valid(r, spec);
  EXPECT_LE(max_abs_entry(r.witness->matrix() - 0.25 * id(4)), 1e-6);
}

TEST(MarginalFeasibility, WStateExtensionIsUnique) {
  MarginalSpec spec;
  spec.shape = SubsystemShape{2, 2, 2};
  spec.targets = {{{1, 2}, w_marginal().hermitian()}, {{1, 3}, w_marginal().hermitian()}};
  const FeasibilityReport r = marginal_feasibility(spec);
  EXPECT_EQ(r.status, Feasibility::Feasible);
  expect_witness_valid(r, spec);
  EXPECT_LE((r.witness->matrix() - w_state().matrix()).norm(), 1e-4);
  EXPECT_EQ(r.face_dim, 1u);
}

TEST(MarginalFeasibility, ContradictoryTargets) {
  MarginalSpec spec;
  spec.shape = SubsystemShape{2, 2};
  spec.targets = {{{1, 2}, max_entangled(2).hermitian()},
                  {{1}, HermitianMatrix::projector(ComplexVector::Unit(2, 0))}};
  const FeasibilityReport r = marginal_feasibility(spec);
  EXPECT_EQ(r.status, Feasibility::Infeasible);
  EXPECT_LE(r.slack, -1e-7);
}

TEST(MarginalFeasibility, Validation) {
  MarginalSpec spec;
  spec.shape = SubsystemShape{2, 2};
  spec.targets = {{{1}, HermitianMatrix::identity(2) * 0.5}, {{2}, HermitianMatrix::identity(2)}};
  EXPECT_THROW(marginal_feasibility(spec), ValidationError);
  spec.targets = {{{1}, HermitianMatrix::identity(4) * 0.25}};
  EXPECT_THROW(marginal_feasibility(spec), DimensionError);
  spec.targets = {{{2, 1}, HermitianMatrix::identity(4) * 0.25}};
  EXPECT_THROW(marginal_feasibility(spec), DimensionError);
}

TEST(Compatibility, FullyDepolarizingPair) {
  const Channel d = depolarizing_channel(2);
  const CompatReport r = channels_compatible(d, d);
  EXPECT_EQ(r.verdict, CompatVerdict::Compatible);
  ASSERT_TRUE(r.joint.has_value());
  const SubsystemShape shape{2, 2, 2};
  EXPECT_LE(max_abs_entry(marginal(r.joint->choi(), shape, {1, 3}).matrix() - d.choi().matrix()), 1e-6);
  EXPECT_LE(max_abs_entry(marginal(r.joint->choi(), shape, {2, 3}).matrix() - d.choi().matrix()), 1e-6);
  // ρ ↦ 1/2 ⊗ 1/2.
  Rng rng(50);
  EXPECT_LE(max_abs_entry(apply(*r.joint, random_state(2, rng)).matrix() - 0.25 * id(4)), 1e-6);
}

TEST(Compatibility, IdentityPairIsIncompatible) {
  const CompatReport r = channels_compatible(identity_channel(2), identity_channel(2));
  EXPECT_EQ(r.verdict, CompatVerdict::Incompatible);
  EXPECT_LE(r.feasibility.slack, -1e-4);
  ASSERT_TRUE(r.dual_witness.has_value());
  EXPECT_LE(r.dual_witness->value, -1e-7);
}

TEST(Compatibility, MismatchedInputThrows) {
  EXPECT_THROW(channels_compatible(identity_channel(2), identity_channel(3)), DimensionError);
}

TEST(Compatibility, MeasurePrepareFollowsEffects) {
  for (double s : {0.3, 0.5, 0.65, 0.75, 0.9, 1.0}) {
    const FeasibilityReport eff =
        effects_compatible(noisy_effect(pauli_x(), s), noisy_effect(pauli_z(), s));
    const CompatReport ch = channels_compatible(mp(pauli_x(), s), mp(pauli_z(), s));
    const bool eff_ok = eff.status == Feasibility::Feasible;
    EXPECT_EQ(eff_ok, s < 1.0 / std::sqrt(2.0)) << "s = " << s;
    EXPECT_EQ(ch.verdict, eff_ok ? CompatVerdict::Compatible : CompatVerdict::Incompatible) << "s = " << s;
  }
}

TEST(Compatibility, Symmetric) {
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const Channel a = random_channel(2, 2, rng), b = random_channel(2, 2, rng);
    const CompatReport ab = channels_compatible(a, b), ba = channels_compatible(b, a);
    if (ab.verdict == CompatVerdict::Marginal || ba.verdict == CompatVerdict::Marginal) continue;
    EXPECT_EQ(ab.verdict, ba.verdict) << "trial " << trial;
    EXPECT_NEAR(ab.feasibility.slack, ba.feasibility.slack, 1e-6);
  }
}

TEST(Compatibility, CompatibleWitnessRevalidates) {
  Rng rng(52);
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Channel a = depolarizing_channel(2, 0.5 + 0.5 * std::uniform_real_distribution<double>()(rng));
    const Channel b = random_channel(2, 2, rng);
    const CompatReport r = channels_compatible(a, b);
    if (r.verdict != CompatVerdict::Compatible) continue;
    ++checked;
    // Rebuilt from scratch with the default tolerances of a Channel.
    Tolerances t;
    t.psd = 1e-6;
    const Channel joint(r.joint->choi(), SubsystemShape{2}, SubsystemShape{2, 2}, t);
    const SubsystemShape shape{2, 2, 2};
    EXPECT_LE(max_abs_entry(marginal(joint.choi(), shape, {1, 3}).matrix() - a.choi().matrix()), 1e-6);
    EXPECT_LE(max_abs_entry(marginal(joint.choi(), shape, {2, 3}).matrix() - b.choi().matrix()), 1e-6);
  }
  EXPECT_GT(checked, 0);
}

TEST(DualWitness, CompatiblePairIsNonNegative) {
  const DualWitness w = dual_witness(depolarizing_channel(2), depolarizing_channel(2));
  EXPECT_GE(w.value, -1e-7);
}

TEST(DualWitness, IdentityPairCertifiesIncompatibility) {
  const Channel c = identity_channel(2);
  const DualWitness w = dual_witness(c, c);
  EXPECT_LE(w.value, -1e-7);
  // Recomputed by hand.
  const double value = (c.choi().matrix() * w.a.matrix()).trace().real() +
                       (c.choi().matrix() * w.b.matrix()).trace().real();
  EXPECT_NEAR(value, w.value, 1e-12);
  const SubsystemShape shape{2, 2, 2};
  const ComplexMatrix cone = lift(w.a.matrix(), shape, {1, 3}) + lift(w.b.matrix(), shape, {2, 3});
  EXPECT_GE(min_eigenvalue(HermitianMatrix::symmetrized(cone)), -1e-8);
  EXPECT_LE(w.a.matrix().squaredNorm() + w.b.matrix().squaredNorm(), 1.0 + 1e-6);
}

TEST(DualWitness, NonNegativeOnRandomJointChannels) {
  const Channel c = identity_channel(2);
  const DualWitness w = dual_witness(c, c);
  const SubsystemShape shape{2, 2, 2};
  const HermitianMatrix cone =
      HermitianMatrix::symmetrized(lift(w.a.matrix(), shape, {1, 3}) + lift(w.b.matrix(), shape, {2, 3}));
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ks = random_kraus(2, 4, 3, rng);
    const Channel joint(choi_from_kraus(ks, 2, 4).choi(), SubsystemShape{2}, SubsystemShape{2, 2});
    EXPECT_GE(trace_inner(joint.choi(), cone), -1e-6);
  }
}

TEST(Steering, SeparableStateIsNotSteerable) {
  Rng rng(54);
  for (int trial = 0; trial < 3; ++trial) {
    const Channel a = random_channel(2, 2, rng), b = random_channel(2, 2, rng);
    const FeasibilityReport r = state_steerable(DensityMatrix::maximally_mixed(4), a, b);
    EXPECT_EQ(r.status, Feasibility::Feasible);
    expect_witness_valid(r, steering_spec(DensityMatrix::maximally_mixed(4), a, b));
  }
  const DensityMatrix prod = product(random_state(2, rng), random_state(2, rng));
  EXPECT_EQ(state_steerable(prod, identity_channel(2), unitary_channel(hadamard())).status, Feasibility::Feasible);
}

TEST(Steering, MaxEntangledWithHadamardIsSteerable) {
  const FeasibilityReport r = state_steerable(max_entangled(2), identity_channel(2), unitary_channel(hadamard()));
  EXPECT_EQ(r.status, Feasibility::Infeasible);
}

TEST(Steering, WStateIsNotSteerableByIdentities) {
  const FeasibilityReport r = state_steerable(w_marginal(), identity_channel(2), identity_channel(2));
  EXPECT_EQ(r.status, Feasibility::Feasible);
  EXPECT_LE((r.witness->matrix() - w_state().matrix()).norm(), 1e-4);
}

TEST(Steering, MaxEntangledMatchesIncompatibility) {
  Rng rng(55);
  int decided = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Channel a = random_channel(2, 2, rng), b = random_channel(2, 2, rng);
    const FeasibilityReport s = state_steerable(max_entangled(2), a, b);
    const CompatReport c = channels_compatible(a, b);
    if (s.status == Feasibility::Marginal || c.verdict == CompatVerdict::Marginal) continue;
    ++decided;
    EXPECT_EQ(s.status == Feasibility::Infeasible, c.verdict == CompatVerdict::Incompatible) << "trial " << trial;
  }
  EXPECT_GE(decided, 8);
}

TEST(Steering, ConcatenationPreservesUnsteerability) {
  Rng rng(56);
  const std::vector<DensityMatrix> states{w_marginal(), product(random_state(2, rng), random_state(2, rng))};
  for (const auto& rho : states) {
    ASSERT_EQ(state_steerable(rho, identity_channel(2), identity_channel(2)).status, Feasibility::Feasible);
    for (int trial = 0; trial < 5; ++trial) {
      const FeasibilityReport r = state_steerable(rho, random_channel(2, 2, rng), random_channel(2, 2, rng));
      EXPECT_NE(r.status, Feasibility::Infeasible) << "trial " << trial;
    }
  }
}

TEST(Bell, SeparableStateIsLocal) {
  Rng rng(57);
  const DensityMatrix prod = product(random_state(2, rng), random_state(2, rng));
  const FeasibilityReport r = bell_local(prod, random_channel(2, 2, rng), random_channel(2, 2, rng),
                                         random_channel(2, 2, rng), random_channel(2, 2, rng));
  EXPECT_EQ(r.status, Feasibility::Feasible);
}

TEST(Bell, WStateIsNonlocal) {
  const Channel i = identity_channel(2);
  const FeasibilityReport r = bell_local(w_marginal(), i, i, i, i);
  EXPECT_EQ(r.status, Feasibility::Infeasible);
  EXPECT_LE(r.slack, -1e-5);
}

TEST(Bell, MaxEntangledIdentitiesAreNonlocal) {
  const Channel i = identity_channel(2);
  EXPECT_EQ(bell_local(max_entangled(2), i, i, i, i).status, Feasibility::Infeasible);
}

TEST(Bell, MaximallyMixedIsLocalWithProductWitness) {
  const Channel i = identity_channel(2);
  const DensityMatrix rho = DensityMatrix::maximally_mixed(4);
  const FeasibilityReport r = bell_local(rho, i, i, i, i);
  EXPECT_EQ(r.status, Feasibility::Feasible);
  EXPECT_NEAR(r.slack, 1.0 / 16.0, 1e-6);
  EXPECT_LE(max_abs_entry(r.witness->matrix() - id(16) / 16.0), 1e-6);
  expect_witness_valid(r, bell_spec(rho, i, i, i, i));
}

TEST(Bell, FactorOrderFollowsWings) {
  Rng rng(58);
  const Channel a = random_channel(2, 2, rng), b = random_channel(2, 3, rng);
  const Channel c = random_channel(2, 2, rng), d = random_channel(2, 3, rng);
  const DensityMatrix rho = random_state(4, rng);
  const MarginalSpec spec = bell_spec(rho, a, b, c, d);
  EXPECT_EQ(spec.shape.dims(), (std::vector<std::size_t>{2, 3, 2, 3}));
  EXPECT_EQ(spec.targets[3].kept, (FactorSet{2, 4}));
  EXPECT_LE(max_abs_entry(spec.targets[3].target.matrix() - apply(tensor(b, d), rho.hermitian()).matrix()), 1e-14);
  EXPECT_THROW(bell_spec(random_state(3, rng), a, b, c, d), DimensionError);
}

TEST(Bell, UnitaryReduction) {
  Rng rng(59);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = random_state(4, rng, 1 + trial % 2);
    const Channel u = unitary_channel(random_unitary(2, rng));
    const Channel c21 = random_channel(2, 2, rng), c12 = random_channel(2, 2, rng), c22 = random_channel(2, 2, rng);
    const FeasibilityReport with_u = bell_local(rho, u, c21, c12, c22);
    const FeasibilityReport with_id = bell_local(rho, identity_channel(2), c21, c12, c22);
    if (with_u.status == Feasibility::Marginal || with_id.status == Feasibility::Marginal) continue;
    EXPECT_EQ(with_u.status, with_id.status) << "trial " << trial;
  }
}

TEST(Effects, IdenticalEffectsAreCompatible) {
  Rng rng(60);
  for (int trial = 0; trial < 3; ++trial) {
    const Effect f = random_effect(2, rng);
    const FeasibilityReport r = effects_compatible(f, f);
    EXPECT_NE(r.status, Feasibility::Infeasible);
  }
  const Effect half(HermitianMatrix::identity(2) * 0.5);
  EXPECT_EQ(effects_compatible(half, half).status, Feasibility::Feasible);
}

TEST(Effects, SharpNoncommutingProjectorsAreIncompatible) {
  const Effect f(HermitianMatrix::projector(ComplexVector::Unit(2, 0)));
  const ComplexVector plus = (ComplexVector::Unit(2, 0) + ComplexVector::Unit(2, 1)) / std::sqrt(2.0);
  const Effect g(HermitianMatrix::projector(plus));
  EXPECT_EQ(effects_compatible(f, g).status, Feasibility::Infeasible);
}

TEST(Effects, BisectionFindsBuschThreshold) {
  double lo = 0.0, hi = 1.0;
  for (int step = 0; step < 14; ++step) {
    const double s = 0.5 * (lo + hi);
    const FeasibilityReport r = effects_compatible(noisy_effect(pauli_x(), s), noisy_effect(pauli_z(), s));
    (r.status == Feasibility::Feasible ? lo : hi) = s;
  }
  EXPECT_NEAR(0.5 * (lo + hi), 1.0 / std::sqrt(2.0), 1e-3);
}

TEST(Effects, WitnessIsJointEffect) {
  const Effect f = noisy_effect(pauli_x(), 0.5), g = noisy_effect(pauli_z(), 0.5);
  const FeasibilityReport r = effects_compatible(f, g);
  ASSERT_EQ(r.status, Feasibility::Feasible);
  const HermitianMatrix& h = *r.witness;
  EXPECT_GE(min_eigenvalue(h), -1e-8);
  EXPECT_GE(min_eigenvalue(f.hermitian() - h), -1e-8);
  EXPECT_GE(min_eigenvalue(g.hermitian() - h), -1e-8);
  EXPECT_GE(min_eigenvalue(HermitianMatrix::identity(2) - f.hermitian() - g.hermitian() + h), -1e-8);
  EXPECT_THROW(effects_compatible(f, Effect(HermitianMatrix::identity(3))), DimensionError);
}
