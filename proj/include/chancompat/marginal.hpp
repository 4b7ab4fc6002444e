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

// Compatibility, steering and Bell locality as prescribed-marginal problems.
//
// Each question asks for a PSD operator σ on a multipartite space whose
// marginals on given factor subsets equal given targets:
//
//   compatibility   σ on (B1, B2, in):   σ_{13} = C(Φ1),  σ_{23} = C(Φ2)
//   steering        σ on (C, B1, B2):    σ_{12} = (id⊗Φ1)(ρ), σ_{13} = (id⊗Φ2)(ρ)
//   Bell locality   σ on (B11, B21, B12, B22):
//                   σ_{13} = (Φ11⊗Φ12)(ρ), σ_{14} = (Φ11⊗Φ22)(ρ),
//                   σ_{23} = (Φ21⊗Φ12)(ρ), σ_{24} = (Φ21⊗Φ22)(ρ)
//
// where Φij is channel i of wing j.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chancompat/channel.hpp"
#include "chancompat/linalg.hpp"
#include "chancompat/sdp.hpp"

namespace chancompat {

struct MarginalTarget {
  FactorSet kept;  // ascending, 1-based
  HermitianMatrix target;
};

/// PSD operator on `shape` with trace `normalization` and the listed marginals.
struct MarginalSpec {
  SubsystemShape shape;
  std::vector<MarginalTarget> targets;
  double normalization = 1.0;

  void validate(const Tolerances& tol = {}) const {
    for (const auto& t : targets) {
      shape.check_factor_set(t.kept);
      if (!std::is_sorted(t.kept.begin(), t.kept.end()))
        throw DimensionError("MarginalSpec: kept factors must be ascending");
      if (t.target.dim() != shape.dim_of(t.kept))
        throw DimensionError("MarginalSpec: target dimension " + std::to_string(t.target.dim()) +
                             " does not match its kept factors");
      if (std::abs(t.target.trace() - normalization) > tol.psd)
        throw ValidationError("MarginalSpec: target trace " + std::to_string(t.target.trace()) +
                              " differs from normalization " + std::to_string(normalization));
    }
  }

  /// Trace row plus each target expanded in the Hermitian basis of its
  /// kept factors. Overlapping targets repeat rows; the solver prunes them.
  std::vector<HermitianConstraint> constraints() const {
    std::vector<HermitianConstraint> out;
    out.push_back({HermitianMatrix::identity(shape.total()), normalization});
    for (const auto& t : targets)
      for (const auto& b : hermitian_basis(t.target.dim()))
        out.push_back({HermitianMatrix::symmetrized(lift(b.matrix(), shape, t.kept)),
                       trace_inner(b, t.target)});
    return out;
  }
};

/// Largest deviation between a candidate's marginals and the targets.
inline double marginal_residual(const HermitianMatrix& sigma, const MarginalSpec& spec) {
  double worst = 0.0;
  for (const auto& t : spec.targets)
    worst = std::max(worst, max_abs_entry(marginal(sigma, spec.shape, t.kept).matrix() - t.target.matrix()));
  return worst;
}

inline FeasibilityReport marginal_feasibility(const MarginalSpec& spec, const Tolerances& tol = {}) {
  spec.validate(tol);
  return feasibility(spec.shape.total(), spec.constraints(), tol);
}

// ---------------------------------------------------------------------------
// Channel compatibility.

enum class CompatVerdict { Compatible, Incompatible, Marginal };

inline const char* to_string(CompatVerdict v) {
  switch (v) {
    case CompatVerdict::Compatible: return "compatible";
    case CompatVerdict::Incompatible: return "incompatible";
    case CompatVerdict::Marginal: return "marginal";
  }
  return "unknown";
}

/// (A, B) with Ã + 1⊗B ⪰ 0 minimizing Tr(C(Φ1) A) + Tr(C(Φ2) B) over the
/// unit Frobenius ball. A acts on (B1, in), B on (B2, in); Ã and 1⊗B are
/// their lifts to (B1, B2, in).
struct DualWitness {
  HermitianMatrix a;
  HermitianMatrix b;
  double value = 0.0;
  /// Minimum eigenvalue of Ã + 1⊗B, recomputed from A and B.
  double cone_min_eigenvalue = 0.0;
  SdpStatus solver_status = SdpStatus::NumericalFailure;
  double duality_gap = 0.0;
  double primal_objective = 0.0;
};

struct CompatReport {
  CompatVerdict verdict = CompatVerdict::Marginal;
  FeasibilityReport feasibility;
  std::optional<Channel> joint;  // Choi on (B1, B2, in)
  std::optional<DualWitness> dual_witness;
};

inline SubsystemShape joint_shape(const Channel& c1, const Channel& c2) {
  return SubsystemShape{c1.out_dim(), c2.out_dim(), c1.in_dim()};
}

inline MarginalSpec compatibility_spec(const Channel& c1, const Channel& c2) {
  if (c1.in_dim() != c2.in_dim())
    throw DimensionError("channels_compatible: channels must share the input dimension");
  MarginalSpec spec;
  spec.shape = joint_shape(c1, c2);
  spec.targets = {{{1, 3}, c1.choi()}, {{2, 3}, c2.choi()}};
  spec.normalization = static_cast<double>(c1.in_dim());
  return spec;
}

inline DualWitness dual_witness(const Channel& c1, const Channel& c2, const Tolerances& tol = {}) {
  if (c1.in_dim() != c2.in_dim())
    throw DimensionError("dual_witness: channels must share the input dimension");
  const SubsystemShape shape = joint_shape(c1, c2);
  const auto basis_a = hermitian_basis(c1.choi().dim());
  const auto basis_b = hermitian_basis(c2.choi().dim());
  const std::size_t na = basis_a.size(), nb = basis_b.size(), nv = na + nb;
  const std::size_t big = 2 * shape.total();

  // Dual form: max bᵀy s.t. C - Σ y_i A_i ⪰ 0 with y the coordinates of
  // (A, B). Block 0 is the realified cone constraint, block 1 the Frobenius
  // ball as [[1, y], [yᵀ, 1]] ⪰ 0.
  SdpProblem prob;
  prob.block_dims = {big, nv + 1};
  prob.objective = {RealMatrix::Zero(static_cast<Eigen::Index>(big), static_cast<Eigen::Index>(big)),
                    RealMatrix::Identity(static_cast<Eigen::Index>(nv + 1), static_cast<Eigen::Index>(nv + 1))};
  prob.sense = Sense::Minimize;
  for (std::size_t i = 0; i < nv; ++i) {
    const bool is_a = i < na;
    const HermitianMatrix& e = is_a ? basis_a[i] : basis_b[i - na];
    const ComplexMatrix lifted = lift(e.matrix(), shape, is_a ? FactorSet{1, 3} : FactorSet{2, 3});
    SdpConstraint row;
    RealMatrix ball = RealMatrix::Zero(static_cast<Eigen::Index>(nv + 1), static_cast<Eigen::Index>(nv + 1));
    ball(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(nv)) = -1.0;
    ball(static_cast<Eigen::Index>(nv), static_cast<Eigen::Index>(i)) = -1.0;
    row.blocks = {-realify(HermitianMatrix::symmetrized(lifted)), ball};
    row.rhs = -trace_inner(is_a ? c1.choi() : c2.choi(), e);
    prob.constraints.push_back(std::move(row));
  }
  SolverOptions opt;
  opt.gap_tol = tol.solver_gap;
  opt.feasibility_tol = tol.solver_feasibility;
  const SdpSolution sol = solve(prob, opt);

  ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(c1.choi().dim()),
                                        static_cast<Eigen::Index>(c1.choi().dim()));
  ComplexMatrix b = ComplexMatrix::Zero(static_cast<Eigen::Index>(c2.choi().dim()),
                                        static_cast<Eigen::Index>(c2.choi().dim()));
  for (std::size_t i = 0; i < na; ++i) a += sol.dual(static_cast<Eigen::Index>(i)) * basis_a[i].matrix();
  for (std::size_t i = 0; i < nb; ++i) b += sol.dual(static_cast<Eigen::Index>(na + i)) * basis_b[i].matrix();
  DualWitness w{HermitianMatrix::symmetrized(a), HermitianMatrix::symmetrized(b), 0.0, 0.0, sol.status,
                sol.gap, sol.primal_objective};
  w.value = trace_inner(c1.choi(), w.a) + trace_inner(c2.choi(), w.b);
  w.cone_min_eigenvalue = min_eigenvalue(HermitianMatrix::symmetrized(
      lift(w.a.matrix(), shape, {1, 3}) + lift(w.b.matrix(), shape, {2, 3})));
  return w;
}

/// Decides whether a joint channel with marginals Φ1 and Φ2 exists.
/// Compatible ships the joint channel; Incompatible requires both the
/// negative slack and a dual witness with value ≤ -eps. Any disagreement
/// between the two is reported as Marginal.
inline CompatReport channels_compatible(const Channel& c1, const Channel& c2, const Tolerances& tol = {}) {
  const MarginalSpec spec = compatibility_spec(c1, c2);
  CompatReport rep;
  rep.feasibility = marginal_feasibility(spec, tol);
  switch (rep.feasibility.status) {
    case Feasibility::Feasible: {
      // Congruence by (Tr_out C)^{-1/2} restores Tr_out C = I exactly.
      const ComplexMatrix& w = rep.feasibility.witness->matrix();
      const std::size_t outs = c1.out_dim() * c2.out_dim();
      const ComplexMatrix t = partial_trace(w, SubsystemShape{outs, c1.in_dim()}, {1});
      const ComplexMatrix s = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(t).operatorInverseSqrt();
      const ComplexMatrix lift = kron(ComplexMatrix::Identity(static_cast<Eigen::Index>(outs),
                                                              static_cast<Eigen::Index>(outs)), s);
      Tolerances loose = tol;
      loose.psd = tol.witness_residual;
      rep.joint = Channel(HermitianMatrix::symmetrized(lift * w * lift), SubsystemShape{c1.in_dim()},
                          SubsystemShape{c1.out_dim(), c2.out_dim()}, loose);
      rep.verdict = CompatVerdict::Compatible;
      break;
    }
    case Feasibility::Infeasible: {
      rep.dual_witness = dual_witness(c1, c2, tol);
      const bool certified = rep.dual_witness->value <= -tol.feasibility_eps &&
                             rep.dual_witness->cone_min_eigenvalue >= -tol.witness_psd;
      rep.verdict = certified ? CompatVerdict::Incompatible : CompatVerdict::Marginal;
      break;
    }
    case Feasibility::Marginal:
      rep.verdict = CompatVerdict::Marginal;
      break;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Steering and Bell locality.

/// (id_C ⊗ Φ)(ρ) for ρ on C ⊗ A.
inline HermitianMatrix apply_second(const Channel& c, const DensityMatrix& rho) {
  if (rho.dim() % c.in_dim() != 0)
    throw DimensionError("state dimension " + std::to_string(rho.dim()) +
                         " is not a multiple of the channel input dimension " +
                         std::to_string(c.in_dim()));
  return apply(tensor(identity_channel(rho.dim() / c.in_dim()), c), rho.hermitian());
}

inline MarginalSpec steering_spec(const DensityMatrix& rho, const Channel& c1, const Channel& c2) {
  if (c1.in_dim() != c2.in_dim())
    throw DimensionError("state_steerable: channels must share the input dimension");
  MarginalSpec spec;
  spec.shape = SubsystemShape{rho.dim() / c1.in_dim(), c1.out_dim(), c2.out_dim()};
  spec.targets = {{{1, 2}, apply_second(c1, rho)}, {{1, 3}, apply_second(c2, rho)}};
  spec.normalization = 1.0;
  return spec;
}

/// Feasible means a common extension exists (not steerable); Infeasible
/// means steerable.
inline FeasibilityReport state_steerable(const DensityMatrix& rho, const Channel& c1, const Channel& c2,
                                         const Tolerances& tol = {}) {
  return marginal_feasibility(steering_spec(rho, c1, c2), tol);
}

/// c11, c21 act on the first factor of ρ, c12, c22 on the second.
inline MarginalSpec bell_spec(const DensityMatrix& rho, const Channel& c11, const Channel& c21,
                              const Channel& c12, const Channel& c22) {
  if (c11.in_dim() != c21.in_dim() || c12.in_dim() != c22.in_dim())
    throw DimensionError("bell_local: channels of one wing must share the input dimension");
  if (rho.dim() != c11.in_dim() * c12.in_dim())
    throw DimensionError("bell_local: state dimension does not match the channel inputs");
  auto pair = [&](const Channel& a, const Channel& b) { return apply(tensor(a, b), rho.hermitian()); };
  MarginalSpec spec;
  spec.shape = SubsystemShape{c11.out_dim(), c21.out_dim(), c12.out_dim(), c22.out_dim()};
  spec.targets = {{{1, 3}, pair(c11, c12)},
                  {{1, 4}, pair(c11, c22)},
                  {{2, 3}, pair(c21, c12)},
                  {{2, 4}, pair(c21, c22)}};
  spec.normalization = 1.0;
  return spec;
}

/// Feasible means Bell local; Infeasible means Bell nonlocal.
inline FeasibilityReport bell_local(const DensityMatrix& rho, const Channel& c11, const Channel& c21,
                                    const Channel& c12, const Channel& c22, const Tolerances& tol = {}) {
  return marginal_feasibility(bell_spec(rho, c11, c21, c12, c22), tol);
}

// ---------------------------------------------------------------------------
// Two-outcome effects.

/// f and g are compatible iff some G satisfies G ⪰ 0, f - G ⪰ 0, g - G ⪰ 0
/// and 1 - f - g + G ⪰ 0 (G is the joint effect h11). Solved as
/// max t with each of the four operators ⪰ tI; the witness is G.
inline FeasibilityReport effects_compatible(const Effect& f, const Effect& g, const Tolerances& tol = {}) {
  if (f.dim() != g.dim()) throw DimensionError("effects_compatible: effects differ in dimension");
  const std::size_t d = f.dim();
  const auto n2 = static_cast<Eigen::Index>(2 * d);
  const HermitianMatrix id = HermitianMatrix::identity(d);
  const std::vector<HermitianMatrix> offsets = {id * 0.0, f.hermitian(), g.hermitian(),
                                                id - f.hermitian() - g.hermitian()};
  const std::vector<double> sign = {1.0, -1.0, -1.0, 1.0};  // coefficient of G in each block
  const auto basis = hermitian_basis(d);

  SdpProblem prob;
  prob.block_dims.assign(4, 2 * d);
  for (const auto& o : offsets) prob.objective.push_back(realify(o));
  // y_0 = t, y_{1..} = coordinates of G; block k is offset_k + sign_k G - tI.
  SdpConstraint t_row;
  t_row.rhs = 1.0;
  for (int k = 0; k < 4; ++k) t_row.blocks.push_back(RealMatrix::Identity(n2, n2));
  prob.constraints.push_back(t_row);
  for (const auto& e : basis) {
    SdpConstraint row;
    row.rhs = 0.0;
    const RealMatrix re = realify(e);
    for (int k = 0; k < 4; ++k) row.blocks.push_back(-sign[static_cast<std::size_t>(k)] * re);
    prob.constraints.push_back(std::move(row));
  }
  SolverOptions opt;
  opt.gap_tol = tol.solver_gap;
  opt.feasibility_tol = tol.solver_feasibility;
  const SdpSolution sol = solve(prob, opt);

  FeasibilityReport rep;
  rep.solver_status = sol.status;
  rep.iterations = sol.iterations;
  rep.duality_gap = sol.gap;
  rep.primal_objective = sol.primal_objective;
  rep.face_dim = d;
  rep.dual_certificate = sol.dual;
  rep.slack = sol.dual(0);
  ComplexMatrix gm = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < basis.size(); ++k) gm += sol.dual(static_cast<Eigen::Index>(k + 1)) * basis[k].matrix();
  const HermitianMatrix joint = HermitianMatrix::symmetrized(gm);
  rep.witness = joint;
  if (sol.status != SdpStatus::Optimal) {
    rep.status = Feasibility::Marginal;
  } else if (rep.slack >= tol.feasibility_eps) {
    const bool ok = min_eigenvalue(joint) >= -tol.witness_psd &&
                    min_eigenvalue(f.hermitian() - joint) >= -tol.witness_psd &&
                    min_eigenvalue(g.hermitian() - joint) >= -tol.witness_psd &&
                    min_eigenvalue(offsets[3] + joint) >= -tol.witness_psd;
    rep.status = ok ? Feasibility::Feasible : Feasibility::Marginal;
  } else if (rep.slack <= -tol.feasibility_eps) {
    rep.status = Feasibility::Infeasible;
  } else {
    rep.status = Feasibility::Marginal;
  }
  return rep;
}

}  // namespace chancompat
