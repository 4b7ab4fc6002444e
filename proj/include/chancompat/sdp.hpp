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

// Dense primal-dual interior point solver for block-diagonal semidefinite
// programs, and the Hermitian feasibility wrapper built on it.
//
// Primal:  min ⟨C, X⟩  s.t. ⟨A_i, X⟩ = b_i,  X ⪰ 0
// Dual:    max bᵀy     s.t. Z = C - Σ_i y_i A_i ⪰ 0
//
// X, Z and every A_i are block diagonal with real symmetric blocks. The
// search direction is HKM (XZ + ZX symmetrization of X dZ Z⁻¹).

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chancompat/config.hpp"
#include "chancompat/linalg.hpp"

namespace chancompat {

enum class Sense { Minimize, Maximize };

struct SdpConstraint {
  std::vector<RealMatrix> blocks;  // one symmetric matrix per block
  double rhs = 0.0;
};

struct SdpProblem {
  std::vector<std::size_t> block_dims;
  std::vector<RealMatrix> objective;
  std::vector<SdpConstraint> constraints;
  Sense sense = Sense::Minimize;

  void validate() const {
    if (block_dims.empty()) throw DimensionError("SdpProblem: no blocks");
    auto check = [&](const std::vector<RealMatrix>& blocks, const std::string& what) {
      if (blocks.size() != block_dims.size())
        throw DimensionError("SdpProblem: " + what + " has wrong number of blocks");
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto d = static_cast<Eigen::Index>(block_dims[b]);
        if (blocks[b].rows() != d || blocks[b].cols() != d)
          throw DimensionError("SdpProblem: " + what + " block " + std::to_string(b) +
                               " does not match block dimension");
        if ((blocks[b] - blocks[b].transpose()).cwiseAbs().maxCoeff() > 1e-12 *
                (1.0 + blocks[b].cwiseAbs().maxCoeff()))
          throw ValidationError("SdpProblem: " + what + " block " + std::to_string(b) +
                                " is not symmetric");
        if (!blocks[b].allFinite())
          throw ValidationError("SdpProblem: " + what + " has non-finite entries");
      }
    };
    check(objective, "objective");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      check(constraints[i].blocks, "constraint " + std::to_string(i));
      if (!std::isfinite(constraints[i].rhs))
        throw ValidationError("SdpProblem: constraint " + std::to_string(i) + " rhs not finite");
    }
  }
};

enum class SdpStatus {
  Optimal,
  /// The equality constraints have no solution at all.
  LinearlyInfeasible,
  MaxIterations,
  NumericalFailure,
};

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::LinearlyInfeasible: return "linearly_infeasible";
    case SdpStatus::MaxIterations: return "max_iterations";
    case SdpStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalFailure;
  std::vector<RealMatrix> primal;      // X
  std::vector<RealMatrix> dual_slack;  // Z
  RealVector dual;                     // y, one entry per original constraint
  double primal_objective = 0.0;       // in the caller's sense
  double dual_objective = 0.0;
  double gap = 0.0;                    // |primal - dual|
  double primal_residual = 0.0;        // ‖b - A(X)‖ over the original rows
  double dual_residual = 0.0;          // ‖C - A*(y) - Z‖_F
  double linear_residual = 0.0;        // distance of b from the range of A
  int iterations = 0;
};

struct SolverOptions {
  double gap_tol = Tolerances{}.solver_gap;
  double feasibility_tol = Tolerances{}.solver_feasibility;
  double rank_tol = Tolerances{}.rank;
  /// Relative distance of b from the row range above which the equality
  /// constraints count as inconsistent; within it b is projected.
  double linear_tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.98;
  /// Fixed centering parameter of the basic path-following scheme.
  double centering = 0.1;
  /// Mehrotra predictor-corrector; off means the fixed-centering scheme.
  bool predictor_corrector = false;
  /// Throws NumericalError if an iterate that is primal and dual feasible
  /// has dual objective above primal objective.
  bool check_weak_duality = false;
};

namespace detail {

using Blocks = std::vector<RealMatrix>;

inline double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

inline double frob(const Blocks& a) { return std::sqrt(inner(a, a)); }

inline std::size_t svec_size(const std::vector<std::size_t>& dims) {
  std::size_t p = 0;
  for (auto d : dims) p += d * (d + 1) / 2;
  return p;
}

/// Isometric vectorization: off-diagonal entries scaled by √2.
inline void svec(const Blocks& a, Eigen::Ref<RealVector, 0, Eigen::InnerStride<>> out) {
  const double r2 = std::sqrt(2.0);
  Eigen::Index pos = 0;
  for (const auto& m : a)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out(pos++) = m(j, j);
      for (Eigen::Index i = j + 1; i < m.rows(); ++i) out(pos++) = r2 * m(i, j);
    }
}

inline Blocks smat(const Eigen::Ref<const RealVector>& v, const std::vector<std::size_t>& dims) {
  const double r2 = std::sqrt(2.0);
  Blocks out;
  Eigen::Index pos = 0;
  for (auto d : dims) {
    const auto n = static_cast<Eigen::Index>(d);
    RealMatrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      m(j, j) = v(pos++);
      for (Eigen::Index i = j + 1; i < n; ++i) m(i, j) = m(j, i) = v(pos++) / r2;
    }
    out.push_back(std::move(m));
  }
  return out;
}

inline Blocks scaled_identity(const std::vector<std::size_t>& dims, double s) {
  Blocks out;
  for (auto d : dims)
    out.push_back(s * RealMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  return out;
}

inline Blocks zeros(const std::vector<std::size_t>& dims) { return scaled_identity(dims, 0.0); }

/// Largest α with M + α D ⪰ 0 (infinity if unbounded), M ≻ 0 assumed.
inline std::optional<double> max_step(const Blocks& m, const Blocks& d) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m.size(); ++k) {
    Eigen::LLT<RealMatrix> llt(m[k]);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const RealMatrix linv_d = llt.matrixL().solve(d[k]);
    RealMatrix w = llt.matrixL().solve(linv_d.transpose());
    w = 0.5 * (w + w.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(w, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return std::nullopt;
    const double lo = es.eigenvalues()(0);
    if (lo < 0.0) alpha = std::min(alpha, -1.0 / lo);
  }
  return alpha;
}

}  // namespace detail

/// Solves a block-diagonal SDP. Constraint rows are first orthonormalized by
/// an SVD; rows that are linear combinations of others are dropped and a
/// right-hand side outside the row range gives LinearlyInfeasible.
inline SdpSolution solve(const SdpProblem& problem, const SolverOptions& opt = {}) {
  using namespace detail;
  problem.validate();
  const auto& dims = problem.block_dims;
  const std::size_t nblocks = dims.size();
  const auto p = static_cast<Eigen::Index>(svec_size(dims));
  const auto m_orig = static_cast<Eigen::Index>(problem.constraints.size());
  std::size_t n_total = 0;
  for (auto d : dims) n_total += d;

  SdpSolution sol;

  // Objective in minimization form.
  Blocks c = problem.objective;
  if (problem.sense == Sense::Maximize)
    for (auto& blk : c) blk = -blk;

  // Orthonormalize constraint rows.
  RealMatrix a_rows(m_orig, p);
  RealVector b_orig(m_orig);
  for (Eigen::Index i = 0; i < m_orig; ++i) {
    svec(problem.constraints[static_cast<std::size_t>(i)].blocks, a_rows.row(i).transpose());
    b_orig(i) = problem.constraints[static_cast<std::size_t>(i)].rhs;
  }
  RealMatrix u_r, v_r;
  RealVector s_r;
  Eigen::Index rank = 0;
  if (m_orig > 0) {
    Eigen::JacobiSVD<RealMatrix> svd(a_rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    const double cutoff = opt.rank_tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    u_r = svd.matrixU().leftCols(rank);
    v_r = svd.matrixV().leftCols(rank);
    s_r = sv.head(rank);
    const RealVector proj = u_r * (u_r.transpose() * b_orig);
    sol.linear_residual = (b_orig - proj).norm();
    if (sol.linear_residual > opt.linear_tol * (1.0 + b_orig.norm())) {
      sol.status = SdpStatus::LinearlyInfeasible;
      sol.dual = RealVector::Zero(m_orig);
      return sol;
    }
  }
  const Eigen::Index m = rank;
  const RealVector b = m > 0 ? RealVector(s_r.cwiseInverse().asDiagonal() * (u_r.transpose() * b_orig))
                             : RealVector(0);
  std::vector<Blocks> a(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) a[static_cast<std::size_t>(i)] = smat(v_r.col(i), dims);

  auto apply_a = [&](const Blocks& x) {
    RealVector out(m);
    for (Eigen::Index i = 0; i < m; ++i) out(i) = inner(a[static_cast<std::size_t>(i)], x);
    return out;
  };
  auto apply_at = [&](const RealVector& y) {
    Blocks out = zeros(dims);
    for (Eigen::Index i = 0; i < m; ++i)
      for (std::size_t k = 0; k < nblocks; ++k) out[k] += y(i) * a[static_cast<std::size_t>(i)][k];
    return out;
  };

  // Starting point: scaled identities, y = 0.
  const double sqrt_n = std::sqrt(static_cast<double>(n_total));
  double xi = std::max(10.0, sqrt_n);
  for (Eigen::Index i = 0; i < m; ++i) xi = std::max(xi, sqrt_n * (1.0 + std::abs(b(i))));
  double eta = std::max({10.0, sqrt_n, frob(c)});
  Blocks x = scaled_identity(dims, xi);
  Blocks z = scaled_identity(dims, eta);
  RealVector y = RealVector::Zero(m);

  const double b_norm = b.norm();
  const double c_norm = frob(c);

  auto finish = [&](SdpStatus status, int iter) {
    sol.status = status;
    sol.iterations = iter;
    sol.primal = x;
    sol.dual_slack = z;
    RealVector y_orig = m > 0 ? RealVector(u_r * (s_r.cwiseInverse().asDiagonal() * y))
                              : RealVector(RealVector::Zero(m_orig));
    double pobj = inner(c, x);
    double dobj = m > 0 ? b.dot(y) : 0.0;
    Blocks rd = c;
    const Blocks aty = apply_at(y);
    for (std::size_t k = 0; k < nblocks; ++k) rd[k] -= aty[k] + z[k];
    sol.dual_residual = frob(rd);
    RealVector xs(p);
    svec(x, xs);
    sol.primal_residual = m_orig > 0 ? (b_orig - a_rows * xs).norm() : 0.0;
    if (problem.sense == Sense::Maximize) {
      pobj = -pobj;
      dobj = -dobj;
      y_orig = -y_orig;
    }
    sol.dual = y_orig;
    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.gap = std::abs(pobj - dobj);
    return sol;
  };

  for (int iter = 0; iter <= opt.max_iterations; ++iter) {
    const RealVector rp = b - apply_a(x);
    Blocks rd = c;
    {
      const Blocks aty = apply_at(y);
      for (std::size_t k = 0; k < nblocks; ++k) rd[k] -= aty[k] + z[k];
    }
    const double pobj = inner(c, x);
    const double dobj = m > 0 ? b.dot(y) : 0.0;
    const double pinf = rp.norm() / (1.0 + b_norm);
    const double dinf = frob(rd) / (1.0 + c_norm);
    const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double mu = inner(x, z) / static_cast<double>(n_total);

    if (opt.check_weak_duality && pinf <= opt.feasibility_tol && dinf <= opt.feasibility_tol &&
        dobj > pobj + 1e-9 * (1.0 + std::abs(pobj)))
      throw NumericalError("solve: weak duality violated at iteration " + std::to_string(iter));

    if (rel_gap <= opt.gap_tol && pinf <= opt.feasibility_tol && dinf <= opt.feasibility_tol)
      return finish(SdpStatus::Optimal, iter);
    if (iter == opt.max_iterations) return finish(SdpStatus::MaxIterations, iter);

    // Z⁻¹ and the Schur complement M_ij = ⟨A_i, X A_j Z⁻¹⟩.
    Blocks zinv(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) {
      Eigen::LLT<RealMatrix> llt(z[k]);
      if (llt.info() != Eigen::Success) return finish(SdpStatus::NumericalFailure, iter);
      zinv[k] = llt.solve(RealMatrix::Identity(z[k].rows(), z[k].cols()));
      zinv[k] = 0.5 * (zinv[k] + zinv[k].transpose());
    }
    RealMatrix schur(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Blocks g(nblocks);
      for (std::size_t k = 0; k < nblocks; ++k)
        g[k] = x[k] * a[static_cast<std::size_t>(j)][k] * zinv[k];
      for (Eigen::Index i = 0; i <= j; ++i) schur(i, j) = schur(j, i) = inner(a[static_cast<std::size_t>(i)], g);
    }
    Eigen::LDLT<RealMatrix> schur_fact(schur);
    if (m > 0 && schur_fact.info() != Eigen::Success) return finish(SdpStatus::NumericalFailure, iter);

    // A(X Rd Z⁻¹) is shared by predictor and corrector.
    Blocks x_rd_zinv(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) x_rd_zinv[k] = x[k] * rd[k] * zinv[k];
    const RealVector a_x_rd_zinv = apply_a(x_rd_zinv);

    struct Direction {
      Blocks dx, dz;
      RealVector dy;
    };
    // Solves the Newton system for target σμ with an optional second-order
    // correction term dXa dZa Z⁻¹.
    auto direction = [&](double sigma_mu, const Blocks* corr_dx, const Blocks* corr_dz) {
      Blocks rc(nblocks);
      for (std::size_t k = 0; k < nblocks; ++k) {
        rc[k] = sigma_mu * zinv[k] - x[k];
        if (corr_dx != nullptr) {
          const RealMatrix t = (*corr_dx)[k] * (*corr_dz)[k] * zinv[k];
          rc[k] -= 0.5 * (t + t.transpose());
        }
      }
      const RealVector rhs = rp - apply_a(rc) + a_x_rd_zinv;
      Direction d;
      d.dy = m > 0 ? RealVector(schur_fact.solve(rhs)) : RealVector(0);
      d.dz = rd;
      const Blocks at_dy = apply_at(d.dy);
      d.dx.resize(nblocks);
      for (std::size_t k = 0; k < nblocks; ++k) {
        d.dz[k] -= at_dy[k];
        const RealMatrix t = x[k] * d.dz[k] * zinv[k];
        d.dx[k] = rc[k] - 0.5 * (t + t.transpose());
      }
      return d;
    };
    auto steps = [&](const Direction& d, double frac) -> std::optional<std::pair<double, double>> {
      const auto ap = max_step(x, d.dx);
      const auto ad = max_step(z, d.dz);
      if (!ap || !ad) return std::nullopt;
      return std::make_pair(std::min(1.0, frac * *ap), std::min(1.0, frac * *ad));
    };

    Direction dir;
    if (opt.predictor_corrector) {
      const Direction pred = direction(0.0, nullptr, nullptr);
      const auto st = steps(pred, 1.0);
      if (!st) return finish(SdpStatus::NumericalFailure, iter);
      Blocks xa = x, za = z;
      for (std::size_t k = 0; k < nblocks; ++k) {
        xa[k] += st->first * pred.dx[k];
        za[k] += st->second * pred.dz[k];
      }
      const double mu_aff = inner(xa, za) / static_cast<double>(n_total);
      const double ratio = std::clamp(mu_aff / mu, 0.0, 1.0);
      const double sigma = std::max(ratio * ratio * ratio, 1e-3);
      dir = direction(sigma * mu, &pred.dx, &pred.dz);
    } else {
      dir = direction(opt.centering * mu, nullptr, nullptr);
    }
    const auto st = steps(dir, opt.step_fraction);
    if (!st) return finish(SdpStatus::NumericalFailure, iter);
    for (std::size_t k = 0; k < nblocks; ++k) {
      x[k] += st->first * dir.dx[k];
      x[k] = 0.5 * (x[k] + x[k].transpose());
      z[k] += st->second * dir.dz[k];
      z[k] = 0.5 * (z[k] + z[k].transpose());
    }
    y += st->second * dir.dy;
  }
  return finish(SdpStatus::MaxIterations, opt.max_iterations);
}

// ---------------------------------------------------------------------------
// Feasibility of a Hermitian variable with affine constraints.

enum class Feasibility { Feasible, Infeasible, Marginal };

inline const char* to_string(Feasibility f) {
  switch (f) {
    case Feasibility::Feasible: return "feasible";
    case Feasibility::Infeasible: return "infeasible";
    case Feasibility::Marginal: return "marginal";
  }
  return "unknown";
}

/// Tr(op X) = rhs.
struct HermitianConstraint {
  HermitianMatrix op;
  double rhs = 0.0;
};

/// Outcome of max t s.t. X - tI ⪰ 0, Tr(op_k X) = b_k.
struct FeasibilityReport {
  Feasibility status = Feasibility::Marginal;
  /// Optimal t. -infinity when the equality constraints are inconsistent.
  /// After face refinement: the same quantity on the identified face.
  double slack = 0.0;
  std::optional<HermitianMatrix> witness;
  std::optional<RealVector> dual_certificate;
  SdpStatus solver_status = SdpStatus::NumericalFailure;
  int iterations = 0;
  /// |primal - dual| of the last solve, and the primal objective it refers to.
  double duality_gap = 0.0;
  double primal_objective = 0.0;
  double linear_residual = 0.0;
  /// Dimension of the subspace the witness was found on (n if unrestricted).
  std::size_t face_dim = 0;
};

/// Largest constraint violation |Tr(op_k X) - b_k|.
inline double max_constraint_residual(const HermitianMatrix& x,
                                      const std::vector<HermitianConstraint>& constraints) {
  double worst = 0.0;
  for (const auto& c : constraints) worst = std::max(worst, std::abs(trace_inner(c.op, x) - c.rhs));
  return worst;
}

/// Re-checks a witness independently of the solver.
inline bool verify_witness(const HermitianMatrix& x, const std::vector<HermitianConstraint>& constraints,
                           const Tolerances& tol = {}) {
  return min_eigenvalue(x) >= -tol.witness_psd &&
         max_constraint_residual(x, constraints) <= tol.witness_residual;
}

namespace detail {

inline FeasibilityReport slack_program(std::size_t n, const std::vector<HermitianConstraint>& constraints,
                                       const Tolerances& tol, double linear_tol) {
  const auto n2 = static_cast<Eigen::Index>(2 * n);
  const std::vector<std::size_t> dims{2 * n};
  const auto p = static_cast<Eigen::Index>(svec_size(dims));

  std::vector<RealMatrix> ops;
  ops.reserve(constraints.size());
  for (const auto& c : constraints) {
    if (c.op.dim() != n) throw DimensionError("feasibility: constraint operator has wrong dimension");
    ops.push_back(0.5 * realify(c.op));
  }

  // The identity must be a combination of the constraint operators, which
  // fixes Tr X and bounds t.
  RealMatrix rows(static_cast<Eigen::Index>(ops.size()), p);
  for (std::size_t k = 0; k < ops.size(); ++k)
    svec({ops[k]}, rows.row(static_cast<Eigen::Index>(k)).transpose());
  RealVector id_vec(p);
  svec({RealMatrix::Identity(n2, n2)}, id_vec);
  RealVector b(static_cast<Eigen::Index>(constraints.size()));
  for (std::size_t k = 0; k < constraints.size(); ++k) b(static_cast<Eigen::Index>(k)) = constraints[k].rhs;
  if (constraints.empty())
    throw ValidationError("feasibility: constraints do not fix the trace (missing normalization row)");
  double trace_real = 0.0;
  {
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(rows.transpose());
    cod.setThreshold(tol.rank);
    const RealVector w = cod.solve(id_vec);
    if ((rows.transpose() * w - id_vec).norm() > 1e-8 * id_vec.norm())
      throw ValidationError("feasibility: constraints do not fix the trace (missing normalization row)");
    trace_real = w.dot(b);
  }

  // X = S + tI with t = (Tr X - Tr S) / 2n:  min Tr S  s.t. ⟨R_k - (Tr R_k / 2n) I, S⟩ = b'_k.
  SdpProblem prob;
  prob.block_dims = dims;
  prob.objective = {RealMatrix::Identity(n2, n2)};
  prob.sense = Sense::Minimize;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const double tr = ops[k].trace();
    SdpConstraint row;
    row.blocks = {ops[k] - (tr / static_cast<double>(n2)) * RealMatrix::Identity(n2, n2)};
    row.rhs = constraints[k].rhs - tr * trace_real / static_cast<double>(n2);
    prob.constraints.push_back(std::move(row));
  }
  SolverOptions opt;
  opt.gap_tol = tol.solver_gap;
  opt.feasibility_tol = tol.solver_feasibility;
  opt.rank_tol = tol.rank;
  opt.linear_tol = linear_tol;
  const SdpSolution sol = solve(prob, opt);

  FeasibilityReport rep;
  rep.solver_status = sol.status;
  rep.iterations = sol.iterations;
  rep.linear_residual = sol.linear_residual;
  rep.face_dim = n;
  if (sol.status == SdpStatus::LinearlyInfeasible) {
    rep.status = Feasibility::Infeasible;
    rep.slack = -std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.duality_gap = sol.gap;
  rep.primal_objective = sol.primal_objective;
  rep.dual_certificate = sol.dual;
  const double tr_s = sol.primal[0].trace();
  rep.slack = (trace_real - tr_s) / static_cast<double>(n2);
  rep.witness = derealify(sol.primal[0]) + HermitianMatrix::identity(n) * rep.slack;
  if (sol.status != SdpStatus::Optimal) {
    rep.status = Feasibility::Marginal;
    return rep;
  }
  if (rep.slack >= tol.feasibility_eps) {
    rep.status = verify_witness(*rep.witness, constraints, tol) ? Feasibility::Feasible
                                                                 : Feasibility::Marginal;
  } else if (rep.slack <= -tol.feasibility_eps) {
    rep.status = Feasibility::Infeasible;
  } else {
    rep.status = Feasibility::Marginal;
  }
  return rep;
}

}  // namespace detail

/// Decides whether some X ⪰ 0 satisfies every constraint. The constraint
/// operators must span the identity (a trace normalization), otherwise
/// ValidationError.
///
/// The verdict is the sign of t* = max{t : X - tI ⪰ 0, constraints}, with
/// |t*| < eps reported as Marginal. A Marginal result whose witness is
/// singular is retried on the range of that witness; if the restricted
/// problem is strictly feasible there and the lifted witness re-validates
/// against the original constraints, the report becomes Feasible with the
/// restricted slack and face_dim < n.
inline FeasibilityReport feasibility(std::size_t n, const std::vector<HermitianConstraint>& constraints,
                                     const Tolerances& tol = {}) {
  if (n == 0) throw DimensionError("feasibility: dimension must be positive");
  FeasibilityReport rep = detail::slack_program(n, constraints, tol, SolverOptions{}.linear_tol);
  if (rep.status != Feasibility::Marginal || !rep.witness || rep.solver_status != SdpStatus::Optimal)
    return rep;

  // Face refinement. Interior point iterates approach the relative interior
  // of the solution set, so the witness range exposes the minimal face.
  const EigenDecomposition ed = eigh(*rep.witness);
  const double top = ed.values(ed.values.size() - 1);
  if (top <= 0.0) return rep;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ed.values.size(); ++i)
    if (ed.values(i) > 1e-5 * top) keep.push_back(i);
  if (keep.empty() || keep.size() == n) return rep;
  ComplexMatrix q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = ed.vectors.col(keep[j]);

  std::vector<HermitianConstraint> restricted;
  restricted.reserve(constraints.size());
  for (const auto& c : constraints)
    restricted.push_back({HermitianMatrix::symmetrized(q.adjoint() * c.op.matrix() * q), c.rhs});
  FeasibilityReport face;
  try {
    // The face basis is only accurate to the solver tolerance; the lifted
    // witness is re-verified below.
    face = detail::slack_program(keep.size(), restricted, tol, tol.witness_residual);
  } catch (const ValidationError&) {
    return rep;
  }
  if (face.status != Feasibility::Feasible || !face.witness) return rep;
  const HermitianMatrix lifted = HermitianMatrix::symmetrized(q * face.witness->matrix() * q.adjoint());
  if (!verify_witness(lifted, constraints, tol)) return rep;
  face.witness = lifted;
  face.face_dim = keep.size();
  face.iterations += rep.iterations;
  return face;
}

}  // namespace chancompat
