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

// Dense complex linear algebra over tensor-product spaces.
//
// Subsystem convention (used by every module of the library): a space
// H_1 ⊗ H_2 ⊗ ... ⊗ H_n is described by a SubsystemShape listing the local
// dimensions left to right. Factors are numbered 1..n. Basis index i of the
// composite space has factor 1 as its most significant digit, so
// kron(a, b) acts on factor 1 with a and on factor 2 with b. Partial traces
// and marginal constraints name factors with these 1-based numbers, e.g.
// partial_trace(x, shape, {2, 4}) is Tr_24.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "chancompat/config.hpp"

namespace chancompat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// 1-based factor numbers.
using FactorSet = std::vector<std::size_t>;

inline bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

inline double max_abs_entry(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// Square complex matrix equal to its conjugate transpose. The stored value is
/// exactly Hermitian: construction checks the deviation and then symmetrizes.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const ComplexMatrix& a, double tol = Tolerances{}.construction) {
    if (a.rows() != a.cols() || a.rows() == 0)
      throw DimensionError("HermitianMatrix: matrix must be square and non-empty");
    if (!all_finite(a)) throw ValidationError("HermitianMatrix: non-finite entry");
    const double dev = max_abs_entry(a - a.adjoint());
    if (dev > tol)
      throw ValidationError("HermitianMatrix: |A - A^dagger|_max = " + std::to_string(dev) +
                            " exceeds tolerance");
    m_ = 0.5 * (a + a.adjoint());
  }

  /// For results that are Hermitian by construction but carry rounding noise.
  static HermitianMatrix symmetrized(const ComplexMatrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0)
      throw DimensionError("HermitianMatrix: matrix must be square and non-empty");
    HermitianMatrix h;
    h.m_ = 0.5 * (a + a.adjoint());
    return h;
  }

  static HermitianMatrix identity(std::size_t d) {
    return symmetrized(ComplexMatrix::Identity(static_cast<Eigen::Index>(d),
                                               static_cast<Eigen::Index>(d)));
  }

  static HermitianMatrix projector(const ComplexVector& v) {
    return symmetrized(v * v.adjoint());
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const { return symmetrized(m_ + o.m_); }
  HermitianMatrix operator-(const HermitianMatrix& o) const { return symmetrized(m_ - o.m_); }
  HermitianMatrix operator*(double s) const { return symmetrized(s * m_); }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

 private:
  ComplexMatrix m_;
};

/// Ordered local dimensions of a tensor-product space.
class SubsystemShape {
 public:
  SubsystemShape() = default;
  SubsystemShape(std::initializer_list<std::size_t> dims) : SubsystemShape(std::vector<std::size_t>(dims)) {}
  explicit SubsystemShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("SubsystemShape: no factors");
    for (auto d : dims_)
      if (d == 0) throw DimensionError("SubsystemShape: factor dimension must be positive");
  }

  std::size_t factors() const { return dims_.size(); }
  std::size_t total() const {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
  }
  /// Dimension of factor k (1-based).
  std::size_t dim(std::size_t k) const { return dims_.at(k - 1); }
  const std::vector<std::size_t>& dims() const { return dims_; }

  /// Product of the dimensions of the given factors.
  std::size_t dim_of(const FactorSet& set) const {
    std::size_t d = 1;
    for (auto k : set) d *= dim(k);
    return d;
  }

  /// Factors not in `set`, ascending.
  FactorSet complement(const FactorSet& set) const {
    FactorSet out;
    for (std::size_t k = 1; k <= dims_.size(); ++k)
      if (std::find(set.begin(), set.end(), k) == set.end()) out.push_back(k);
    return out;
  }

  /// Throws unless `set` is a duplicate-free subset of 1..n.
  void check_factor_set(const FactorSet& set) const {
    std::vector<bool> seen(dims_.size() + 1, false);
    for (auto k : set) {
      if (k < 1 || k > dims_.size())
        throw DimensionError("factor index " + std::to_string(k) + " out of range 1.." +
                             std::to_string(dims_.size()));
      if (seen[k]) throw DimensionError("factor index " + std::to_string(k) + " repeated");
      seen[k] = true;
    }
  }

  bool operator==(const SubsystemShape&) const = default;

 private:
  std::vector<std::size_t> dims_;
};

namespace detail {

/// Offsets into the full index space enumerating every multi-index of the
/// given factors (in their listed order, first listed most significant) with
/// all other digits zero.
inline std::vector<Eigen::Index> factor_offsets(const SubsystemShape& shape, const FactorSet& set) {
  const auto n = shape.factors();
  std::vector<std::size_t> stride(n + 1, 1);
  for (std::size_t k = n; k >= 1; --k) stride[k - 1] = (k == n) ? 1 : stride[k] * shape.dim(k + 1);
  std::vector<Eigen::Index> offsets{0};
  for (auto k : set) {
    std::vector<Eigen::Index> next;
    next.reserve(offsets.size() * shape.dim(k));
    for (auto o : offsets)
      for (std::size_t digit = 0; digit < shape.dim(k); ++digit)
        next.push_back(o + static_cast<Eigen::Index>(digit * stride[k - 1]));
    offsets = std::move(next);
  }
  return offsets;
}

inline void check_shape(const SubsystemShape& shape, Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols || static_cast<std::size_t>(rows) != shape.total())
    throw DimensionError("matrix of size " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " does not match subsystem shape of total dimension " +
                         std::to_string(shape.total()));
}

}  // namespace detail

/// Density operator: PSD with unit trace.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(HermitianMatrix m, double tol = Tolerances{}.psd);
  explicit DensityMatrix(const ComplexMatrix& m, double tol = Tolerances{}.psd)
      : DensityMatrix(HermitianMatrix(m), tol) {}

  static DensityMatrix pure(const ComplexVector& psi) {
    const double n = psi.norm();
    if (n == 0.0) throw ValidationError("DensityMatrix: zero state vector");
    return DensityMatrix(HermitianMatrix::projector(psi / n));
  }

  static DensityMatrix maximally_mixed(std::size_t d) {
    return DensityMatrix(HermitianMatrix::identity(d) * (1.0 / static_cast<double>(d)));
  }

  std::size_t dim() const { return m_.dim(); }
  const HermitianMatrix& hermitian() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }

 private:
  HermitianMatrix m_;
};

/// Effect operator 0 ⪯ M ⪯ 1.
class Effect {
 public:
  Effect() = default;
  explicit Effect(HermitianMatrix m, double tol = Tolerances{}.psd);
  explicit Effect(const ComplexMatrix& m, double tol = Tolerances{}.psd)
      : Effect(HermitianMatrix(m), tol) {}

  std::size_t dim() const { return m_.dim(); }
  const HermitianMatrix& hermitian() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }
  Effect complement() const { return Effect(HermitianMatrix::identity(dim()) - m_); }

 private:
  HermitianMatrix m_;
};

// ---------------------------------------------------------------------------
// Products, traces, reshuffles.

/// kron(a, b)[(i*rb + k), (j*cb + l)] = a[i, j] * b[k, l].
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix::symmetrized(kron(a.matrix(), b.matrix()));
}

inline ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

/// Traces out the listed factors; the result lives on the remaining factors
/// in their original order.
inline ComplexMatrix partial_trace(const ComplexMatrix& a, const SubsystemShape& shape,
                                   const FactorSet& traced) {
  detail::check_shape(shape, a.rows(), a.cols());
  shape.check_factor_set(traced);
  const FactorSet kept = shape.complement(traced);
  const auto keep_off = detail::factor_offsets(shape, kept);
  const auto trace_off = detail::factor_offsets(shape, traced);
  const auto dk = static_cast<Eigen::Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r)
    for (Eigen::Index c = 0; c < dk; ++c) {
      Complex s{0.0, 0.0};
      for (auto t : trace_off) s += a(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = s;
    }
  return out;
}

inline HermitianMatrix partial_trace(const HermitianMatrix& a, const SubsystemShape& shape,
                                     const FactorSet& traced) {
  return HermitianMatrix::symmetrized(partial_trace(a.matrix(), shape, traced));
}

/// Marginal on the kept factors (complement of partial_trace's argument).
inline HermitianMatrix marginal(const HermitianMatrix& a, const SubsystemShape& shape,
                                const FactorSet& kept) {
  shape.check_factor_set(kept);
  return partial_trace(a, shape, shape.complement(kept));
}

/// Adjoint of taking the marginal on `kept`: places b on the kept factors
/// and the identity on all others, so Tr(a * lift(b)) = Tr(marginal(a) * b).
/// `kept` must be ascending.
inline ComplexMatrix lift(const ComplexMatrix& b, const SubsystemShape& shape, const FactorSet& kept) {
  shape.check_factor_set(kept);
  if (!std::is_sorted(kept.begin(), kept.end()))
    throw DimensionError("lift: kept factors must be ascending");
  if (b.rows() != b.cols() || static_cast<std::size_t>(b.rows()) != shape.dim_of(kept))
    throw DimensionError("lift: operator dimension does not match kept factors");
  const auto keep_off = detail::factor_offsets(shape, kept);
  const auto other_off = detail::factor_offsets(shape, shape.complement(kept));
  const auto n = static_cast<Eigen::Index>(shape.total());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (std::size_t r = 0; r < keep_off.size(); ++r)
    for (std::size_t c = 0; c < keep_off.size(); ++c) {
      const Complex v = b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (v == Complex{0.0, 0.0}) continue;
      for (auto t : other_off) out(keep_off[r] + t, keep_off[c] + t) = v;
    }
  return out;
}

/// Reorders tensor factors: factor k of the result is factor order[k-1] of
/// the input. `order` is a permutation of 1..n.
inline ComplexMatrix permute_factors(const ComplexMatrix& a, const SubsystemShape& shape,
                                     const FactorSet& order) {
  detail::check_shape(shape, a.rows(), a.cols());
  if (order.size() != shape.factors()) throw DimensionError("permute_factors: bad permutation");
  shape.check_factor_set(order);
  // Enumerating the input factors in the new order yields, for each output
  // index, the matching input index.
  const auto src = detail::factor_offsets(shape, order);
  const auto n = static_cast<Eigen::Index>(src.size());
  ComplexMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = a(src[r], src[c]);
  return out;
}

inline SubsystemShape permute_shape(const SubsystemShape& shape, const FactorSet& order) {
  std::vector<std::size_t> dims;
  for (auto k : order) dims.push_back(shape.dim(k));
  return SubsystemShape(dims);
}

// ---------------------------------------------------------------------------
// Spectral tools.

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // columns orthonormal
};

inline EigenDecomposition eigh(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double min_eigenvalue(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: eigensolver did not converge");
  return solver.eigenvalues()(0);
}

inline double max_eigenvalue(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: eigensolver did not converge");
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

inline double min_eigenvalue(const RealMatrix& a) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: eigensolver did not converge");
  return solver.eigenvalues()(0);
}

inline bool is_psd(const HermitianMatrix& a, double tol) { return min_eigenvalue(a) >= -tol; }

/// Re Tr(a b) for Hermitian arguments.
inline double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.matrix().cwiseProduct(b.matrix().transpose())).sum().real();
}

inline bool is_unitary(const ComplexMatrix& u, double tol = Tolerances{}.psd) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  return max_abs_entry(u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

/// Orthonormal basis of the d×d Hermitian matrices under Tr(AB): I/√d, then
/// (E_jk + E_kj)/√2 and (-i E_jk + i E_kj)/√2 for j < k, then the d-1
/// traceless diagonal generalized Gell-Mann matrices. For d = 2 this is the
/// normalized Pauli basis {I, σx, σy, σz}/√2.
inline std::vector<HermitianMatrix> hermitian_basis(std::size_t d) {
  if (d == 0) throw DimensionError("hermitian_basis: dimension must be positive");
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<HermitianMatrix> basis;
  basis.reserve(d * d);
  basis.push_back(HermitianMatrix::identity(d) * (1.0 / std::sqrt(static_cast<double>(d))));
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(n, n);
      m(j, k) = m(k, j) = r;
      basis.push_back(HermitianMatrix::symmetrized(m));
    }
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(n, n);
      m(j, k) = Complex(0.0, -r);
      m(k, j) = Complex(0.0, r);
      basis.push_back(HermitianMatrix::symmetrized(m));
    }
  for (Eigen::Index l = 1; l < n; ++l) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) m(j, j) = norm;
    m(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(HermitianMatrix::symmetrized(m));
  }
  return basis;
}

/// Real symmetric embedding [[Re A, -Im A], [Im A, Re A]].
inline RealMatrix realify(const HermitianMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a.matrix().real();
  out.bottomRightCorner(n, n) = a.matrix().real();
  out.topRightCorner(n, n) = -a.matrix().imag();
  out.bottomLeftCorner(n, n) = a.matrix().imag();
  return out;
}

/// Inverse of realify on its range, extended to all symmetric matrices by
/// averaging the two copies. PSD inputs give PSD outputs, and
/// Tr(A * derealify(Y)) = Tr(realify(A) Y) / 2.
inline HermitianMatrix derealify(const RealMatrix& y) {
  if (y.rows() != y.cols() || y.rows() % 2 != 0)
    throw DimensionError("derealify: expected an even square matrix");
  const auto n = y.rows() / 2;
  RealMatrix re = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  RealMatrix im = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  ComplexMatrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return HermitianMatrix::symmetrized(out);
}

// ---------------------------------------------------------------------------

inline DensityMatrix::DensityMatrix(HermitianMatrix m, double tol) : m_(std::move(m)) {
  const double tr = m_.trace();
  if (std::abs(tr - 1.0) > tol)
    throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
  const double lo = min_eigenvalue(m_);
  if (lo < -tol) throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(lo));
}

inline Effect::Effect(HermitianMatrix m, double tol) : m_(std::move(m)) {
  const auto ev = eigh(m_).values;
  if (ev(0) < -tol || ev(ev.size() - 1) > 1.0 + tol)
    throw ValidationError("Effect: eigenvalues outside [0, 1]");
}

}  // namespace chancompat
