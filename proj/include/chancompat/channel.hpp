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

// Quantum channels in the Choi representation.
//
// C(Φ) = (Φ ⊗ id)(Σ_ij |ii⟩⟨jj|), so the output factors come first and the
// input copy second: C(Φ) = Σ_ij Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|. Trace preservation reads
// Tr_out C(Φ) = 1. For a tensor product of channels the factor order is
// (outputs..., input copies...).

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "chancompat/linalg.hpp"

namespace chancompat {

inline SubsystemShape concat(const SubsystemShape& a, const SubsystemShape& b) {
  std::vector<std::size_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return SubsystemShape(dims);
}

/// Completely positive trace-preserving map stored as its Choi matrix.
class Channel {
 public:
  Channel() = default;

  /// Validates complete positivity and trace preservation.
  Channel(HermitianMatrix choi, SubsystemShape in_shape, SubsystemShape out_shape,
          const Tolerances& tol = {})
      : choi_(std::move(choi)), in_(std::move(in_shape)), out_(std::move(out_shape)) {
    const std::size_t n = in_.total() * out_.total();
    if (choi_.dim() != n)
      throw DimensionError("Channel: Choi matrix dimension " + std::to_string(choi_.dim()) +
                           " != out_dim * in_dim = " + std::to_string(n));
    const double lo = min_eigenvalue(choi_);
    if (lo < -tol.psd * static_cast<double>(n))
      throw ValidationError("Channel: Choi matrix not positive semidefinite (min eigenvalue " +
                            std::to_string(lo) + ")");
    const ComplexMatrix reduced = partial_trace(choi_.matrix(), choi_shape(), out_factors());
    const auto din = static_cast<Eigen::Index>(in_.total());
    const double dev = max_abs_entry(reduced - ComplexMatrix::Identity(din, din));
    if (dev > tol.psd)
      throw ValidationError("Channel: not trace preserving (|Tr_out C - 1|_max = " +
                            std::to_string(dev) + ")");
  }

  Channel(HermitianMatrix choi, std::size_t in_dim, std::size_t out_dim, const Tolerances& tol = {})
      : Channel(std::move(choi), SubsystemShape{in_dim}, SubsystemShape{out_dim}, tol) {}

  std::size_t in_dim() const { return in_.total(); }
  std::size_t out_dim() const { return out_.total(); }
  const SubsystemShape& in_shape() const { return in_; }
  const SubsystemShape& out_shape() const { return out_; }
  const HermitianMatrix& choi() const { return choi_; }

  /// Shape of the Choi matrix: output factors then input factors.
  SubsystemShape choi_shape() const { return concat(out_, in_); }

  /// 1-based numbers of the output factors within choi_shape().
  FactorSet out_factors() const {
    FactorSet f(out_.factors());
    std::iota(f.begin(), f.end(), std::size_t{1});
    return f;
  }
  FactorSet in_factors() const {
    FactorSet f(in_.factors());
    std::iota(f.begin(), f.end(), out_.factors() + 1);
    return f;
  }

 private:
  HermitianMatrix choi_;
  SubsystemShape in_;
  SubsystemShape out_;
};

/// Two channels with a common input, the object whose compatibility is tested.
struct ChannelPair {
  Channel first;
  Channel second;

  ChannelPair(Channel a, Channel b) : first(std::move(a)), second(std::move(b)) {
    if (first.in_dim() != second.in_dim())
      throw DimensionError("ChannelPair: channels must share the input dimension");
  }
};

/// Choi matrix Σ_K vec(K) vec(K)† where vec(K)[o*in + i] = K(o, i).
inline Channel choi_from_kraus(const std::vector<ComplexMatrix>& kraus, std::size_t in_dim,
                               std::size_t out_dim, const Tolerances& tol = {}) {
  if (kraus.empty()) throw ValidationError("choi_from_kraus: empty Kraus list");
  const auto din = static_cast<Eigen::Index>(in_dim);
  const auto dout = static_cast<Eigen::Index>(out_dim);
  ComplexMatrix completeness = ComplexMatrix::Zero(din, din);
  ComplexMatrix choi = ComplexMatrix::Zero(din * dout, din * dout);
  for (const auto& k : kraus) {
    if (k.rows() != dout || k.cols() != din)
      throw DimensionError("choi_from_kraus: Kraus operator must be out_dim x in_dim");
    completeness += k.adjoint() * k;
    ComplexVector v(din * dout);
    for (Eigen::Index o = 0; o < dout; ++o)
      for (Eigen::Index i = 0; i < din; ++i) v(o * din + i) = k(o, i);
    choi += v * v.adjoint();
  }
  if (max_abs_entry(completeness - ComplexMatrix::Identity(din, din)) > tol.psd)
    throw ValidationError("choi_from_kraus: Kraus operators are not trace preserving");
  return Channel(HermitianMatrix::symmetrized(choi), in_dim, out_dim, tol);
}

inline Channel identity_channel(std::size_t d) {
  return choi_from_kraus({ComplexMatrix::Identity(static_cast<Eigen::Index>(d),
                                                  static_cast<Eigen::Index>(d))},
                         d, d);
}

/// ρ ↦ Uρ U†.
inline Channel unitary_channel(const ComplexMatrix& u) {
  if (!is_unitary(u)) throw ValidationError("unitary_channel: matrix is not unitary");
  return choi_from_kraus({u}, static_cast<std::size_t>(u.cols()), static_cast<std::size_t>(u.rows()));
}

/// ρ ↦ (1 - p) ρ + p Tr(ρ) 1/d. p = 1 is the fully depolarizing channel.
inline Channel depolarizing_channel(std::size_t d, double p = 1.0) {
  if (p < 0.0 || p > 1.0 + 1.0 / static_cast<double>(d * d - 1 == 0 ? 1 : d * d - 1))
    throw ValidationError("depolarizing_channel: parameter outside the CPTP range");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexVector omega = ComplexVector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) omega(i * n + i) = 1.0;
  ComplexMatrix choi = (1.0 - p) * (omega * omega.adjoint()) +
                       (p / static_cast<double>(d)) * ComplexMatrix::Identity(n * n, n * n);
  return Channel(HermitianMatrix::symmetrized(choi), d, d);
}

/// σ ↦ Σ_k Tr(σ M_k) ρ_k for a POVM {M_k} and preparations {ρ_k}.
inline Channel measure_prepare(const std::vector<Effect>& effects,
                               const std::vector<DensityMatrix>& preparations,
                               const Tolerances& tol = {}) {
  if (effects.empty() || effects.size() != preparations.size())
    throw ValidationError("measure_prepare: need one preparation per effect");
  const std::size_t din = effects.front().dim();
  const std::size_t dout = preparations.front().dim();
  const auto n = static_cast<Eigen::Index>(din);
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  ComplexMatrix choi = ComplexMatrix::Zero(static_cast<Eigen::Index>(din * dout),
                                           static_cast<Eigen::Index>(din * dout));
  for (std::size_t k = 0; k < effects.size(); ++k) {
    if (effects[k].dim() != din || preparations[k].dim() != dout)
      throw DimensionError("measure_prepare: inconsistent effect or preparation dimension");
    total += effects[k].matrix();
    // Σ_ij Tr(|i⟩⟨j| M)|i⟩⟨j| = Mᵀ
    choi += kron(preparations[k].matrix(), effects[k].matrix().transpose());
  }
  if (max_abs_entry(total - ComplexMatrix::Identity(n, n)) > tol.psd)
    throw ValidationError("measure_prepare: effects do not sum to the identity");
  return Channel(HermitianMatrix::symmetrized(choi), din, dout, tol);
}

/// Two-outcome form σ ↦ Tr(σM)|0⟩⟨0| + Tr(σ(1 - M))|1⟩⟨1|.
inline Channel measure_prepare(const Effect& m) {
  const DensityMatrix zero = DensityMatrix::pure(ComplexVector::Unit(2, 0));
  const DensityMatrix one = DensityMatrix::pure(ComplexVector::Unit(2, 1));
  return measure_prepare({m, m.complement()}, {zero, one});
}

/// Φ applied to an arbitrary operator: Tr_in(C (1 ⊗ xᵀ)).
inline ComplexMatrix apply_operator(const Channel& c, const ComplexMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != c.in_dim() || x.rows() != x.cols())
    throw DimensionError("apply: input dimension " + std::to_string(x.rows()) +
                         " does not match channel input dimension " + std::to_string(c.in_dim()));
  const auto dout = static_cast<Eigen::Index>(c.out_dim());
  const ComplexMatrix lifted = kron(ComplexMatrix::Identity(dout, dout), x.transpose());
  return partial_trace(ComplexMatrix(c.choi().matrix() * lifted), c.choi_shape(), c.in_factors());
}

inline HermitianMatrix apply(const Channel& c, const HermitianMatrix& x) {
  return HermitianMatrix::symmetrized(apply_operator(c, x.matrix()));
}

inline DensityMatrix apply(const Channel& c, const DensityMatrix& rho) {
  return DensityMatrix(apply(c, rho.hermitian()));
}

/// Channel c1 ⊗ c2; Choi factors ordered (outputs of c1, outputs of c2,
/// inputs of c1, inputs of c2).
inline Channel tensor(const Channel& c1, const Channel& c2) {
  const SubsystemShape product = concat(c1.choi_shape(), c2.choi_shape());
  const std::size_t o1 = c1.out_shape().factors(), i1 = c1.in_shape().factors();
  const std::size_t o2 = c2.out_shape().factors(), i2 = c2.in_shape().factors();
  FactorSet order;
  for (std::size_t k = 1; k <= o1; ++k) order.push_back(k);
  for (std::size_t k = 1; k <= o2; ++k) order.push_back(o1 + i1 + k);
  for (std::size_t k = 1; k <= i1; ++k) order.push_back(o1 + k);
  for (std::size_t k = 1; k <= i2; ++k) order.push_back(o1 + i1 + o2 + k);
  ComplexMatrix choi = permute_factors(kron(c1.choi().matrix(), c2.choi().matrix()), product, order);
  return Channel(HermitianMatrix::symmetrized(choi), concat(c1.in_shape(), c2.in_shape()),
                 concat(c1.out_shape(), c2.out_shape()));
}

/// Heisenberg-picture map: Tr(Φ(σ) E) = Tr(σ Φ*(E)).
inline HermitianMatrix adjoint(const Channel& c, const HermitianMatrix& e) {
  if (e.dim() != c.out_dim())
    throw DimensionError("adjoint: operator dimension does not match channel output");
  const auto din = static_cast<Eigen::Index>(c.in_dim());
  const ComplexMatrix lifted = kron(e.matrix(), ComplexMatrix::Identity(din, din));
  const ComplexMatrix reduced =
      partial_trace(ComplexMatrix(c.choi().matrix() * lifted), c.choi_shape(), c.out_factors());
  return HermitianMatrix::symmetrized(reduced.transpose());
}

inline Effect adjoint_effect(const Channel& c, const Effect& e) {
  return Effect(adjoint(c, e.hermitian()));
}

/// |ψ⁺⟩⟨ψ⁺| with |ψ⁺⟩ = d^{-1/2} Σ_i |ii⟩.
inline DensityMatrix max_entangled(std::size_t d) {
  if (d < 2) throw DimensionError("max_entangled: dimension must be at least 2");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexVector psi = ComplexVector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) psi(i * n + i) = 1.0;
  return DensityMatrix::pure(psi);
}

/// |W⟩ = (|001⟩ + |010⟩ + |100⟩)/√3 as a vector on three qubits.
inline ComplexVector w_vector() {
  ComplexVector w = ComplexVector::Zero(8);
  w(1) = w(2) = w(4) = 1.0 / std::sqrt(3.0);
  return w;
}

inline DensityMatrix w_state() { return DensityMatrix::pure(w_vector()); }

/// Two-qubit marginal Tr_3 |W⟩⟨W| (equal to Tr_2 |W⟩⟨W|).
inline DensityMatrix w_marginal() {
  return DensityMatrix(partial_trace(w_state().hermitian(), SubsystemShape{2, 2, 2}, {3}));
}

/// The 2×2 Hadamard matrix.
inline ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

}  // namespace chancompat
