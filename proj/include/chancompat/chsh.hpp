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

// Channel version of the CHSH functional
//
//   X = E(Φ11, Φ12) + E(Φ11, Φ22) + E(Φ21, Φ12) - E(Φ21, Φ22),
//   E(Φi1, Φj2) = Tr((Φi1 ⊗ Φj2)(ρ) A),
//
// with Φij channel i of wing j and A the correlation observable
// (|00⟩⟨00| - |01⟩⟨01| - |10⟩⟨10| + |11⟩⟨11| by default). Bell local states
// satisfy |X| ≤ 2; every state and channel choice satisfies |X| ≤ 2√2.

#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <vector>

#include "chancompat/channel.hpp"
#include "chancompat/format.hpp"
#include "chancompat/linalg.hpp"

namespace chancompat {

inline const double kClassicalBound = 2.0;
inline const double kTsirelsonBound = 2.0 * std::sqrt(2.0);

/// Observable A on the joint output, -1 ⪯ A ⪯ 1.
class CorrelationObservable {
 public:
  explicit CorrelationObservable(HermitianMatrix a, double tol = Tolerances{}.psd) : a_(std::move(a)) {
    const auto ev = eigh(a_).values;
    if (ev(0) < -1.0 - tol || ev(ev.size() - 1) > 1.0 + tol)
      throw ValidationError("CorrelationObservable: spectrum outside [-1, 1]");
  }

  /// Computational-basis parity observable on two qubits.
  static CorrelationObservable standard() {
    ComplexMatrix a = ComplexMatrix::Zero(4, 4);
    a.diagonal() << 1.0, -1.0, -1.0, 1.0;
    return CorrelationObservable(HermitianMatrix(a));
  }

  /// A = M⊗N - (1-M)⊗N - M⊗(1-N) + (1-M)⊗(1-N).
  static CorrelationObservable from_effects(const Effect& m, const Effect& n) {
    const ComplexMatrix mm = m.matrix(), mc = m.complement().matrix();
    const ComplexMatrix nn = n.matrix(), nc = n.complement().matrix();
    return CorrelationObservable(
        HermitianMatrix::symmetrized(kron(mm, nn) - kron(mc, nn) - kron(mm, nc) + kron(mc, nc)));
  }

  const HermitianMatrix& hermitian() const { return a_; }
  std::size_t dim() const { return a_.dim(); }

 private:
  HermitianMatrix a_;
};

struct CorrelationReport {
  /// e[i][j] = E(Φ_{i+1}^1, Φ_{j+1}^2).
  std::array<std::array<double, 2>, 2> e{};
  double x = 0.0;
  bool exceeds_classical = false;
  bool within_tsirelson = true;
};

/// Tr((ci ⊗ cj)(ρ) A).
inline double correlation(const Channel& ci, const Channel& cj, const DensityMatrix& rho,
                          const CorrelationObservable& obs = CorrelationObservable::standard()) {
  if (rho.dim() != ci.in_dim() * cj.in_dim())
    throw DimensionError("correlation: state dimension does not match the channel inputs");
  if (obs.dim() != ci.out_dim() * cj.out_dim())
    throw DimensionError("correlation: observable dimension does not match the channel outputs");
  return trace_inner(apply(tensor(ci, cj), rho.hermitian()), obs.hermitian());
}

inline CorrelationReport chsh_value(const Channel& c11, const Channel& c21, const Channel& c12,
                                    const Channel& c22, const DensityMatrix& rho,
                                    const CorrelationObservable& obs = CorrelationObservable::standard(),
                                    double tol = Tolerances{}.psd) {
  CorrelationReport r;
  r.e[0][0] = correlation(c11, c12, rho, obs);
  r.e[0][1] = correlation(c11, c22, rho, obs);
  r.e[1][0] = correlation(c21, c12, rho, obs);
  r.e[1][1] = correlation(c21, c22, rho, obs);
  r.x = r.e[0][0] + r.e[0][1] + r.e[1][0] - r.e[1][1];
  r.exceeds_classical = r.x > kClassicalBound + tol || r.x < -kClassicalBound - tol;
  r.within_tsirelson = std::abs(r.x) <= kTsirelsonBound + tol;
  return r;
}

/// Correlation of Φ_U ⊗ Φ_V on |ψ⁺⟩⟨ψ⁺| from W = V Uᵀ:
/// ½(|W00|² + |W11|² - |W01|² - |W10|²).
inline double unitary_me_correlation(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != 2 || v.rows() != 2 || !is_unitary(u) || !is_unitary(v))
    throw ValidationError("unitary_me_correlation: expected two 2x2 unitaries");
  const ComplexMatrix w = v * u.transpose();
  return 0.5 * (std::norm(w(0, 0)) + std::norm(w(1, 1)) - std::norm(w(0, 1)) - std::norm(w(1, 0)));
}

struct ThetaFamily {
  ComplexMatrix u1, u2, v1, v2;
};

/// U1 = H, U2 = 1, V1 = (√θ 1; 1 -√θ)/√(1+θ), V2 = (1 √θ; √θ -1)/√(1+θ).
inline ThetaFamily theta_family(double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw ValidationError("theta_family: theta must be a finite non-negative number");
  const double r = std::sqrt(theta);
  const double s = 1.0 / std::sqrt(1.0 + theta);
  ThetaFamily f;
  f.u1 = hadamard();
  f.u2 = ComplexMatrix::Identity(2, 2);
  f.v1.resize(2, 2);
  f.v1 << r, 1.0, 1.0, -r;
  f.v1 *= s;
  f.v2.resize(2, 2);
  f.v2 << 1.0, r, r, -1.0;
  f.v2 *= s;
  return f;
}

inline CorrelationReport theta_family_chsh(double theta) {
  const ThetaFamily f = theta_family(theta);
  return chsh_value(unitary_channel(f.u1), unitary_channel(f.u2), unitary_channel(f.v1),
                    unitary_channel(f.v2), max_entangled(2));
}

struct ScanRow {
  double theta = 0.0;
  double x = 0.0;
};

/// X on the θ-family at |ψ⁺⟩⟨ψ⁺| over a uniform grid of `steps` points.
inline std::vector<ScanRow> chsh_scan(double theta_min, double theta_max, std::size_t steps) {
  if (!(theta_min >= 0.0) || !(theta_max > theta_min) || !std::isfinite(theta_max))
    throw ValidationError("chsh_scan: need 0 <= theta_min < theta_max");
  if (steps < 2) throw ValidationError("chsh_scan: need at least 2 steps");
  std::vector<ScanRow> rows(steps);
  const double h = (theta_max - theta_min) / static_cast<double>(steps - 1);
  for (std::size_t k = 0; k < steps; ++k) {
    const double theta = k + 1 == steps ? theta_max : theta_min + h * static_cast<double>(k);
    rows[k] = {theta, theta_family_chsh(theta).x};
  }
  return rows;
}

/// CSV with header `theta,X`, 12 significant digits.
inline void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "theta,X\n";
  for (const auto& r : rows) out << format_double(r.theta) << ',' << format_double(r.x) << '\n';
}

}  // namespace chancompat
