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

// JSON encoding of channels and states.
//
// Channel: {"kind": ..., "in_dim": n, "out_dim": m, "data": ...}
//   unitary          data = U
//   kraus            data = [K_1, K_2, ...]
//   choi             data = C on (out, in); optional "in_shape"/"out_shape"
//   measure_prepare  data = M (qubit effect, |0⟩/|1⟩ preparations)
//                    or {"effects": [...], "preparations": [...]}
//   identity         no data
//   depolarizing     data = p (default 1)
// State: {"kind": "density"|"pure", "dims": [...], "data": ρ or ψ}
//
// Matrices are arrays of rows. A complex entry is [re, im]; a bare number
// is real.

#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chancompat/channel.hpp"
#include "chancompat/format.hpp"
#include "chancompat/linalg.hpp"

namespace chancompat {

using Json = nlohmann::json;

namespace detail {

inline const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw ValidationError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline std::size_t read_dim(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() <= 0)
    throw ValidationError(where + ": dimension must be a positive integer");
  return j.get<std::size_t>();
}

inline Json real_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_significant(v);
}

}  // namespace detail

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ValidationError("complex entry must be a number or [re, im]");
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ValidationError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError("matrix rows differ in length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  if (!all_finite(m)) throw ValidationError("matrix has non-finite entries");
  return m;
}

inline ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("vector must be a non-empty array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

/// Entries as [re, im], 12 significant digits.
inline Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({detail::real_json(m(r, c).real()), detail::real_json(m(r, c).imag())}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json real_to_json(double v) { return detail::real_json(v); }

inline Json shape_to_json(const SubsystemShape& s) { return Json(s.dims()); }

inline SubsystemShape shape_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ValidationError(where + ": shape must be a non-empty array");
  std::vector<std::size_t> dims;
  for (const auto& d : j) dims.push_back(detail::read_dim(d, where));
  return SubsystemShape(dims);
}

inline Channel channel_from_json(const Json& j, const Tolerances& tol = {}) {
  const std::string where = "channel";
  if (!j.is_object()) throw ValidationError("channel: expected a JSON object");
  const std::string kind = detail::require(j, "kind", where).get<std::string>();
  static constexpr std::array<std::string_view, 6> kinds{"identity", "depolarizing", "unitary",
                                                         "kraus",    "choi",         "measure_prepare"};
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
    throw ValidationError("channel: unknown kind \"" + kind + "\"");
  const std::size_t in = detail::read_dim(detail::require(j, "in_dim", where), where + ".in_dim");
  const std::size_t out = detail::read_dim(detail::require(j, "out_dim", where), where + ".out_dim");
  auto check = [&](const Channel& c) {
    if (c.in_dim() != in || c.out_dim() != out)
      throw DimensionError("channel: data dimensions (" + std::to_string(c.in_dim()) + " -> " +
                           std::to_string(c.out_dim()) + ") disagree with in_dim/out_dim");
    return c;
  };
  if (kind == "identity") {
    if (in != out) throw DimensionError("channel: identity needs in_dim == out_dim");
    return identity_channel(in);
  }
  if (kind == "depolarizing") {
    if (in != out) throw DimensionError("channel: depolarizing needs in_dim == out_dim");
    double p = 1.0;
    if (j.contains("data")) {
      if (!j["data"].is_number()) throw ValidationError("channel: depolarizing data must be a number");
      p = j["data"].get<double>();
    }
    return depolarizing_channel(in, p);
  }
  const Json& data = detail::require(j, "data", where);
  if (kind == "unitary") return check(unitary_channel(matrix_from_json(data)));
  if (kind == "kraus") {
    if (!data.is_array() || data.empty()) throw ValidationError("channel: kraus data must be a list of matrices");
    std::vector<ComplexMatrix> ks;
    for (const auto& k : data) ks.push_back(matrix_from_json(k));
    return check(choi_from_kraus(ks, in, out));
  }
  if (kind == "choi") {
    const SubsystemShape in_shape = j.contains("in_shape") ? shape_from_json(j["in_shape"], where) : SubsystemShape{in};
    const SubsystemShape out_shape =
        j.contains("out_shape") ? shape_from_json(j["out_shape"], where) : SubsystemShape{out};
    return check(Channel(HermitianMatrix(matrix_from_json(data), tol.construction), in_shape, out_shape, tol));
  }
  if (kind == "measure_prepare") {
    if (data.is_object()) {
      std::vector<Effect> effects;
      std::vector<DensityMatrix> preps;
      for (const auto& e : detail::require(data, "effects", where)) effects.emplace_back(matrix_from_json(e), tol.psd);
      for (const auto& p : detail::require(data, "preparations", where))
        preps.emplace_back(matrix_from_json(p), tol.psd);
      return check(measure_prepare(effects, preps));
    }
    return check(measure_prepare(Effect(matrix_from_json(data), tol.psd)));
  }
  throw ValidationError("channel: unknown kind \"" + kind + "\"");
}

/// Always emitted as kind "choi".
inline Json channel_to_json(const Channel& c) {
  Json j;
  j["kind"] = "choi";
  j["in_dim"] = c.in_dim();
  j["out_dim"] = c.out_dim();
  if (c.in_shape().factors() > 1) j["in_shape"] = shape_to_json(c.in_shape());
  if (c.out_shape().factors() > 1) j["out_shape"] = shape_to_json(c.out_shape());
  j["data"] = matrix_to_json(c.choi().matrix());
  return j;
}

struct LoadedState {
  DensityMatrix rho;
  SubsystemShape dims;
};

inline LoadedState state_from_json(const Json& j, const Tolerances& tol = {}) {
  const std::string where = "state";
  if (!j.is_object()) throw ValidationError("state: expected a JSON object");
  const std::string kind = detail::require(j, "kind", where).get<std::string>();
  const Json& data = detail::require(j, "data", where);
  DensityMatrix rho;
  if (kind == "pure") {
    rho = DensityMatrix::pure(vector_from_json(data));
  } else if (kind == "density") {
    rho = DensityMatrix(HermitianMatrix(matrix_from_json(data), tol.construction), tol.psd);
  } else {
    throw ValidationError("state: unknown kind \"" + kind + "\"");
  }
  SubsystemShape dims = j.contains("dims") ? shape_from_json(j["dims"], where) : SubsystemShape{rho.dim()};
  if (dims.total() != rho.dim())
    throw DimensionError("state: dims multiply to " + std::to_string(dims.total()) + " but the state has dimension " +
                         std::to_string(rho.dim()));
  return {std::move(rho), std::move(dims)};
}

inline Json state_to_json(const HermitianMatrix& rho, const SubsystemShape& dims) {
  Json j;
  j["kind"] = "density";
  j["dims"] = shape_to_json(dims);
  j["data"] = matrix_to_json(rho.matrix());
  return j;
}

}  // namespace chancompat
