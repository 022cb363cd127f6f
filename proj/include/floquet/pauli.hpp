// Copyright 2026 The floquet-ising Authors
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

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "floquet/core.hpp"

namespace floquet {

enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  throw std::logic_error("unreachable");
}

/// Tensor product of single-site Pauli letters, stored as an X mask (sites
/// whose bit is flipped) and a Z mask (sites that pick up a sign). Y sets both.
class PauliString {
 public:
  PauliString() = default;

  /// All-identity string on `num_sites` sites.
  explicit PauliString(int num_sites) : num_sites_(num_sites) {
    if (num_sites < 1 || num_sites > kMaxSites) {
      throw DimensionError("PauliString: L=" + std::to_string(num_sites) + " out of range");
    }
  }

  /// Letter k of `letters` acts on site k, e.g. "XIZ" is X_0 Z_2.
  static PauliString parse(std::string_view letters) {
    PauliString ps(static_cast<int>(letters.size()));
    for (std::size_t k = 0; k < letters.size(); ++k) {
      switch (letters[k]) {
        case 'I': break;
        case 'X': ps.set(static_cast<int>(k), Pauli::X); break;
        case 'Y': ps.set(static_cast<int>(k), Pauli::Y); break;
        case 'Z': ps.set(static_cast<int>(k), Pauli::Z); break;
        default:
          throw std::invalid_argument(std::string("PauliString: bad letter '") + letters[k] + "'");
      }
    }
    return ps;
  }

  static PauliString single(int num_sites, int site, Pauli p) {
    PauliString ps(num_sites);
    ps.set(site, p);
    return ps;
  }

  static PauliString pair(int num_sites, int site_a, Pauli pa, int site_b, Pauli pb) {
    if (site_a == site_b) throw std::invalid_argument("PauliString::pair: sites coincide");
    PauliString ps(num_sites);
    ps.set(site_a, pa);
    ps.set(site_b, pb);
    return ps;
  }

  void set(int site, Pauli p) {
    if (site < 0 || site >= num_sites_) throw DimensionError("PauliString::set: site out of range");
    const std::uint64_t bit = std::uint64_t{1} << site;
    const auto code = static_cast<std::uint8_t>(p);
    x_mask_ = (code & 1u) ? (x_mask_ | bit) : (x_mask_ & ~bit);
    z_mask_ = (code & 2u) ? (z_mask_ | bit) : (z_mask_ & ~bit);
  }

  Pauli at(int site) const {
    if (site < 0 || site >= num_sites_) throw DimensionError("PauliString::at: site out of range");
    const unsigned x = (x_mask_ >> site) & 1u;
    const unsigned z = (z_mask_ >> site) & 1u;
    return static_cast<Pauli>(x | (z << 1));
  }

  int num_sites() const { return num_sites_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }
  int y_count() const { return std::popcount(x_mask_ & z_mask_); }
  bool is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }

  std::string str() const {
    std::string s(static_cast<std::size_t>(num_sites_), 'I');
    for (int k = 0; k < num_sites_; ++k) s[static_cast<std::size_t>(k)] = to_char(at(k));
    return s;
  }

  /// i^{#Y}; the string maps |b> to phase() * (-1)^{popcount(b & z_mask)} |b ^ x_mask>.
  Complex phase() const {
    switch (y_count() & 3) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  int num_sites_ = 0;
  std::uint64_t x_mask_ = 0;
  std::uint64_t z_mask_ = 0;
};

/// Real-weighted sum of Pauli strings. Repeated strings are merged on insertion
/// and any term whose weight is exactly zero is dropped.
class OperatorSum {
 public:
  struct Term {
    double coefficient;
    PauliString string;
  };

  explicit OperatorSum(int num_sites) : num_sites_(num_sites) {
    if (num_sites < 1 || num_sites > kMaxSites) {
      throw DimensionError("OperatorSum: L=" + std::to_string(num_sites) + " out of range");
    }
  }

  void add(double coefficient, const PauliString& ps) {
    if (ps.num_sites() != num_sites_) {
      throw DimensionError("OperatorSum::add: string has L=" + std::to_string(ps.num_sites()) +
                           ", sum has L=" + std::to_string(num_sites_));
    }
    if (!std::isfinite(coefficient)) throw std::invalid_argument("OperatorSum::add: non-finite weight");
    const auto key = std::make_pair(ps.x_mask(), ps.z_mask());
    auto it = index_.find(key);
    if (it == index_.end()) {
      if (coefficient == 0.0) return;
      index_.emplace(key, terms_.size());
      terms_.push_back({coefficient, ps});
      return;
    }
    terms_[it->second].coefficient += coefficient;
    if (terms_[it->second].coefficient == 0.0) erase_at(it->second);
  }

  /// Complex weights are only accepted when their imaginary part is exactly zero.
  void add(Complex coefficient, const PauliString& ps) {
    if (coefficient.imag() != 0.0) {
      throw std::invalid_argument("OperatorSum::add: complex weight " + std::to_string(coefficient.imag()) +
                                  "i rejected; Hamiltonians here are real Pauli sums");
    }
    add(coefficient.real(), ps);
  }

  void add(double coefficient, std::string_view letters) { add(coefficient, PauliString::parse(letters)); }

  OperatorSum& operator+=(const OperatorSum& other) {
    if (other.num_sites_ != num_sites_) throw DimensionError("OperatorSum::+=: length mismatch");
    for (const auto& t : other.terms_) add(t.coefficient, t.string);
    return *this;
  }

  OperatorSum scaled(double factor) const {
    OperatorSum out(num_sites_);
    for (const auto& t : terms_) out.add(factor * t.coefficient, t.string);
    return out;
  }

  /// Weight of `ps`, zero when absent.
  double coefficient(const PauliString& ps) const {
    auto it = index_.find(std::make_pair(ps.x_mask(), ps.z_mask()));
    return it == index_.end() ? 0.0 : terms_[it->second].coefficient;
  }
  double coefficient(std::string_view letters) const { return coefficient(PauliString::parse(letters)); }

  int num_sites() const { return num_sites_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

 private:
  void erase_at(std::size_t pos) {
    terms_.erase(terms_.begin() + static_cast<std::ptrdiff_t>(pos));
    index_.clear();
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      index_.emplace(std::make_pair(terms_[k].string.x_mask(), terms_[k].string.z_mask()), k);
    }
  }

  int num_sites_;
  std::vector<Term> terms_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> index_;
};

/// Largest coefficient-wise difference between two sums, over the union of their strings.
inline double max_coefficient_difference(const OperatorSum& a, const OperatorSum& b) {
  if (a.num_sites() != b.num_sites()) throw DimensionError("max_coefficient_difference: length mismatch");
  double worst = 0.0;
  for (const auto& t : a.terms()) worst = std::max(worst, std::abs(t.coefficient - b.coefficient(t.string)));
  for (const auto& t : b.terms()) worst = std::max(worst, std::abs(t.coefficient - a.coefficient(t.string)));
  return worst;
}

namespace detail {

inline double parity_sign(std::uint64_t bits) { return (std::popcount(bits) & 1) ? -1.0 : 1.0; }

inline void require_state_length(int num_sites, const StateVector& v, const char* what) {
  if (v.size() != static_cast<Eigen::Index>(hilbert_dim(num_sites))) {
    throw DimensionError(std::string(what) + ": state has " + std::to_string(v.size()) +
                         " amplitudes, operator acts on L=" + std::to_string(num_sites));
  }
}

}  // namespace detail

inline StateVector apply_pauli_string(const PauliString& ps, const StateVector& v) {
  detail::require_state_length(ps.num_sites(), v, "apply_pauli_string");
  const std::uint64_t x = ps.x_mask();
  const std::uint64_t z = ps.z_mask();
  const Complex phase = ps.phase();
  StateVector out(v.size());
  const auto dim = static_cast<std::uint64_t>(v.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    out(static_cast<Eigen::Index>(b ^ x)) = phase * detail::parity_sign(b & z) * v(static_cast<Eigen::Index>(b));
  }
  return out;
}

/// OperatorSum compiled for repeated matrix-free application: the diagonal
/// part is tabulated once and off-diagonal terms are grouped by flip mask.
class MatrixFreeOperator {
 public:
  explicit MatrixFreeOperator(const OperatorSum& op) : num_sites_(op.num_sites()) {
    const auto dim = hilbert_dim(num_sites_);
    std::map<std::uint64_t, std::size_t> group_of;
    std::vector<std::pair<double, std::uint64_t>> diagonal_terms;
    for (const auto& t : op.terms()) {
      const std::uint64_t x = t.string.x_mask();
      if (x == 0) {
        diagonal_terms.emplace_back(t.coefficient, t.string.z_mask());
        continue;
      }
      auto [it, inserted] = group_of.emplace(x, groups_.size());
      if (inserted) groups_.push_back({x, {}});
      groups_[it->second].terms.push_back({t.coefficient * t.string.phase(), t.string.z_mask()});
    }
    if (!diagonal_terms.empty()) {
      diagonal_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
      for (std::uint64_t b = 0; b < dim; ++b) {
        double d = 0.0;
        for (const auto& [c, z] : diagonal_terms) d += c * detail::parity_sign(b & z);
        diagonal_(static_cast<Eigen::Index>(b)) = d;
      }
    }
  }

  int num_sites() const { return num_sites_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(hilbert_dim(num_sites_)); }

  /// out = H * in. `out` must not alias `in`.
  void apply(const StateVector& in, StateVector& out) const {
    detail::require_state_length(num_sites_, in, "MatrixFreeOperator::apply");
    const auto dim = static_cast<std::uint64_t>(in.size());
    if (diagonal_.size() > 0) {
      out = diagonal_.cast<Complex>().cwiseProduct(in);
    } else {
      out.setZero(in.size());
    }
    for (const auto& g : groups_) {
      if (g.terms.size() == 1 && g.terms.front().z_mask == 0) {
        const Complex c = g.terms.front().weight;
        for (std::uint64_t b = 0; b < dim; ++b) {
          out(static_cast<Eigen::Index>(b ^ g.x_mask)) += c * in(static_cast<Eigen::Index>(b));
        }
        continue;
      }
      for (std::uint64_t b = 0; b < dim; ++b) {
        Complex c{0.0, 0.0};
        for (const auto& t : g.terms) c += t.weight * detail::parity_sign(b & t.z_mask);
        out(static_cast<Eigen::Index>(b ^ g.x_mask)) += c * in(static_cast<Eigen::Index>(b));
      }
    }
  }

  StateVector operator*(const StateVector& in) const {
    StateVector out;
    apply(in, out);
    return out;
  }

 private:
  struct Weighted {
    Complex weight;
    std::uint64_t z_mask;
  };
  struct FlipGroup {
    std::uint64_t x_mask;
    std::vector<Weighted> terms;
  };

  int num_sites_;
  Eigen::VectorXd diagonal_;
  std::vector<FlipGroup> groups_;
};

/// Sum_k c_k P_k v, generally unnormalized.
inline StateVector apply_operator_sum(const OperatorSum& op, const StateVector& v) {
  detail::require_state_length(op.num_sites(), v, "apply_operator_sum");
  return MatrixFreeOperator(op) * v;
}

/// Column j is the operator applied to basis state j.
inline DenseOperator materialize(const OperatorSum& op, int dense_cap = kDefaultDenseCap) {
  require_dense_cap(op.num_sites(), dense_cap, "materialize");
  const auto dim = hilbert_dim(op.num_sites());
  DenseOperator m = DenseOperator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : op.terms()) {
    const std::uint64_t x = t.string.x_mask();
    const std::uint64_t z = t.string.z_mask();
    const Complex w = t.coefficient * t.string.phase();
    for (std::uint64_t b = 0; b < dim; ++b) {
      m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += w * detail::parity_sign(b & z);
    }
  }
  return m;
}

/// <v|op|v>. An imaginary part above `imag_tol` means the operator or state is
/// malformed and is reported rather than silently dropped.
inline double expectation(const OperatorSum& op, const StateVector& v, double imag_tol = 1e-10) {
  const Complex value = v.dot(apply_operator_sum(op, v));
  if (std::abs(value.imag()) > imag_tol) {
    throw std::domain_error("expectation: imaginary part " + std::to_string(value.imag()) +
                            " exceeds tolerance");
  }
  return value.real();
}

}  // namespace floquet
