#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ckf/error.hpp"
#include "ckf/intmat.hpp"

namespace ckf {

/// Finitely generated abelian group Z^r + Z_{d1} + ... + Z_{dk} in invariant
/// factor form: every d_i >= 2 and d_i | d_{i+1}. Two groups are isomorphic
/// iff their canonical forms compare equal.
class FgAbelianGroup {
 public:
  /// The trivial group.
  FgAbelianGroup() = default;

  explicit FgAbelianGroup(std::size_t free_rank) : free_rank_(free_rank) {}

  /// Z^free_rank + sum of Z_c over `cyclic_orders`, canonicalized. Orders may
  /// be arbitrary integers: 0 contributes a free summand, +-1 vanishes, and
  /// signs are ignored.
  FgAbelianGroup(std::size_t free_rank, std::vector<Integer> cyclic_orders)
      : free_rank_(free_rank) {
    std::vector<Integer> torsion;
    for (auto& c : cyclic_orders) {
      if (c == 0) {
        ++free_rank_;
      } else {
        Integer m = abs(c);
        if (m != 1) torsion.push_back(std::move(m));
      }
    }
    // Pairwise (gcd, lcm) replacement preserves the group and leaves a
    // divisor chain.
    for (std::size_t i = 0; i < torsion.size(); ++i) {
      for (std::size_t j = i + 1; j < torsion.size(); ++j) {
        const Integer g = gcd(torsion[i], torsion[j]);
        const Integer l = torsion[i] / g * torsion[j];
        torsion[i] = g;
        torsion[j] = l;
      }
    }
    for (auto& t : torsion) {
      if (t != 1) factors_.push_back(std::move(t));
    }
  }

  std::size_t free_rank() const noexcept { return free_rank_; }
  const std::vector<Integer>& invariant_factors() const noexcept { return factors_; }

  bool is_trivial() const noexcept { return free_rank_ == 0 && factors_.empty(); }
  bool is_finite() const noexcept { return free_rank_ == 0; }

  /// Order of the torsion subgroup.
  Integer torsion_order() const {
    Integer o = 1;
    for (const auto& f : factors_) o *= f;
    return o;
  }

  friend bool operator==(const FgAbelianGroup&, const FgAbelianGroup&) = default;

 private:
  std::size_t free_rank_ = 0;
  std::vector<Integer> factors_;
};

/// Z^rows / A Z^cols.
inline FgAbelianGroup cokernel(const IntMatrix& a) {
  const SmithDecomposition snf = smith_normal_form(a);
  std::vector<Integer> orders;
  for (const auto& d : snf.diagonal()) {
    if (d != 0) orders.push_back(d);
  }
  return FgAbelianGroup(a.rows() - snf.rank(), std::move(orders));
}

inline bool is_isomorphic(const FgAbelianGroup& g, const FgAbelianGroup& h) { return g == h; }

inline FgAbelianGroup direct_sum(const FgAbelianGroup& g, const FgAbelianGroup& h) {
  std::vector<Integer> orders = g.invariant_factors();
  orders.insert(orders.end(), h.invariant_factors().begin(), h.invariant_factors().end());
  return FgAbelianGroup(g.free_rank() + h.free_rank(), std::move(orders));
}

/// "Z^2 + Z_2 + Z_4"; the trivial group is "0".
inline std::string format_group(const FgAbelianGroup& g) {
  if (g.is_trivial()) return "0";
  std::string out;
  if (g.free_rank() == 1) out = "Z";
  if (g.free_rank() > 1) out = "Z^" + std::to_string(g.free_rank());
  for (const auto& f : g.invariant_factors()) {
    if (!out.empty()) out += " + ";
    out += "Z_" + f.str();
  }
  return out;
}

/// Accepts anything format_group emits, and more loosely any '+'-separated
/// list of Z, Z^r, Z_n summands (re-canonicalized).
inline FgAbelianGroup parse_group(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  if (s.empty()) throw ParseError("empty group description");
  if (s == "0") return FgAbelianGroup();

  std::size_t rank = 0;
  std::vector<Integer> orders;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t end = std::min(s.find('+', pos), s.size());
    const std::string term = s.substr(pos, end - pos);
    auto all_digits = [](const std::string& x) {
      return !x.empty() &&
             std::all_of(x.begin(), x.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    if (term == "Z") {
      rank += 1;
    } else if (term.rfind("Z^", 0) == 0 && all_digits(term.substr(2))) {
      rank += std::stoul(term.substr(2));
    } else if (term.rfind("Z_", 0) == 0 && all_digits(term.substr(2))) {
      orders.emplace_back(term.substr(2));
    } else {
      throw ParseError("malformed group summand '" + term + "'");
    }
    pos = end + 1;
  }
  return FgAbelianGroup(rank, std::move(orders));
}

}  // namespace ckf
