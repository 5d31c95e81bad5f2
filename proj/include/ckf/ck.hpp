#pragma once

// Cuntz-Krieger algebra O_A, represented by its defining matrix, and its
// K-theory: K0 = Z^n / (I - A^t) Z^n, K1 = ker(I - A^t).

#include <algorithm>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "ckf/abelian.hpp"
#include "ckf/error.hpp"
#include "ckf/intmat.hpp"

namespace ckf {

/// Validated defining matrix of O_A. `generators` is the number of partial
/// isometries s_1..s_n; no operator model is built.
struct CKDescriptor {
  IntMatrix matrix;
  std::size_t generators;
};

inline CKDescriptor make_descriptor(const IntMatrix& a) {
  require_square(a, "make_descriptor");
  if (!is_nonnegative(a)) throw NotNonnegative("Cuntz-Krieger matrix has a negative entry");
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    bool row_nonzero = false;
    bool col_nonzero = false;
    for (std::size_t j = 0; j < n; ++j) {
      row_nonzero = row_nonzero || a(i, j) != 0;
      col_nonzero = col_nonzero || a(j, i) != 0;
    }
    if (!row_nonzero) throw DegenerateRelations("zero row " + std::to_string(i + 1));
    if (!col_nonzero) throw DegenerateRelations("zero column " + std::to_string(i + 1));
  }
  return {a, n};
}

inline FgAbelianGroup k0(const IntMatrix& a) {
  require_square(a, "k0");
  return cokernel(IntMatrix::identity(a.rows()) - transpose(a));
}

/// Always free: rank is the nullity of I - A^t.
inline FgAbelianGroup k1(const IntMatrix& a) {
  require_square(a, "k1");
  return FgAbelianGroup(a.rows() - rank(IntMatrix::identity(a.rows()) - transpose(a)));
}

/// coker(I - A); isomorphic to k0(a) since SNF is transpose invariant.
inline FgAbelianGroup bowen_franks(const IntMatrix& a) {
  require_square(a, "bowen_franks");
  return cokernel(IntMatrix::identity(a.rows()) - a);
}

namespace detail {

inline void require_nonnegative(const IntMatrix& a, const char* what) {
  require_square(a, what);
  if (!is_nonnegative(a)) throw NotNonnegative(std::string(what) + ": negative entry");
}

// Boolean reachability pattern of the graph with an arc i->j iff a(i,j) > 0.
using Pattern = std::vector<std::vector<bool>>;

inline Pattern support(const IntMatrix& a) {
  Pattern p(a.rows(), std::vector<bool>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) p[i][j] = a(i, j) > 0;
  return p;
}

inline Pattern pattern_product(const Pattern& x, const Pattern& y) {
  const std::size_t n = x.size();
  Pattern z(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l)
      if (x[i][l])
        for (std::size_t j = 0; j < n; ++j) z[i][j] = z[i][j] || y[l][j];
  return z;
}

inline std::vector<bool> reachable_from(const Pattern& p, std::size_t start, bool reverse) {
  std::vector<bool> seen(p.size());
  std::queue<std::size_t> todo;
  seen[start] = true;
  todo.push(start);
  while (!todo.empty()) {
    const std::size_t v = todo.front();
    todo.pop();
    for (std::size_t w = 0; w < p.size(); ++w) {
      const bool arc = reverse ? p[w][v] : p[v][w];
      if (arc && !seen[w]) {
        seen[w] = true;
        todo.push(w);
      }
    }
  }
  return seen;
}

}  // namespace detail

/// Strong connectivity of the transition graph.
inline bool is_irreducible(const IntMatrix& a) {
  detail::require_nonnegative(a, "is_irreducible");
  const auto p = detail::support(a);
  const auto fwd = detail::reachable_from(p, 0, false);
  const auto bwd = detail::reachable_from(p, 0, true);
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (!fwd[v] || !bwd[v]) return false;
  }
  return true;
}

/// Some power A^k is strictly positive. Powers up to the Wielandt bound
/// (n-1)^2 + 1 are tested on the zero pattern only.
inline bool is_primitive(const IntMatrix& a) {
  detail::require_nonnegative(a, "is_primitive");
  const std::size_t n = a.rows();
  const std::size_t bound = (n - 1) * (n - 1) + 1;
  const auto base = detail::support(a);
  auto power = base;
  for (std::size_t k = 1; k <= bound; ++k) {
    bool positive = true;
    for (const auto& row : power)
      for (bool x : row) positive = positive && x;
    if (positive) return true;
    power = detail::pattern_product(power, base);
  }
  return false;
}

/// Largest arc count edge_dilation will expand into an explicit matrix.
inline constexpr std::size_t kMaxDilationArcs = 4096;

/// Arc-graph (edge shift) presentation of a nonnegative integer matrix: one
/// state per arc, arcs ordered by (tail, head, copy), with e -> f allowed iff
/// head(e) = tail(f). A 0/1 matrix is returned unchanged.
inline IntMatrix edge_dilation(const IntMatrix& a) {
  detail::require_nonnegative(a, "edge_dilation");
  if (is_zero(a)) throw DimensionError("edge_dilation: zero matrix has no arcs");
  const bool zero_one = std::all_of(a.entries().begin(), a.entries().end(),
                                    [](const Integer& x) { return x <= 1; });
  if (zero_one) return a;

  if (entry_sum(a) > kMaxDilationArcs) {
    throw SearchLimitExceeded("edge_dilation: more than " + std::to_string(kMaxDilationArcs) +
                              " arcs");
  }
  struct Arc {
    std::size_t tail;
    std::size_t head;
  };
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto copies = a(i, j).convert_to<std::size_t>();
      for (std::size_t c = 0; c < copies; ++c) arcs.push_back({i, j});
    }
  }
  IntMatrix d(arcs.size(), arcs.size());
  for (std::size_t e = 0; e < arcs.size(); ++e)
    for (std::size_t f = 0; f < arcs.size(); ++f)
      if (arcs[e].head == arcs[f].tail) d(e, f) = 1;
  return d;
}

}  // namespace ckf
