#pragma once

// Matrix-level machinery for subshifts of finite type: shift equivalence
// witnesses, elementary strong shift equivalence, and bounded GL_n(Z)
// conjugacy search with invariant-based refutation.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ckf/abelian.hpp"
#include "ckf/ck.hpp"
#include "ckf/error.hpp"
#include "ckf/intmat.hpp"

namespace ckf {

/// Certificate that A and B are shift equivalent over Z+ with lag k:
/// AR = RB, BS = SA, A^k = RS, SR = B^k, with R, S nonnegative.
struct SEWitness {
  IntMatrix r;
  IntMatrix s;
  unsigned lag;

  friend bool operator==(const SEWitness&, const SEWitness&) = default;
};

/// [tr(A), tr(A^2), ..., tr(A^m)]
inline std::vector<Integer> trace_sequence(const IntMatrix& a, std::size_t m) {
  require_square(a, "trace_sequence");
  std::vector<Integer> out;
  out.reserve(m);
  IntMatrix power = a;
  for (std::size_t k = 1; k <= m; ++k) {
    out.push_back(trace(power));
    if (k < m) power = power * a;
  }
  return out;
}

inline bool verify_se_witness(const IntMatrix& a, const IntMatrix& b, const SEWitness& w) {
  require_square(a, "verify_se_witness");
  require_square(b, "verify_se_witness");
  if (w.r.rows() != a.rows() || w.r.cols() != b.rows() || w.s.rows() != b.rows() ||
      w.s.cols() != a.rows()) {
    throw DimensionError("verify_se_witness: R must be rows(A) x rows(B), S rows(B) x rows(A)");
  }
  if (w.lag < 1 || !is_nonnegative(w.r) || !is_nonnegative(w.s)) return false;
  return a * w.r == w.r * b && b * w.s == w.s * a && matpow(a, w.lag) == w.r * w.s &&
         w.s * w.r == matpow(b, w.lag);
}

/// A = RS and B = SR with R, S nonnegative.
inline bool verify_elementary_sse(const IntMatrix& a, const IntMatrix& b, const IntMatrix& r,
                                  const IntMatrix& s) {
  require_square(a, "verify_elementary_sse");
  require_square(b, "verify_elementary_sse");
  if (r.rows() != a.rows() || r.cols() != b.rows() || s.rows() != b.rows() ||
      s.cols() != a.rows()) {
    throw DimensionError("verify_elementary_sse: R must be m x n and S n x m");
  }
  return is_nonnegative(r) && is_nonnegative(s) && r * s == a && s * r == b;
}

/// Invariant of shift equivalence that separates a and b, if any: the
/// nonzero spectrum (through traces of powers), then K0 and Bowen-Franks.
inline std::optional<std::string> shift_equivalence_obstruction(const IntMatrix& a,
                                                                const IntMatrix& b) {
  require_square(a, "shift_equivalence_obstruction");
  require_square(b, "shift_equivalence_obstruction");
  const std::size_t m = std::max(a.rows(), b.rows());
  const auto ta = trace_sequence(a, m);
  const auto tb = trace_sequence(b, m);
  for (std::size_t k = 0; k < m; ++k) {
    if (ta[k] != tb[k]) {
      return "tr(A^" + std::to_string(k + 1) + "): " + ta[k].str() + " vs " + tb[k].str();
    }
  }
  if (const auto ga = k0(a), gb = k0(b); !is_isomorphic(ga, gb)) {
    return "K0: " + format_group(ga) + " vs " + format_group(gb);
  }
  if (const auto ga = bowen_franks(a), gb = bowen_franks(b); !is_isomorphic(ga, gb)) {
    return "BF: " + format_group(ga) + " vs " + format_group(gb);
  }
  return std::nullopt;
}

/// Largest per-side candidate set search_se_witness will materialize.
inline constexpr std::size_t kDefaultCandidateLimit = 250000;

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) { return -floor_div(-a, b); }

// Integer row reduction into echelon form: strictly increasing pivot columns,
// positive pivots. Rows keep spanning the same lattice.
inline std::vector<std::size_t> echelonize(std::vector<std::vector<Integer>>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t width = rows.front().size();
  std::size_t cur = 0;
  for (std::size_t c = 0; c < width && cur < rows.size(); ++c) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t r = cur; r < rows.size(); ++r) {
        if (rows[r][c] != 0 && (!best || abs(rows[r][c]) < abs(rows[*best][c]))) best = r;
      }
      if (!best) break;
      std::swap(rows[cur], rows[*best]);
      bool done = true;
      for (std::size_t r = cur + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        const Integer q = rows[r][c] / rows[cur][c];
        for (std::size_t j = 0; j < width; ++j) rows[r][j] -= q * rows[cur][j];
        done = done && rows[r][c] == 0;
      }
      if (done) break;
    }
    if (rows[cur][c] == 0) continue;
    if (rows[cur][c] < 0)
      for (auto& x : rows[cur]) x = -x;
    pivots.push_back(c);
    ++cur;
  }
  return pivots;
}

// All x in span_Z(basis) with 0 <= x_i <= bound. Basis rows are echelonized,
// so each coordinate is final once the coefficients up to its pivot are fixed.
inline void enumerate_bounded(const std::vector<std::vector<Integer>>& basis,
                              const std::vector<std::size_t>& pivots, std::size_t width,
                              const Integer& bound, std::size_t limit,
                              std::vector<std::vector<Integer>>& out) {
  std::vector<Integer> point(width);
  auto in_range = [&](const std::vector<Integer>& v, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
      if (v[i] < 0 || v[i] > bound) return false;
    return true;
  };
  if (!in_range(point, 0, pivots.empty() ? width : pivots.front())) return;

  std::function<void(std::size_t, const std::vector<Integer>&)> recurse =
      [&](std::size_t t, const std::vector<Integer>& v) {
        if (t == basis.size()) {
          if (out.size() >= limit) {
            throw SearchLimitExceeded("more than " + std::to_string(limit) +
                                      " bounded nonnegative candidates");
          }
          out.push_back(v);
          return;
        }
        const std::size_t p = pivots[t];
        const std::size_t next = t + 1 < pivots.size() ? pivots[t + 1] : width;
        const Integer& step = basis[t][p];
        const Integer lo = ceil_div(-v[p], step);
        const Integer hi = floor_div(bound - v[p], step);
        for (Integer c = lo; c <= hi; ++c) {
          std::vector<Integer> w = v;
          for (std::size_t i = p; i < width; ++i) w[i] += c * basis[t][i];
          if (in_range(w, p, next)) recurse(t + 1, w);
        }
      };
  recurse(0, point);
}

// All nonnegative X (rows(a) x rows(b)) with AX = XB and entries <= bound.
inline std::vector<IntMatrix> bounded_intertwiners(const IntMatrix& a, const IntMatrix& b,
                                                   const Integer& bound, std::size_t limit) {
  const std::size_t m = a.rows();
  const std::size_t n = b.rows();
  const std::size_t width = m * n;
  // vec(X) -> vec(AX - XB), row-major vectorization.
  IntMatrix map(width, width);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t l = 0; l < m; ++l) map(row, l * n + j) += a(i, l);
      for (std::size_t l = 0; l < n; ++l) map(row, i * n + l) -= b(l, j);
    }
  }
  auto basis = kernel_basis(map);
  const auto pivots = echelonize(basis);
  std::vector<std::vector<Integer>> points;
  enumerate_bounded(basis, pivots, width, bound, limit, points);

  std::vector<IntMatrix> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    IntMatrix x(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) x(i, j) = p[i * n + j];
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace detail

/// First shift-equivalence witness in the order: lag ascending, then total
/// entry sum of (R, S), then (R, S) row-major lexicographic. R and S range
/// over nonnegative matrices with entries <= entry_bound. An empty result
/// is not a proof that A and B are not shift equivalent; see
/// shift_equivalence_obstruction for that.
inline std::optional<SEWitness> search_se_witness(const IntMatrix& a, const IntMatrix& b,
                                                  unsigned max_lag, unsigned entry_bound,
                                                  std::size_t candidate_limit =
                                                      kDefaultCandidateLimit) {
  detail::require_nonnegative(a, "search_se_witness");
  detail::require_nonnegative(b, "search_se_witness");

  auto rs = detail::bounded_intertwiners(a, b, entry_bound, candidate_limit);  // AR = RB
  auto ss = detail::bounded_intertwiners(b, a, entry_bound, candidate_limit);  // BS = SA
  if (rs.empty() || ss.empty()) return std::nullopt;

  std::sort(rs.begin(), rs.end());
  std::map<std::size_t, std::vector<IntMatrix>> s_by_sum;
  std::size_t max_r = 0;
  std::size_t max_s = 0;
  std::vector<std::size_t> r_sums;
  for (const auto& r : rs) {
    r_sums.push_back(entry_sum(r).convert_to<std::size_t>());
    max_r = std::max(max_r, r_sums.back());
  }
  for (auto& s : ss) {
    const auto sum = entry_sum(s).convert_to<std::size_t>();
    max_s = std::max(max_s, sum);
    s_by_sum[sum].push_back(std::move(s));
  }
  for (auto& [sum, group] : s_by_sum) std::sort(group.begin(), group.end());

  for (unsigned lag = 1; lag <= max_lag; ++lag) {
    const IntMatrix ak = matpow(a, lag);
    const IntMatrix bk = matpow(b, lag);
    for (std::size_t total = 0; total <= max_r + max_s; ++total) {
      for (std::size_t i = 0; i < rs.size(); ++i) {
        if (r_sums[i] > total) continue;
        const auto it = s_by_sum.find(total - r_sums[i]);
        if (it == s_by_sum.end()) continue;
        for (const auto& s : it->second) {
          if (rs[i] * s == ak && s * rs[i] == bk) return SEWitness{rs[i], s, lag};
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Bounded enumeration of GL_n(Z)

/// Generator of GL_n(Z): the transvection I + c*e_i e_j^T (c = +-1, i != j)
/// or, when `flip` is set, diag(-1, 1, ..., 1).
struct ElementaryGenerator {
  std::size_t i = 0;
  std::size_t j = 0;
  int c = 0;
  bool flip = false;

  IntMatrix matrix(std::size_t n) const {
    IntMatrix m = IntMatrix::identity(n);
    if (flip) {
      m(0, 0) = -1;
    } else {
      m(i, j) = c;
    }
    return m;
  }
};

/// Transvections in row-major (i, j) order with +1 before -1, then the flip.
inline std::vector<ElementaryGenerator> elementary_generators(std::size_t n) {
  std::vector<ElementaryGenerator> gens;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      gens.push_back({i, j, 1, false});
      gens.push_back({i, j, -1, false});
    }
  }
  gens.push_back({0, 0, 0, true});
  return gens;
}

/// Visits every distinct matrix U expressible as a word of length <= depth
/// in elementary_generators(n), breadth first, starting with the identity.
/// The visitor receives (U, U^{-1}) and returns true to stop. Returns
/// whether the visitor stopped the walk.
template <typename Visitor>
bool for_each_conjugator(std::size_t n, std::size_t depth, Visitor&& visit) {
  const auto gens = elementary_generators(n);
  std::set<IntMatrix> seen;
  std::vector<std::pair<IntMatrix, IntMatrix>> frontier;
  frontier.emplace_back(IntMatrix::identity(n), IntMatrix::identity(n));
  seen.insert(frontier.front().first);
  if (visit(frontier.front().first, frontier.front().second)) return true;

  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<std::pair<IntMatrix, IntMatrix>> next;
    for (const auto& [u, u_inv] : frontier) {
      for (const auto& g : gens) {
        // g * U as a row operation; U^{-1} * g^{-1} as a column operation.
        IntMatrix gu = u;
        IntMatrix gu_inv = u_inv;
        if (g.flip) {
          gu.negate_row(0);
          for (std::size_t r = 0; r < n; ++r) gu_inv(r, 0) = -gu_inv(r, 0);
        } else {
          gu.add_row_multiple(g.i, g.j, g.c);
          gu_inv.add_col_multiple(g.j, g.i, -g.c);
        }
        if (!seen.insert(gu).second) continue;
        if (visit(gu, gu_inv)) return true;
        next.emplace_back(std::move(gu), std::move(gu_inv));
      }
    }
    frontier = std::move(next);
  }
  return false;
}

/// Invariant of GL_n(Z) conjugacy separating a and b, if any.
inline std::optional<std::string> conjugacy_obstruction(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.rows();
  const auto ta = trace_sequence(a, n);
  const auto tb = trace_sequence(b, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (ta[k] != tb[k]) {
      return "tr(A^" + std::to_string(k + 1) + "): " + ta[k].str() + " vs " + tb[k].str();
    }
  }
  if (const auto ga = k0(a), gb = k0(b); !is_isomorphic(ga, gb)) {
    return "K0: " + format_group(ga) + " vs " + format_group(gb);
  }
  const IntMatrix id = IntMatrix::identity(n);
  if (const auto ga = cokernel(a + id), gb = cokernel(b + id); !is_isomorphic(ga, gb)) {
    return "coker(A + I): " + format_group(ga) + " vs " + format_group(gb);
  }
  return std::nullopt;
}

struct ConjugacyResult {
  enum class Status { Conjugate, NotConjugate, Unknown };

  Status status = Status::Unknown;
  /// U with U * a * U^{-1} = b, when status is Conjugate.
  std::optional<IntMatrix> conjugator;
  /// Separating invariant, when status is NotConjugate.
  std::string obstruction;
};

inline ConjugacyResult conjugacy_search(const IntMatrix& a, const IntMatrix& b,
                                        std::size_t search_depth) {
  require_square(a, "conjugacy_search");
  require_square(b, "conjugacy_search");
  if (a.rows() != b.rows()) throw DimensionError("conjugacy_search: sizes differ");
  for (const IntMatrix* m : {&a, &b}) {
    const Integer d = det(*m);
    if (d != 1 && d != -1) throw NotUnimodular("conjugacy_search: det = " + d.str());
  }

  ConjugacyResult result;
  if (auto why = conjugacy_obstruction(a, b)) {
    result.status = ConjugacyResult::Status::NotConjugate;
    result.obstruction = std::move(*why);
    return result;
  }
  for_each_conjugator(a.rows(), search_depth, [&](const IntMatrix& u, const IntMatrix&) {
    if (u * a == b * u) {
      result.status = ConjugacyResult::Status::Conjugate;
      result.conjugator = u;
      return true;
    }
    return false;
  });
  return result;
}

}  // namespace ckf
