#pragma once

// Dense matrices and polynomials over the integers, with exact normal forms.
//
// Every entry is an arbitrary-precision integer, so no operation can
// overflow. All routines are pure functions over values.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ckf/error.hpp"

namespace ckf {

using Integer = boost::multiprecision::cpp_int;

class IntMatrix {
 public:
  /// Zero matrix of the given shape. Both dimensions must be positive.
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {
    if (rows == 0 || cols == 0) {
      throw DimensionError("matrix dimensions must be positive");
    }
  }

  IntMatrix(std::initializer_list<std::initializer_list<Integer>> rows)
      : IntMatrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DimensionError("ragged matrix literal");
      std::copy(row.begin(), row.end(), entries_.begin() + i * cols_);
      ++i;
    }
  }

  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows) {
    if (rows.empty() || rows.front().empty()) {
      throw DimensionError("matrix dimensions must be positive");
    }
    IntMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw DimensionError("ragged rows");
      std::copy(rows[i].begin(), rows[i].end(), m.entries_.begin() + i * m.cols_);
    }
    return m;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix diagonal(const std::vector<Integer>& diag) {
    IntMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  /// Row-major view of all entries.
  std::span<const Integer> entries() const& noexcept { return entries_; }
  std::span<const Integer> entries() const&& = delete;

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  /// col[dst] += factor * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  /// Total order: shape first, then row-major lexicographic on entries.
  friend bool operator<(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(),
                                        b.entries_.begin(), b.entries_.end());
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Integer> entries_;
};

// ---------------------------------------------------------------------------
// Elementwise and structural helpers

inline IntMatrix transpose(const IntMatrix& a) {
  IntMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix sum: shape mismatch");
  }
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

inline IntMatrix operator-(const IntMatrix& a) {
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i) c.negate_row(i);
  return c;
}

inline IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) { return a + (-b); }

inline bool is_nonnegative(const IntMatrix& a) {
  return std::all_of(a.entries().begin(), a.entries().end(),
                     [](const Integer& x) { return x >= 0; });
}

inline bool is_zero(const IntMatrix& a) {
  return std::all_of(a.entries().begin(), a.entries().end(),
                     [](const Integer& x) { return x == 0; });
}

inline Integer entry_sum(const IntMatrix& a) {
  Integer s = 0;
  for (const auto& x : a.entries()) s += x;
  return s;
}

inline void require_square(const IntMatrix& a, const char* what) {
  if (!a.is_square()) throw DimensionError(std::string(what) + ": matrix must be square");
}

// ---------------------------------------------------------------------------
// Products and scalar invariants

inline IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Integer& ail = a(i, l);
      if (ail == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  }
  return c;
}

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) { return matmul(a, b); }

inline IntMatrix operator*(const Integer& s, const IntMatrix& a) {
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

/// Square-and-multiply; k = 0 gives the identity.
inline IntMatrix matpow(const IntMatrix& a, unsigned long long k) {
  require_square(a, "matpow");
  IntMatrix result = IntMatrix::identity(a.rows());
  IntMatrix base = a;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

inline Integer trace(const IntMatrix& a) {
  require_square(a, "trace");
  Integer t = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

/// Fraction-free (Bareiss) elimination; every division is exact.
inline Integer det(const IntMatrix& a) {
  require_square(a, "det");
  const std::size_t n = a.rows();
  IntMatrix m = a;
  Integer previous = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap_with = k + 1;
      while (swap_with < n && m(swap_with, k) == 0) ++swap_with;
      if (swap_with == n) return 0;
      m.swap_rows(k, swap_with);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / previous;
      }
      m(i, k) = 0;
    }
    previous = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Polynomials

/// Integer polynomial, coefficients in ascending degree, trailing zeros trimmed.
class IntPolynomial {
 public:
  IntPolynomial() = default;

  explicit IntPolynomial(std::vector<Integer> ascending) : coeffs_(std::move(ascending)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::span<const Integer> coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }

  Integer coefficient(std::size_t power) const {
    return power < coeffs_.size() ? coeffs_[power] : Integer(0);
  }

  Integer evaluate(const Integer& t) const {
    Integer acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::vector<Integer> coeffs_;
};

/// det(tI - A) via the Faddeev-LeVerrier recurrence. The division by k at
/// each step is exact for integer matrices.
inline IntPolynomial charpoly(const IntMatrix& a) {
  require_square(a, "charpoly");
  const std::size_t n = a.rows();
  std::vector<Integer> c(n + 1);
  c[n] = 1;
  const IntMatrix id = IntMatrix::identity(n);
  IntMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * id;
    c[n - k] = -trace(a * m) / k;
  }
  return IntPolynomial(std::move(c));
}

/// Descending powers with explicit signs, e.g. "t^2 - 6t + 1".
inline std::string format_polynomial(const IntPolynomial& p, char var = 't') {
  if (p.is_zero()) return "0";
  std::string out;
  for (long d = p.degree(); d >= 0; --d) {
    const Integer c = p.coefficient(static_cast<std::size_t>(d));
    if (c == 0) continue;
    const bool negative = c < 0;
    const Integer mag = negative ? Integer(-c) : c;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    if (mag != 1 || d == 0) out += mag.str();
    if (d >= 1) out += var;
    if (d >= 2) out += "^" + std::to_string(d);
  }
  return out;
}

/// Inverse of format_polynomial; also tolerates missing spaces.
inline IntPolynomial parse_polynomial(std::string_view text, char var = 't') {
  // Whitespace may separate terms and signs, never the pieces of one term.
  auto glued = [var](char ch) {
    return std::isdigit(static_cast<unsigned char>(ch)) || ch == var || ch == '^';
  };
  std::string s;
  bool gap = false;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      gap = !s.empty();
      continue;
    }
    if (gap && glued(ch) && glued(s.back())) {
      throw ParseError("unexpected space inside a term of '" + std::string(text) + "'");
    }
    gap = false;
    s += ch;
  }
  if (s.empty()) throw ParseError("empty polynomial");
  if (s == "0") return IntPolynomial();

  std::vector<Integer> coeffs;
  std::size_t pos = 0;
  auto digits = [&](std::size_t& p) {
    const std::size_t start = p;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
    return s.substr(start, p - start);
  };
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      throw ParseError("expected '+' or '-' in polynomial '" + std::string(text) + "'");
    }
    const std::string mag = digits(pos);
    std::size_t power = 0;
    if (pos < s.size() && s[pos] == var) {
      ++pos;
      power = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        const std::string exp = digits(pos);
        if (exp.empty()) throw ParseError("missing exponent in polynomial");
        power = std::stoul(exp);
      }
    } else if (mag.empty()) {
      throw ParseError("malformed term in polynomial '" + std::string(text) + "'");
    }
    Integer c = mag.empty() ? Integer(1) : Integer(mag);
    if (coeffs.size() <= power) coeffs.resize(power + 1);
    coeffs[power] += sign * c;
  }
  return IntPolynomial(std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Smith normal form

/// U * A * V = D with U, V unimodular and D in Smith form.
struct SmithDecomposition {
  IntMatrix u;
  IntMatrix d;
  IntMatrix v;

  /// Diagonal of D, length min(rows, cols).
  std::vector<Integer> diagonal() const {
    std::vector<Integer> out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
    return out;
  }

  std::size_t rank() const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) r += d(i, i) != 0;
    return r;
  }
};

namespace detail {

// First entry of minimal nonzero absolute value in the trailing submatrix,
// row-major scan.
inline std::optional<std::pair<std::size_t, std::size_t>> min_pivot(const IntMatrix& m,
                                                                     std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  Integer best_abs;
  for (std::size_t i = t; i < m.rows(); ++i) {
    for (std::size_t j = t; j < m.cols(); ++j) {
      if (m(i, j) == 0) continue;
      Integer v = abs(m(i, j));
      if (!best || v < best_abs) {
        best = {i, j};
        best_abs = std::move(v);
      }
    }
  }
  return best;
}

}  // namespace detail

inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  IntMatrix d = a;
  IntMatrix u = IntMatrix::identity(m);
  IntMatrix v = IntMatrix::identity(n);

  std::size_t t = 0;
  while (t < std::min(m, n)) {
    const auto pivot = detail::min_pivot(d, t);
    if (!pivot) break;
    d.swap_rows(t, pivot->first);
    u.swap_rows(t, pivot->first);
    d.swap_cols(t, pivot->second);
    v.swap_cols(t, pivot->second);

    bool cleared = true;
    for (std::size_t i = t + 1; i < m; ++i) {
      if (d(i, t) == 0) continue;
      const Integer q = d(i, t) / d(t, t);
      d.add_row_multiple(i, t, -q);
      u.add_row_multiple(i, t, -q);
      cleared = cleared && d(i, t) == 0;
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      if (d(t, j) == 0) continue;
      const Integer q = d(t, j) / d(t, t);
      d.add_col_multiple(j, t, -q);
      v.add_col_multiple(j, t, -q);
      cleared = cleared && d(t, j) == 0;
    }
    // A nonzero remainder is smaller than the pivot: re-pivot.
    if (!cleared) continue;

    bool divides_all = true;
    for (std::size_t i = t + 1; i < m && divides_all; ++i) {
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(i, j) % d(t, t) != 0) {
          d.add_row_multiple(t, i, 1);
          u.add_row_multiple(t, i, 1);
          divides_all = false;
          break;
        }
      }
    }
    if (!divides_all) continue;

    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
    ++t;
  }
  return {std::move(u), std::move(d), std::move(v)};
}

inline std::size_t rank(const IntMatrix& a) { return smith_normal_form(a).rank(); }

/// Z-basis of {x : A x = 0}: the columns of V beyond the rank.
inline std::vector<std::vector<Integer>> kernel_basis(const IntMatrix& a) {
  const SmithDecomposition snf = smith_normal_form(a);
  std::vector<std::vector<Integer>> basis;
  for (std::size_t j = snf.rank(); j < a.cols(); ++j) {
    std::vector<Integer> col(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) col[i] = snf.v(i, j);
    basis.push_back(std::move(col));
  }
  return basis;
}

/// Inverse of an element of GL_n(Z). If U A V = I then A^{-1} = V U.
inline IntMatrix unimodular_inverse(const IntMatrix& a) {
  require_square(a, "unimodular_inverse");
  const SmithDecomposition snf = smith_normal_form(a);
  if (snf.d != IntMatrix::identity(a.rows())) {
    throw NotUnimodular("matrix is not invertible over Z");
  }
  return snf.v * snf.u;
}

// ---------------------------------------------------------------------------
// Text rendering

/// Compact single-line form, e.g. "[[5,2],[2,1]]".
inline std::string to_string(const IntMatrix& a) {
  std::string out = "[";
  for (std::size_t i = 0; i < a.rows(); ++i) {
    out += i ? ",[" : "[";
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out += ",";
      out += a(i, j).str();
    }
    out += "]";
  }
  return out + "]";
}

/// One row per line, whitespace separated; the plain-text input format.
inline std::string format_matrix(const IntMatrix& a) {
  std::ostringstream out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << a(i, j);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ckf
