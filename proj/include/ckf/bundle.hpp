#pragma once

// Torus bundles M_A over the circle with monodromy A in GL_n(Z), and the
// Cuntz-Krieger functor M_A -> O_A evaluated on K-theory.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ckf/abelian.hpp"
#include "ckf/ck.hpp"
#include "ckf/error.hpp"
#include "ckf/intmat.hpp"
#include "ckf/sft.hpp"

namespace ckf {

/// Mapping torus of the automorphism of T^n induced by an element of GL_n(Z).
class TorusBundle {
 public:
  explicit TorusBundle(IntMatrix monodromy) : monodromy_(std::move(monodromy)) {
    require_square(monodromy_, "TorusBundle");
    const Integer d = det(monodromy_);
    if (d != 1 && d != -1) {
      throw NotUnimodular("monodromy has det " + d.str() + ", not +-1");
    }
  }

  const IntMatrix& monodromy() const noexcept { return monodromy_; }
  /// n, for fiber T^n; the bundle itself has dimension n + 1.
  std::size_t fiber_dimension() const noexcept { return monodromy_.rows(); }

 private:
  IntMatrix monodromy_;
};

inline TorusBundle make_bundle(const IntMatrix& a) { return TorusBundle(a); }

struct NormalizedMonodromy {
  IntMatrix matrix;
  /// Whether the sign of the monodromy was switched.
  bool flipped = false;

  friend bool operator==(const NormalizedMonodromy&, const NormalizedMonodromy&) = default;
};

/// Switches the sign when tr(A) < 0. Trace zero keeps the given sign.
inline NormalizedMonodromy normalize_monodromy(const TorusBundle& b) {
  if (trace(b.monodromy()) < 0) return {-b.monodromy(), true};
  return {b.monodromy(), false};
}

struct Conjugation {
  IntMatrix conjugator;      ///< B
  IntMatrix representative;  ///< B * A * B^{-1}
};

/// Searches words of length <= search_depth for B making B A B^{-1}
/// nonnegative, where A is the normalized monodromy. nullopt does not mean
/// no nonnegative representative exists.
inline std::optional<Conjugation> nonnegative_representative(const TorusBundle& b,
                                                             std::size_t search_depth) {
  const IntMatrix a = normalize_monodromy(b).matrix;
  std::optional<Conjugation> found;
  for_each_conjugator(a.rows(), search_depth, [&](const IntMatrix& u, const IntMatrix& u_inv) {
    IntMatrix candidate = u * a * u_inv;
    if (!is_nonnegative(candidate)) return false;
    found = Conjugation{u, std::move(candidate)};
    return true;
  });
  return found;
}

/// H_1(M_A; Z) = Z + Z^n / (A - I) Z^n, on the raw monodromy.
inline FgAbelianGroup h1(const TorusBundle& b) {
  const IntMatrix& a = b.monodromy();
  return direct_sum(FgAbelianGroup(1), cokernel(a - IntMatrix::identity(a.rows())));
}

inline IntPolynomial alexander_polynomial(const TorusBundle& b) {
  return charpoly(b.monodromy());
}

/// Object map of the functor: K-theory of O_A for the normalized monodromy.
struct FunctorImage {
  NormalizedMonodromy normalized;
  FgAbelianGroup k0;
  FgAbelianGroup k1;

  friend bool operator==(const FunctorImage&, const FunctorImage&) = default;
};

inline FunctorImage ck_functor(const TorusBundle& b) {
  NormalizedMonodromy n = normalize_monodromy(b);
  FgAbelianGroup g0 = k0(n.matrix);
  FgAbelianGroup g1 = k1(n.matrix);
  return {std::move(n), std::move(g0), std::move(g1)};
}

/// H_1(M_A) ~ Z + K0(F(M_A)). Expected to hold whenever tr(A) >= 0; a false
/// result for tr(A) < 0 comes from the sign switch and is reported as is.
inline bool theorem1_check(const TorusBundle& b) {
  return is_isomorphic(h1(b), direct_sum(FgAbelianGroup(1), ck_functor(b).k0));
}

struct ComparisonVerdict {
  enum class Outcome { Distinct, Homeomorphic, Inconclusive };

  Outcome outcome = Outcome::Inconclusive;
  /// Human-readable: the separating invariants, or the certificate.
  std::string witness;
  /// B with B * A1 * B^{-1} = A2, when Homeomorphic.
  std::optional<IntMatrix> certificate;
};

inline std::string to_string(ComparisonVerdict::Outcome o) {
  switch (o) {
    case ComparisonVerdict::Outcome::Distinct:
      return "Distinct";
    case ComparisonVerdict::Outcome::Homeomorphic:
      return "Homeomorphic";
    case ComparisonVerdict::Outcome::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

/// Distinct when the functor images differ in K0 or K1 (via H_1 = Z + K0) or
/// when H_1 differs; Homeomorphic when a conjugator of the monodromies is
/// found within search_depth; Inconclusive otherwise.
inline ComparisonVerdict compare_bundles(const TorusBundle& b1, const TorusBundle& b2,
                                         std::size_t search_depth) {
  if (b1.fiber_dimension() != b2.fiber_dimension()) {
    throw DimensionError("compare_bundles: fiber dimensions differ");
  }
  const FunctorImage f1 = ck_functor(b1);
  const FunctorImage f2 = ck_functor(b2);
  const FgAbelianGroup h1a = h1(b1);
  const FgAbelianGroup h1b = h1(b2);

  std::vector<std::string> differences;
  if (!is_isomorphic(f1.k0, f2.k0)) {
    differences.push_back("K0: " + format_group(f1.k0) + " vs " + format_group(f2.k0));
  }
  if (!is_isomorphic(f1.k1, f2.k1)) {
    differences.push_back("K1: " + format_group(f1.k1) + " vs " + format_group(f2.k1));
  }
  if (!is_isomorphic(h1a, h1b)) {
    differences.push_back("H1 differs: " + format_group(h1a) + " vs " + format_group(h1b));
  }
  ComparisonVerdict verdict;
  if (!differences.empty()) {
    verdict.outcome = ComparisonVerdict::Outcome::Distinct;
    for (std::size_t i = 0; i < differences.size(); ++i) {
      verdict.witness += (i ? "; " : "") + differences[i];
    }
    return verdict;
  }

  const ConjugacyResult conj =
      conjugacy_search(b1.monodromy(), b2.monodromy(), search_depth);
  switch (conj.status) {
    case ConjugacyResult::Status::Conjugate:
      verdict.outcome = ComparisonVerdict::Outcome::Homeomorphic;
      verdict.certificate = conj.conjugator;
      verdict.witness = "conjugator B = " + to_string(*conj.conjugator);
      break;
    case ConjugacyResult::Status::NotConjugate:
      verdict.witness = "monodromies not conjugate (" + conj.obstruction +
                        "); homeomorphism not excluded";
      break;
    case ConjugacyResult::Status::Unknown:
      verdict.witness = "invariants agree; no conjugator within depth " +
                        std::to_string(search_depth);
      break;
  }
  return verdict;
}

}  // namespace ckf
