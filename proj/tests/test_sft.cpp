#include <algorithm>
#include <tuple>

#include "catch_amalgamated.hpp"

#include "ckf/ck.hpp"
#include "ckf/sft.hpp"
#include "support/generators.hpp"

using namespace ckf;
using ckf::testing::Rng;

namespace {

const IntMatrix kA2{{5, 2}, {2, 1}};
const IntMatrix kA3{{5, 1}, {4, 1}};

// Every 2x2 matrix with entries in [0, bound], row-major lexicographic order.
std::vector<IntMatrix> all_small_2x2(long bound) {
  std::vector<IntMatrix> out;
  for (long a = 0; a <= bound; ++a)
    for (long b = 0; b <= bound; ++b)
      for (long c = 0; c <= bound; ++c)
        for (long d = 0; d <= bound; ++d) out.push_back(IntMatrix{{a, b}, {c, d}});
  return out;
}

}  // namespace

TEST_CASE("trace_sequence", "[sft]") {
  CHECK(trace_sequence(kA2, 2) == std::vector<Integer>{6, 34});
  CHECK(trace_sequence(IntMatrix::identity(2), 3) == std::vector<Integer>{2, 2, 2});
  const IntMatrix fib{{1, 1}, {1, 0}};
  std::vector<Integer> lucas;
  for (unsigned k = 1; k <= 4; ++k) lucas.push_back(trace(matpow(fib, k)));
  CHECK(lucas == std::vector<Integer>{1, 3, 4, 7});
  CHECK(trace_sequence(fib, 4) == lucas);
  CHECK(trace_sequence(fib, 0).empty());
}

TEST_CASE("verify_se_witness", "[sft]") {
  CHECK(verify_se_witness(kA2, kA2, {kA2, IntMatrix::identity(2), 1}));
  CHECK_FALSE(verify_se_witness(kA2, kA2, {IntMatrix::identity(2), IntMatrix::identity(2), 2}));
  CHECK_FALSE(verify_se_witness(kA2, kA2, {kA2, IntMatrix::identity(2), 0}));
  // Right equations, wrong sign: nonnegativity is part of the relation.
  CHECK_FALSE(verify_se_witness(kA2, kA2, {-kA2, -IntMatrix::identity(2), 1}));
  CHECK_THROWS_AS(verify_se_witness(kA2, kA2, {IntMatrix(2, 3), IntMatrix(3, 2), 1}),
                  DimensionError);
}

TEST_CASE("no small candidate relates A2 and A3", "[sft]") {
  const auto small = all_small_2x2(2);
  for (unsigned lag = 1; lag <= 2; ++lag)
    for (const auto& r : small)
      for (const auto& s : small) REQUIRE_FALSE(verify_se_witness(kA2, kA3, {r, s, lag}));
}

TEST_CASE("search_se_witness returns the enumeration-first witness", "[sft]") {
  // Oracle: all verified witnesses with entries <= 3, sorted by
  // (lag, total entry sum, R lexicographic, S lexicographic).
  const auto small = all_small_2x2(3);
  std::vector<std::tuple<Integer, IntMatrix, IntMatrix>> hits;
  for (const auto& r : small)
    for (const auto& s : small)
      if (verify_se_witness(kA2, kA2, {r, s, 1})) hits.emplace_back(entry_sum(r) + entry_sum(s), r, s);
  REQUIRE_FALSE(hits.empty());
  std::sort(hits.begin(), hits.end());
  const auto& [sum, r, s] = hits.front();

  const auto found = search_se_witness(kA2, kA2, 1, 3);
  REQUIRE(found);
  CHECK(found->lag == 1);
  CHECK(found->r == r);
  CHECK(found->s == s);
  CHECK(verify_se_witness(kA2, kA2, *found));

  // (A, I, 1) is a witness, so the first one is never later.
  const auto wide = search_se_witness(kA2, kA2, 3, 6);
  REQUIRE(wide);
  CHECK(verify_se_witness(kA2, kA2, *wide));
  CHECK(entry_sum(wide->r) + entry_sum(wide->s) <= entry_sum(kA2) + 2);
}

TEST_CASE("search_se_witness on unrelated and related pairs", "[sft]") {
  CHECK_FALSE(search_se_witness(kA2, kA3, 3, 6));
  REQUIRE(shift_equivalence_obstruction(kA2, kA3));
  CHECK(shift_equivalence_obstruction(kA2, kA3)->rfind("K0:", 0) == 0);
  CHECK_FALSE(shift_equivalence_obstruction(kA2, kA2));

  // B A2 B^{-1} with B = [[1,-1],[0,1]] is nonnegative; R = B^{-1}, S = B A2
  // is a lag-1 witness with entries <= 3.
  const IntMatrix b{{1, -1}, {0, 1}};
  const IntMatrix conj = b * kA2 * unimodular_inverse(b);
  REQUIRE(is_nonnegative(conj));
  CHECK(verify_se_witness(kA2, conj, {unimodular_inverse(b), b * kA2, 1}));
  const auto w = search_se_witness(kA2, conj, 2, 4);
  REQUIRE(w);
  CHECK(verify_se_witness(kA2, conj, *w));

  // Different sizes: [[2]] and its arc presentation.
  const IntMatrix full2{{1, 1}, {1, 1}};
  const auto w2 = search_se_witness(IntMatrix{{2}}, full2, 1, 2);
  REQUIRE(w2);
  CHECK(verify_se_witness(IntMatrix{{2}}, full2, *w2));

  CHECK_THROWS_AS(search_se_witness(-kA2, kA2, 1, 2), NotNonnegative);
  CHECK_THROWS_AS(search_se_witness(IntMatrix::identity(3), IntMatrix::identity(3), 1, 6, 1000),
                  SearchLimitExceeded);
}

TEST_CASE("verify_elementary_sse", "[sft]") {
  CHECK(verify_elementary_sse(IntMatrix{{2}}, IntMatrix{{1, 1}, {1, 1}}, IntMatrix{{1, 1}},
                              IntMatrix{{1}, {1}}));
  CHECK(verify_elementary_sse(kA2, kA2, IntMatrix::identity(2), kA2));
  CHECK_FALSE(verify_elementary_sse(kA2, kA2, IntMatrix{{-1, 0}, {0, -1}}, -kA2));
  CHECK_THROWS_AS(verify_elementary_sse(kA2, kA2, IntMatrix(2, 3), kA2), DimensionError);
}

TEST_CASE("elementary SSE pairs share SE invariants", "[sft][property]") {
  Rng rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t m = 1 + rng.index(4);
    const std::size_t n = 1 + rng.index(4);
    const IntMatrix r = testing::random_matrix(rng, m, n, 0, 5);
    const IntMatrix s = testing::random_matrix(rng, n, m, 0, 5);
    const IntMatrix a = r * s;
    const IntMatrix b = s * r;
    REQUIRE(verify_elementary_sse(a, b, r, s));
    // SSE implies SE with lag 1.
    REQUIRE(verify_se_witness(a, b, {r, s, 1}));
    REQUIRE(trace_sequence(a, 5) == trace_sequence(b, 5));
    REQUIRE(bowen_franks(a) == bowen_franks(b));
    REQUIRE(k0(a) == k0(b));
    REQUIRE_FALSE(shift_equivalence_obstruction(a, b));
  }
}

TEST_CASE("elementary_generators and for_each_conjugator", "[sft]") {
  CHECK(elementary_generators(2).size() == 5);
  CHECK(elementary_generators(3).size() == 13);

  std::size_t visited = 0;
  const bool stopped = for_each_conjugator(2, 1, [&](const IntMatrix& u, const IntMatrix& u_inv) {
    ++visited;
    CHECK(u * u_inv == IntMatrix::identity(2));
    return false;
  });
  CHECK_FALSE(stopped);
  CHECK(visited == 6);

  std::vector<IntMatrix> seen;
  for_each_conjugator(3, 2, [&](const IntMatrix& u, const IntMatrix& u_inv) {
    REQUIRE(u * u_inv == IntMatrix::identity(3));
    const Integer d = det(u);
    REQUIRE((d == 1 || d == -1));
    seen.push_back(u);
    return false;
  });
  CHECK(seen.front() == IntMatrix::identity(3));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("conjugacy_search", "[sft]") {
  const auto same = conjugacy_search(kA2, kA2, 2);
  REQUIRE(same.status == ConjugacyResult::Status::Conjugate);
  CHECK(*same.conjugator == IntMatrix::identity(2));

  const auto apart = conjugacy_search(kA2, kA3, 4);
  CHECK(apart.status == ConjugacyResult::Status::NotConjugate);
  CHECK(apart.obstruction.rfind("K0:", 0) == 0);
  CHECK_FALSE(apart.conjugator);

  // Depth 0 only tries the identity.
  const IntMatrix b{{1, 1}, {0, 1}};
  const auto shallow = conjugacy_search(kA2, b * kA2 * unimodular_inverse(b), 0);
  CHECK(shallow.status == ConjugacyResult::Status::Unknown);

  // Different traces of powers: refuted by the prefilter.
  const auto traces = conjugacy_search(kA2, IntMatrix{{1, 1}, {1, 2}}, 3);
  CHECK(traces.status == ConjugacyResult::Status::NotConjugate);
  CHECK(traces.obstruction.rfind("tr(", 0) == 0);

  CHECK_THROWS_AS(conjugacy_search(kA2, IntMatrix::identity(3), 1), DimensionError);
  CHECK_THROWS_AS(conjugacy_search(kA2, IntMatrix{{2, 0}, {0, 1}}, 1), NotUnimodular);
}

TEST_CASE("conjugacy_search recovers constructed conjugates", "[sft][property]") {
  Rng rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.index(2);
    const IntMatrix a = testing::random_unimodular(rng, n, 6).first;
    const auto [b, b_inv] = testing::random_unimodular(rng, n, 1 + rng.index(3));
    const IntMatrix target = b * a * b_inv;
    REQUIRE_FALSE(conjugacy_obstruction(a, target));
    const auto found = conjugacy_search(a, target, 3);
    REQUIRE(found.status == ConjugacyResult::Status::Conjugate);
    const IntMatrix& u = *found.conjugator;
    REQUIRE(u * a == target * u);
    const Integer d = det(u);
    REQUIRE((d == 1 || d == -1));
  }
}
