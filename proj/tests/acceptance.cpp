// Acceptance suite: one line per criterion, exact comparisons only.
//
//   acceptance <path-to-ckf-binary> <samples-dir>
//
// Exits nonzero if any criterion fails.

#include <sys/wait.h>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ckf/ckf.hpp"
#include "ckf/cli.hpp"
#include "support/generators.hpp"

using namespace ckf;
using ckf::testing::Rng;

namespace {

const IntMatrix kA2{{5, 2}, {2, 1}};
const IntMatrix kA3{{5, 1}, {4, 1}};

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void report(const char* id, const char* title, const Outcome& o) {
  std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << ' ' << title;
  if (!o.detail.empty()) std::cout << " (" << o.detail << ')';
  std::cout << std::endl;
  if (!o.pass) ++failures;
}

struct Run {
  int status = -1;
  std::string out;
};

Run run_tool(const std::string& command) {
  Run r;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

// Random element of GL_n(Z) as a word in the elementary generators.
IntMatrix random_gl(Rng& rng, std::size_t n) {
  return testing::random_unimodular(rng, n, 1 + rng.index(10)).first;
}

struct BundleInvariants {
  FgAbelianGroup h1;
  FgAbelianGroup k0;
  FgAbelianGroup k1;
  IntPolynomial alexander;

  friend bool operator==(const BundleInvariants&, const BundleInvariants&) = default;
};

BundleInvariants invariants_of(const IntMatrix& a) {
  const TorusBundle b(a);
  const FunctorImage f = ck_functor(b);
  return {h1(b), f.k0, f.k1, alexander_polynomial(b)};
}

Outcome ac1() {
  Outcome o;
  for (long n = 1; n <= 10; ++n) {
    const TorusBundle b(IntMatrix{{1, n}, {0, 1}});
    const FgAbelianGroup expected_k0 = n == 1 ? FgAbelianGroup(1) : FgAbelianGroup(1, {n});
    const FgAbelianGroup expected_h1 = n == 1 ? FgAbelianGroup(2) : FgAbelianGroup(2, {n});
    if (ck_functor(b).k0 != expected_k0) o.fail("k0 wrong at n=" + std::to_string(n));
    if (h1(b) != expected_h1) o.fail("h1 wrong at n=" + std::to_string(n));
  }
  if (o.pass) o.detail = "n = 1..10";
  return o;
}

Outcome ac2() {
  Outcome o;
  const IntMatrix id = IntMatrix::identity(2);
  if (k0(kA2) != FgAbelianGroup(0, {2, 2})) o.fail("k0(A2) = " + format_group(k0(kA2)));
  if (k0(kA3) != FgAbelianGroup(0, {4})) o.fail("k0(A3) = " + format_group(k0(kA3)));
  if (!k1(kA2).is_trivial() || !k1(kA3).is_trivial()) o.fail("k1 not trivial");
  if (det(id - transpose(kA2)) != -4 || det(id - transpose(kA3)) != -4) {
    o.fail("det(I - A^t) != -4");
  }
  if (o.pass) o.detail = "Z_2 + Z_2 and Z_4, k1 = 0";
  return o;
}

Outcome ac3() {
  Outcome o;
  const IntPolynomial expected({1, -6, 1});
  const IntPolynomial p2 = alexander_polynomial(TorusBundle(kA2));
  const IntPolynomial p3 = alexander_polynomial(TorusBundle(kA3));
  if (p2 != expected) o.fail("A2: " + format_polynomial(p2));
  if (p3 != expected) o.fail("A3: " + format_polynomial(p3));
  if (o.pass) o.detail = format_polynomial(p2);
  return o;
}

Outcome ac4(const std::string& tool, const std::string& samples) {
  Outcome o;
  const ComparisonVerdict v = compare_bundles(TorusBundle(kA2), TorusBundle(kA3), 3);
  if (v.outcome != ComparisonVerdict::Outcome::Distinct || v.witness.rfind("K0:", 0) != 0) {
    o.fail("library verdict " + to_string(v.outcome) + ": " + v.witness);
  }

  const Run distinct =
      run_tool(quote(tool) + " compare " + quote(samples + "/a2.txt") + " " +
               quote(samples + "/a3.txt"));
  if (distinct.status != 1) o.fail("compare A2 A3 exit " + std::to_string(distinct.status));
  if (distinct.out.find("Distinct") == std::string::npos ||
      distinct.out.find("K0: Z_2 + Z_2 vs Z_4") == std::string::npos) {
    o.fail("compare A2 A3 output lacks the K0 witness");
  }

  // Every conjugator that is a word of length <= 3.
  std::size_t words = 0;
  for_each_conjugator(2, 3, [&](const IntMatrix& b, const IntMatrix& b_inv) {
    ++words;
    const IntMatrix target = b * kA2 * b_inv;
    const ComparisonVerdict c = compare_bundles(TorusBundle(kA2), TorusBundle(target), 3);
    if (c.outcome != ComparisonVerdict::Outcome::Homeomorphic) {
      o.fail("no certificate for B = " + to_string(b));
      return true;
    }
    const IntMatrix& u = *c.certificate;
    const Integer d = det(u);
    if ((d != 1 && d != -1) || u * kA2 != target * u) {
      o.fail("invalid certificate for B = " + to_string(b));
      return true;
    }
    return false;
  });

  const Run conj = run_tool(quote(tool) + " compare " + quote(samples + "/a2.txt") + " " +
                            quote(samples + "/a2_conjugate.txt") + " --depth 3 --format json");
  if (conj.status != 0) {
    o.fail("compare A2 A2' exit " + std::to_string(conj.status));
  } else {
    const auto j = cli::json::parse(conj.out);
    const IntMatrix target = cli::parse_matrix(R"({"rows": [[-5, -14], [4, 11]]})");
    const IntMatrix u = cli::matrix_from_json(j.at("certificate"));
    if (j.at("verdict") != "Homeomorphic" || u * kA2 != target * u) {
      o.fail("CLI certificate does not verify");
    }
  }
  if (o.pass) o.detail = std::to_string(words) + " conjugators of length <= 3, CLI exits 1 and 0";
  return o;
}

Outcome ac5() {
  Outcome o;
  Rng rng(1005);
  int checked = 0;
  int attempts = 0;
  while (checked < 600 && o.pass) {
    ++attempts;
    const std::size_t n = 2 + rng.index(3);
    const IntMatrix a = random_gl(rng, n);
    if (trace(a) < 0) continue;
    ++checked;
    if (!theorem1_check(TorusBundle(a))) o.fail("theorem1_check false for " + to_string(a));
    const auto [b, b_inv] = testing::random_unimodular(rng, n, 1 + rng.index(8));
    if (invariants_of(a) != invariants_of(b * a * b_inv)) {
      o.fail("invariants moved under conjugation of " + to_string(a));
    }
  }
  if (o.pass) {
    o.detail = std::to_string(checked) + " matrices with tr >= 0, n in {2,3,4}, " +
               std::to_string(attempts - checked) + " tr < 0 draws skipped";
  }
  return o;
}

bool divisor_chain(const std::vector<Integer>& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 0) return false;
    if (i + 1 < d.size()) {
      if (d[i] == 0 && d[i + 1] != 0) return false;
      if (d[i] != 0 && d[i + 1] % d[i] != 0) return false;
    }
  }
  return true;
}

Outcome ac6() {
  Outcome o;
  Rng rng(1006);
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    const IntMatrix a = testing::random_matrix(rng, 2, 2, -30, 30);
    Integer g = 0;
    for (const auto& x : a.entries()) g = gcd(g, x);
    const Integer d = abs(det(a));
    const std::vector<Integer> expected{g, g == 0 ? Integer(0) : d / g};
    if (smith_normal_form(a).diagonal() != expected) o.fail("2x2 mismatch at " + to_string(a));
  }
  int general = 0;
  for (int trial = 0; trial < 300 && o.pass; ++trial) {
    const std::size_t r = 1 + rng.index(6);
    const std::size_t c = 1 + rng.index(6);
    const IntMatrix a = testing::random_matrix(rng, r, c, -20, 20);
    const SmithDecomposition s = smith_normal_form(a);
    const Integer du = det(s.u);
    const Integer dv = det(s.v);
    bool diagonal = true;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) diagonal = diagonal && (i == j || s.d(i, j) == 0);
    if (s.u * a * s.v != s.d) o.fail("U A V != D");
    if ((du != 1 && du != -1) || (dv != 1 && dv != -1)) o.fail("U or V not unimodular");
    if (!diagonal || !divisor_chain(s.diagonal())) o.fail("D not a divisor chain");
    ++general;
  }
  if (o.pass) o.detail = "1000 gcd-oracle 2x2 cases, " + std::to_string(general) + " up to 6x6";
  return o;
}

Outcome ac7() {
  Outcome o;
  Rng rng(1007);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(4);
    const IntMatrix a = testing::random_matrix(rng, n, n, 0, 5);
    if (!verify_se_witness(a, a, {a, IntMatrix::identity(n), 1})) {
      o.fail("(A, I, 1) rejected for " + to_string(a));
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    const IntMatrix r = testing::random_matrix(rng, 1 + rng.index(4), 1 + rng.index(4), 0, 5);
    const IntMatrix s = testing::random_matrix(rng, r.cols(), r.rows(), 0, 5);
    const IntMatrix a = r * s;
    const IntMatrix b = s * r;
    if (!is_isomorphic(bowen_franks(a), bowen_franks(b))) o.fail("BF differs for SSE pair");
    if (trace_sequence(a, 5) != trace_sequence(b, 5)) o.fail("traces differ for SSE pair");
  }
  const auto witness = search_se_witness(kA2, kA3, 3, 6);
  const auto obstruction = shift_equivalence_obstruction(kA2, kA3);
  if (witness) o.fail("search returned a witness for A2, A3");
  if (!obstruction) o.fail("no invariant obstruction for A2, A3");
  if (o.pass) o.detail = "200 + 200 random cases; A2/A3 obstruction " + *obstruction;
  return o;
}

Outcome ac8() {
  Outcome o;
  if (edge_dilation(IntMatrix{{2}}) != IntMatrix{{1, 1}, {1, 1}}) o.fail("[[2]] not dilated exactly");
  Rng rng(1008);
  for (int trial = 0; trial < 100; ++trial) {
    const IntMatrix a = testing::random_admissible(rng, 1 + rng.index(3), 3);
    const IntMatrix d = edge_dilation(a);
    if (!is_isomorphic(bowen_franks(a), bowen_franks(d))) o.fail("BF moved for " + to_string(a));
    if (trace_sequence(a, 5) != trace_sequence(d, 5)) o.fail("traces moved for " + to_string(a));
  }
  if (o.pass) o.detail = "exact [[2]] case and 100 random matrices";
  return o;
}

Outcome ac9() {
  Outcome o;
  Rng rng(1009);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.index(3);
    const IntMatrix a = random_gl(rng, n);
    const auto [b1, b1_inv] = testing::random_unimodular(rng, n, 1 + rng.index(6));
    const auto [b2, b2_inv] = testing::random_unimodular(rng, n, 1 + rng.index(6));
    const IntMatrix b = b2 * b1;
    const IntMatrix one_step = b * a * unimodular_inverse(b);
    const IntMatrix two_steps = b2 * (b1 * a * b1_inv) * b2_inv;
    const BundleInvariants base = invariants_of(a);
    if (invariants_of(one_step) != invariants_of(two_steps)) o.fail("one vs two steps differ");
    if (invariants_of(one_step) != base) o.fail("composite conjugation moved invariants");
  }
  if (o.pass) o.detail = "200 random triples";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <ckf-binary> <samples-dir>\n";
    return 2;
  }
  const std::string tool = argv[1];
  const std::string samples = argv[2];

  auto guarded = [](auto&& body) {
    try {
      return body();
    } catch (const std::exception& e) {
      Outcome o;
      o.fail(std::string("exception: ") + e.what());
      return o;
    }
  };

  report("AC1", "A1^n family: k0 = Z + Z_n, h1 = Z^2 + Z_n", guarded(ac1));
  report("AC2", "k0(A2) = Z_2 + Z_2, k0(A3) = Z_4, k1 trivial", guarded(ac2));
  report("AC3", "alexander(A2) = alexander(A3) = t^2 - 6t + 1", guarded(ac3));
  report("AC4", "compare verdicts and certificates", guarded([&] { return ac4(tool, samples); }));
  report("AC5", "H1 = Z + K0 on random GL_n(Z), conjugation invariance", guarded(ac5));
  report("AC6", "Smith normal form against oracles", guarded(ac6));
  report("AC7", "shift-equivalence machinery", guarded(ac7));
  report("AC8", "edge dilation", guarded(ac8));
  report("AC9", "conjugation in one step equals two steps", guarded(ac9));

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
