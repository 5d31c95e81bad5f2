// Two solvmanifold torus bundles with the same Alexander polynomial that the
// K0 group of the associated Cuntz-Krieger algebra tells apart.

#include <iostream>

#include "ckf/ckf.hpp"

int main() {
  using namespace ckf;

  const TorusBundle m2(IntMatrix{{5, 2}, {2, 1}});
  const TorusBundle m3(IntMatrix{{5, 1}, {4, 1}});

  std::cout << "Alexander polynomials: " << format_polynomial(alexander_polynomial(m2))
            << " and " << format_polynomial(alexander_polynomial(m3)) << '\n';
  std::cout << "K0: " << format_group(ck_functor(m2).k0) << " and "
            << format_group(ck_functor(m3).k0) << '\n';
  std::cout << "H1: " << format_group(h1(m2)) << " and " << format_group(h1(m3)) << '\n';

  const ComparisonVerdict v = compare_bundles(m2, m3, 4);
  std::cout << to_string(v.outcome) << ": " << v.witness << '\n';
  return v.outcome == ComparisonVerdict::Outcome::Distinct ? 0 : 1;
}
