#include "gna/exact_predicate.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace gna {

namespace {

struct TwoTerm {
  double hi;
  double lo;
};

TwoTerm two_product(double a, double b) {
  const double hi = a * b;
  return {hi, std::fma(a, b, -hi)};
}

TwoTerm two_sum(double a, double b) {
  const double s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  return {s, (a - av) + (b - bv)};
}

} // namespace

int exact_sign(double p, double q, double y_a, double y_b, double y_c) {
  const double t1 = p * y_c;
  const double t2 = -q * y_b;
  const double t3 = (q - p) * y_a;
  const double approx = t1 + t2 + t3;
  // Three rounded products and two rounded additions: error < 3u * sum|t|.
  // 8u leaves ample slack.
  constexpr double u = std::numeric_limits<double>::epsilon() / 2;
  const double bound = 8.0 * u * (std::abs(t1) + std::abs(t2) + std::abs(t3));
  if (approx > bound) return 1;
  if (approx < -bound) return -1;

  const TwoTerm products[3] = {two_product(p, y_c), two_product(-q, y_b), two_product(q - p, y_a)};
  std::array<double, 6> terms{};
  for (int i = 0; i < 3; ++i) {
    terms[2 * i] = products[i].lo;
    terms[2 * i + 1] = products[i].hi;
  }

  // Grow a nonoverlapping expansion one term at a time (Shewchuk's
  // GROW-EXPANSION). Components end up ordered by increasing magnitude.
  std::array<double, 7> expansion{};
  std::size_t len = 0;
  for (double term : terms) {
    double carry = term;
    for (std::size_t i = 0; i < len; ++i) {
      const TwoTerm s = two_sum(carry, expansion[i]);
      expansion[i] = s.lo;
      carry = s.hi;
    }
    expansion[len++] = carry;
  }
  for (std::size_t i = len; i-- > 0;) {
    if (expansion[i] > 0) return 1;
    if (expansion[i] < 0) return -1;
  }
  return 0;
}

} // namespace gna
