#pragma once

#include <cstddef>
#include <span>

namespace gna {

// Exact sign of p*y_c - q*y_b + (q - p)*y_a for integer offsets p, q
// (|p|, |q| < 2^53) and finite doubles. Uses error-free products and
// expansion summation, so the answer is exact for all inputs that do not
// overflow.
int exact_sign(double p, double q, double y_a, double y_b, double y_c);

/// True iff the point at index c lies strictly below the segment joining
/// (a, y[a]) and (b, y[b]), for a < c < b. This is the visibility criterion
/// with both sides multiplied by (b - a) > 0, evaluated exactly.
inline bool strictly_below(std::span<const double> y, std::size_t a, std::size_t c, std::size_t b) {
  const double p = static_cast<double>(b - a);
  const double q = static_cast<double>(c - a);
  return exact_sign(p, q, y[a], y[b], y[c]) < 0;
}

} // namespace gna
