#pragma once

namespace eventpulse {

// Hurwitz zeta zeta(s, q) = sum_{k>=0} (q+k)^-s for s > 1, q > 0.
// Euler-Maclaurin evaluation, absolute accuracy around 1e-13 for
// s in (1, 30], q >= 1e-3. Normalizes the discrete power-law pmf
// p(x) = x^-alpha / zeta(alpha, x_min).
double hurwitz_zeta(double s, double q);

} // namespace eventpulse
