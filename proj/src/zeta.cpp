#include "eventpulse/zeta.hpp"

#include <cmath>
#include <stdexcept>

namespace eventpulse {

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0)) throw std::invalid_argument("hurwitz_zeta: s must be > 1");
  if (!(q > 0.0)) throw std::invalid_argument("hurwitz_zeta: q must be > 0");

  // B_{2j}/(2j)! for j = 1..7.
  static constexpr double kBernOverFact[] = {
      1.0 / 12.0,           // B2/2!
      -1.0 / 720.0,         // B4/4!
      1.0 / 30240.0,        // B6/6!
      -1.0 / 1209600.0,     // B8/8!
      1.0 / 47900160.0,     // B10/10!
      -691.0 / 1307674368000.0, // B12/12!
      7.0 / 523069747200.0,     // B14/14!
  };

  const int n = 18;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += std::pow(q + k, -s);
  }
  const double a = q + n;
  sum += std::pow(a, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(a, -s);

  // Correction terms: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * a^{-s-2j+1}.
  double rising = s;           // s^(2j-1) rising factorial
  double apow = std::pow(a, -s - 1.0);
  const double inv_a2 = 1.0 / (a * a);
  for (int j = 0; j < 7; ++j) {
    sum += kBernOverFact[j] * rising * apow;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    apow *= inv_a2;
  }
  return sum;
}

} // namespace eventpulse
