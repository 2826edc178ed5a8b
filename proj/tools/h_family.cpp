#include "h_family.hpp"

#include <cmath>
#include <stdexcept>

namespace qmd::cli {

Ensemble h_family(double h) {
  return Ensemble({
      {(1.0 + h) / 4.0, Vec3(1.0, 0.0, -1.0) / 2.0},
      {1.0 / 4.0, (1.0 + h) / 2.0 * Vec3(-1.0, 0.0, -1.0)},
      {1.0 / 4.0, (1.0 - h) / 2.0 * Vec3(0.0, 1.0, 1.0)},
      {(1.0 - h) / 4.0, Vec3(0.0, -1.0, 1.0) / 2.0},
  });
}

double h_family_closed_form(double h, int branch) {
  const double h2 = h * h, h3 = h2 * h, h4 = h3 * h, h5 = h4 * h, h6 = h5 * h, h7 = h6 * h, h8 = h7 * h;
  if (branch == 1) {
    const double num = 1.0 - 4.0 * h2 + 2.0 * h3 + 12.0 * h4 + 4.0 * h5 - h6 + 2.0 * h7 + 2.0 * h8;
    const double den = 4.0 * h * (2.0 - h - 10.0 * h2 - 2.0 * h3 + 2.0 * h4 - h5 - 2.0 * h6) +
                       4.0 * (1.0 - h2) * std::sqrt(2.0 - 10.0 * h2 + 5.0 * h4 - h8);
    return 0.25 + h / 4.0 + num / den;
  }
  if (branch == 2) {
    const double num = 9.0 + 18.0 * h + h2 - 8.0 * h3 + 13.0 * h4 + 6.0 * h5 + h6;
    const double den = 8.0 * h * (7.0 + 10.0 * h - 6.0 * h2 - 2.0 * h3 - h4) +
                       8.0 * (1.0 + h) * std::sqrt((1.0 + 2.0 * h) * (9.0 - h4) * (5.0 - 2.0 * h + h2));
    return 0.25 + h / 4.0 + num / den;
  }
  throw std::invalid_argument("branch must be 1 or 2");
}

}  // namespace qmd::cli
