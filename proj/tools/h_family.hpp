#ifndef QMD_TOOLS_H_FAMILY_HPP
#define QMD_TOOLS_H_FAMILY_HPP

// One-parameter family of four mixed qubit states, 0 <= h <= sqrt(2) - 1:
//
//   q = ((1+h)/4, 1/4, 1/4, (1-h)/4)
//   v_1 = (1, 0, -1)/2          v_2 = (1+h)/2 (-1, 0, -1)
//   v_3 = (1-h)/2 (0, 1, 1)     v_4 = (0, -1, 1)/2
//
// At h = 0 the states are equiprobable and form a regular tetrahedron. The
// closed-form guessing probability below is an expected-value generator for
// tests and the sweep command; the solver never calls it.

#include "qmd/bloch.hpp"

namespace qmd::cli {

inline const double kHMax = 0.41421356237309504880;  // sqrt(2) - 1

Ensemble h_family(double h);

/// Piecewise closed form: branch 1 is the four-element regime (small h),
/// branch 2 the three-element regime.
double h_family_closed_form(double h, int branch);

}  // namespace qmd::cli

#endif  // QMD_TOOLS_H_FAMILY_HPP
