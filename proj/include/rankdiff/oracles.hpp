#pragma once

#include "rankdiff/finite_law.hpp"

namespace rankdiff {

// Direct numerical evaluation of E[exp(s z_1 + t z_2)] under the n-particle
// stationary law for n in {2, 3}: the zero-sum hyperplane is parameterised
// by the free coordinates, the unnormalised order-statistics density is
// integrated by adaptive quadrature, and the result is normalised by the
// (0,0) value.  Deliberately independent of the closed-form product route.
double laplace_by_quadrature(const FiniteLaw& law, double s, double t,
                             double rel_tol = 1e-9);

}  // namespace rankdiff
