#pragma once

// Chebyshev collocation helpers on [0, 1]: first-kind nodes, barycentric
// interpolation, Fejer quadrature, coefficient transforms and truncated
// branch-series tail moments.

#include <complex>
#include <vector>

namespace rpfcone::cheb {

using Complex = std::complex<double>;

// Chebyshev points of the first kind mapped to (0,1), strictly increasing.
std::vector<double> nodes01(int n);

// Barycentric weights matching nodes01(n) (up to a common factor).
std::vector<double> bary_weights(int n);

// Fejer-1 quadrature weights on [0,1] for nodes01(n); sum to 1.
std::vector<double> quad_weights(int n);

// Barycentric evaluation of the interpolant of `values` at x in [0,1].
Complex bary_eval(const std::vector<double>& nodes, const std::vector<double>& w,
                  const std::vector<Complex>& values, double x);

// Values at nodes01(n) -> Chebyshev coefficients (in the mapped variable
// t = 2x - 1). Exact interpolation transform for first-kind points.
std::vector<Complex> coeffs(const std::vector<Complex>& values);

// Coefficient recurrence for the derivative with respect to x on [0,1]
// (includes the dt/dx = 2 chain factor).
std::vector<Complex> derivative_coeffs(const std::vector<Complex>& c);

// Clenshaw evaluation of a Chebyshev series at x in [0,1].
Complex clenshaw(const std::vector<Complex>& c, double x);

// Rows r_0..r_max_order such that r_m . values = (d/dx)^m p(x0) of the nodal
// interpolant. Used for rank-correction of truncated branch sums.
std::vector<std::vector<double>> derivative_rows(int n, double x0, int max_order);

// S_kappa(a) = sum_{m >= 0} (a + m)^(-kappa): Hurwitz zeta(kappa, a) via
// Euler-Maclaurin, valid for Re(kappa) > 1 and a >= 1.
Complex hurwitz_zeta(Complex kappa, double a);

}  // namespace rpfcone::cheb
