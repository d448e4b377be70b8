#pragma once

// Hyperbolic geometry of the thrice-punctured sphere P^1 \ {0,1,inf},
// evaluated through the modular lambda function: AGM-based complete
// elliptic integrals give tau(w), theta series give lambda and its
// derivative, and the complete curvature -1 metric follows.

#include <complex>

namespace wpc::tps {

using cplx = std::complex<double>;

// Arithmetic-geometric mean of positive reals. Quadratic convergence,
// stops at 1e-15 relative agreement.
double agm(double a, double b);

// Optimal-branch complex AGM (square roots chosen with Re >= 0,
// ties broken toward the previous iterate).
cplx agm(cplx a, cplx b);

// Complete elliptic integral K(k) = pi / (2 agm(1, sqrt(1-k^2))), 0 <= k < 1.
double elliptic_k(double k);

struct Thetas {
  cplx t2, t3, t4;  // theta_{2,3,4}(0 | tau), nome q = exp(i pi tau)
};

// q-series with terms summed until below 1e-16.
Thetas theta_functions(cplx tau);

// lambda(tau) = theta2^4 / theta3^4.
cplx lambda_of_tau(cplx tau);

// d lambda / d tau = i pi lambda (1-lambda) theta3(tau)^4.
cplx lambda_prime(cplx tau);

// Principal uniformizing parameter: tau(w) with Im tau > 0 and
// lambda(tau(w)) = w. On (0,1) this is i K(sqrt(1-w)) / K(sqrt(w));
// general w is reduced by the group generated by w -> 1-w, w -> 1/w
// and conjugation before the AGM evaluation.
cplx tau_of_lambda(cplx w);

// Area density of the complete hyperbolic metric g = density(w) |dw|^2:
// density = 1 / ((Im tau)^2 |lambda'(tau)|^2). Curvature -1, cusps at
// 0, 1, inf with density ~ 1/(|w| log(16/|w|))^2 as w -> 0.
double density(cplx w);

// Poincare (length) density 1/(Im tau |lambda'|) = sqrt(density).
// Satisfies rho(1-w) = rho(w), rho(1/w) = |w|^2 rho(w),
// rho(1/2) = 4 Gamma(3/4)^4 / pi^2.
double poincare_density(cplx w);

// Guard radius below which direct evaluation near a puncture is refused
// (cusp-model substitution happens in callers that need it).
inline constexpr double puncture_guard = 1e-8;

}  // namespace wpc::tps
