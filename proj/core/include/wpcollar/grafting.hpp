#pragma once

// The degenerating four-punctured-sphere family P^1 \ {0, t, 1, inf} and its
// approximately hyperbolic background metric: the exact component metrics
// melded through the exact annulus (plumbing) metric with matched cusp
// widths. The meld is algebraic (no cutoff annuli): writing V, W for the
// radial cusp depths of the two node sides,
//
//   h0 = rho_A rho_B |z|^2 pi^2 V^2 W^2 / (sigma^2 sin^2(pi V / sigma)),
//   sigma = V + W,
//
// which is the exact hyperbolic annulus metric in the collar core and each
// exact component metric up to a smooth 1 + O(s_hat^2 V^2) factor in the
// bulks. Its curvature is available in closed form given the component
// densities, so the curvature defect is cheap to scan.

#include <complex>
#include <functional>

#include "wpcollar/collar_models.hpp"

namespace wpc::graft {

using cplx = std::complex<double>;

inline constexpr double t_max_abs = 0.03567399334725241;  // e^{-1/0.3}

struct PlumbingFamily {
  cplx t;          // plumbing parameter = moving puncture, 0 < |t| <= t_max
  double s;        // ilog |t|
  double s_hat;    // normalized collar scale 1/(log(1/|t|) + log 256)
  double sigma0;   // 1/s_hat = log(256/|t|)
  double theta_t;  // arg t

  static PlumbingFamily from_t(cplx t);
  static PlumbingFamily from_s(double s, double theta_t = 0.0);

  // chart transitions: component B is the rescaled chart zeta = z / t,
  // node coordinate pair (z, w = t/z) with z w = t exactly.
  cplx to_zeta(cplx z) const { return z / t; }
  cplx from_zeta(cplx zeta) const { return zeta * t; }
  cplx involution(cplx z) const { return t / z; }

  // punctures in the z chart
  std::array<cplx, 3> finite_punctures() const { return {cplx(0.0), t, cplx(1.0)}; }
};

// Radial capped cusp-depth profile: exactly log(16/x) for x <= 0.45, then
// C^3-decays to zero (flat by x = 0.45 e^{2 log(16/0.45)} >> 1).
double depth_profile(double x);
double depth_profile_d1(double x);   // d/dy at y = log x
double depth_profile_d2(double x);

// Meld depths at z: V = depth of the component-A node cusp (z = 0 side),
// W = depth of the component-B node cusp (w = t/z side).
double depth_V(const PlumbingFamily& fam, cplx z);
double depth_W(const PlumbingFamily& fam, cplx z);

// Component hyperbolic area densities in the z chart.
double component_A_density(cplx z);                            // tps in z
double component_B_density(const PlumbingFamily& fam, cplx z); // tps in z/t

// The melded background density h0 (area density in the z chart).
double grafted_density(const PlumbingFamily& fam, cplx z);

// Exact radial collar model pi^2 / (|z|^2 sigma0^2 sin^2(pi v / sigma0)),
// v = log(16/|z|): the hyperbolic metric of the width-matched annulus.
double collar_model_density(const PlumbingFamily& fam, cplx z);

// Closed-form Gaussian curvature of the melded metric (uses the exactness
// of the component metrics; the only numerics are the two tps densities).
double grafted_curvature(const PlumbingFamily& fam, cplx z);

// Scan sup |K + 1| over the fiber; returns the sup and its location.
struct DefectScan {
  double sup_defect;
  cplx argmax;
  double collar_core_defect;  // |K+1| at |z| = sqrt|t|
  double bulk_defect;         // max |K+1| sampled at |z| in [1.5, 3]
};
DefectScan curvature_defect_scan(const PlumbingFamily& fam, int n_radial = 220, int n_theta = 16);

// Fiber integration of f against an area density: int f(z) h(z) dA_flat
// over the whole fiber, decomposed into six log-polar subcharts with a
// smooth radial partition of unity.
struct QuadResult {
  double value;
  double err_est;  // relative, from half-resolution comparison + cusp tails
};

struct QuadOptions {
  int n_radial = 160;   // per subchart
  int n_angular = 96;
  double cusp_depth = 8.0;  // truncation depth (in log units) at the cusps
};

QuadResult fiber_quadrature(const PlumbingFamily& fam, const std::function<double(cplx)>& f,
                            const std::function<double(cplx)>& area_density,
                            const QuadOptions& opts = {});

}  // namespace wpc::graft
