#pragma once

// Exact model geometry of the plumbing collar: logarithmic coordinates,
// plumbing and cusp metric densities, conformal curvature evaluation and
// the model Laplacian coefficient functions at the two boundary faces.

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace wpc::collar {

using cplx = std::complex<double>;

inline constexpr double s_max = 0.3;  // collar asymptotic regime bound

// ilog x = 1/log(1/x) on (0,1); strictly increasing, -> 0 as x -> 0+.
double ilog(double x);

// Logarithmic collar coordinates of a point z in the annulus |t| < |z| < 1.
struct CollarCoords {
  cplx t, z;
  double s;        // ilog|t|
  double r;        // ilog|z|
  double w;        // r/s in (1, 1/s)
  double theta;    // arg z
  double theta_t;  // arg t

  static CollarCoords from_tz(cplx t, cplx z);
  // Rebuild z from (s, w, theta) given arg t.
  static cplx z_from(double s, double w, double theta);
};

// Plumbing density h(z) = pi^2 s^2 / (|z|^2 sin^2(pi s / r)), the area
// density of the complete hyperbolic metric of the annulus |t| < |z| < 1.
// Theta-independent and invariant under z -> t/z (as a density).
double plumbing_density(cplx t, cplx z);

// Cusp density 1/(|z| log(1/|z|))^2 on the punctured disk.
double cusp_density(cplx z);

// A conformal metric given per chart as a positive area density
// (metric = density * |chart differential|^2).
struct Chart {
  std::string id;
  std::function<bool(cplx)> contains;
  std::function<double(cplx)> density;
};

struct Transition {
  std::string from, to;
  std::function<cplx(cplx)> map;        // coordinate change
  std::function<cplx(cplx)> derivative; // its complex derivative
};

struct ConformalMetricField {
  std::vector<Chart> charts;
  std::vector<Transition> transitions;

  const Chart& chart(const std::string& id) const;
};

using DensityFn = std::function<double(cplx)>;

// Gaussian curvature -(1/(2h)) (flat Laplacian of log h) by centered
// 5-point finite differences with the given step; optional one level of
// Richardson extrapolation (error O(step^2) -> O(step^4)).
double gaussian_curvature(const DensityFn& h, cplx p, double step, bool richardson = false);

// Curvature of e^{2f} h0: e^{-2f} (K(h0) + Lap_{h0} f) with
// Lap_{h0} = -(1/h0) * flat Laplacian, via the same stencils.
double conformal_curvature(const DensityFn& h0, const std::function<double(cplx)>& f, cplx p,
                           double step, bool richardson = false);

// Coefficient functions of the model Laplacians at the two boundary faces.
//
//  face I  (cusp surface, variables (s_w, theta_w)):
//    Lap_I = -prefactor(s_w) [ (s_w d/ds_w)^2 + s_w d/ds_w + s_w^{-2} d^2/dtheta^2 ],
//    prefactor = sin^2(pi s / s_w) / (pi s / s_w)^2
//  face II (neck cylinder, variables (rho_z, theta)):
//    Lap_II = -prefactor(rho_z) [ (1+rho_z)^2 d^2/drho^2 + 2(1+rho_z) d/drho
//                                 + d^2/dtheta^2 / (s^2 (1+rho_z)^2) ],
//    prefactor = sin^2(pi/(1+rho_z)) / (pi/(1+rho_z))^2
enum class Face { I, II };

struct ModelLaplacianCoeffs {
  Face face;
  double prefactor;      // the sin^2 ratio at the evaluation point
  double second, first;  // coefficients of the displayed radial derivatives
  double angular;        // coefficient of d^2/dtheta^2
  // zero-mode indicial data at the face (roots of the indicial polynomial
  // of the displayed operator + 2, reduced as in the text for face II)
  double indicial_roots[2];
};

// face I: point = (s, s_w); face II: point = (s, rho_z).
ModelLaplacianCoeffs model_laplacian_coeffs(Face face, double s, double coord);

}  // namespace wpc::collar
