#include "wpcollar/collar_models.hpp"

#include <cmath>
#include <stdexcept>

namespace wpc::collar {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ilog(double x) {
  if (!(x > 0.0) || !(x < 1.0)) throw std::invalid_argument("ilog: need 0 < x < 1");
  return 1.0 / std::log(1.0 / x);
}

CollarCoords CollarCoords::from_tz(cplx t, cplx z) {
  const double at = std::abs(t), az = std::abs(z);
  if (!(at > 0.0) || !(at < 1.0)) throw std::domain_error("CollarCoords: need 0 < |t| < 1");
  if (!(az > at) || !(az < 1.0)) throw std::domain_error("CollarCoords: need |t| < |z| < 1");
  CollarCoords c;
  c.t = t;
  c.z = z;
  c.s = ilog(at);
  c.r = ilog(az);
  c.w = c.r / c.s;
  c.theta = std::arg(z);
  c.theta_t = std::arg(t);
  return c;
}

cplx CollarCoords::z_from(double s, double w, double theta) {
  // r = w s, |z| = exp(-1/r)
  const double r = w * s;
  return std::polar(std::exp(-1.0 / r), theta);
}

double plumbing_density(cplx t, cplx z) {
  const double at = std::abs(t), az = std::abs(z);
  if (!(at > 0.0) || !(at < 1.0)) throw std::domain_error("plumbing_density: need 0 < |t| < 1");
  if (!(az > at) || !(az < 1.0))
    throw std::domain_error("plumbing_density: z outside annulus |t| < |z| < 1");
  const double s = ilog(at), r = ilog(az);
  const double sn = std::sin(kPi * s / r);
  return kPi * kPi * s * s / (az * az * sn * sn);
}

double cusp_density(cplx z) {
  const double az = std::abs(z);
  if (!(az > 0.0) || !(az < 1.0)) throw std::domain_error("cusp_density: need 0 < |z| < 1");
  const double L = std::log(1.0 / az);
  return 1.0 / (az * az * L * L);
}

const Chart& ConformalMetricField::chart(const std::string& id) const {
  for (const auto& c : charts)
    if (c.id == id) return c;
  throw std::invalid_argument("ConformalMetricField: unknown chart " + id);
}

namespace {

double flat_laplacian_log(const DensityFn& h, cplx p, double d) {
  const double c = std::log(h(p));
  const double xp = std::log(h(p + cplx(d, 0.0)));
  const double xm = std::log(h(p - cplx(d, 0.0)));
  const double yp = std::log(h(p + cplx(0.0, d)));
  const double ym = std::log(h(p - cplx(0.0, d)));
  return (xp + xm + yp + ym - 4.0 * c) / (d * d);
}

}  // namespace

double gaussian_curvature(const DensityFn& h, cplx p, double step, bool richardson) {
  if (!(step > 0.0)) throw std::invalid_argument("gaussian_curvature: step must be positive");
  const double hp = h(p);
  if (!(hp > 0.0)) throw std::domain_error("gaussian_curvature: density not positive");
  const double k1 = -flat_laplacian_log(h, p, step) / (2.0 * hp);
  if (!richardson) return k1;
  const double k2 = -flat_laplacian_log(h, p, step / 2.0) / (2.0 * hp);
  return (4.0 * k2 - k1) / 3.0;
}

double conformal_curvature(const DensityFn& h0, const std::function<double(cplx)>& f, cplx p,
                           double step, bool richardson) {
  if (!(step > 0.0)) throw std::invalid_argument("conformal_curvature: step must be positive");
  const double h = h0(p);
  if (!(h > 0.0)) throw std::domain_error("conformal_curvature: density not positive");
  auto lap_f = [&](double d) {
    return (f(p + cplx(d, 0.0)) + f(p - cplx(d, 0.0)) + f(p + cplx(0.0, d)) +
            f(p - cplx(0.0, d)) - 4.0 * f(p)) /
           (d * d);
  };
  const double k0 = gaussian_curvature(h0, p, step, richardson);
  double lf = lap_f(step);
  if (richardson) lf = (4.0 * lap_f(step / 2.0) - lf) / 3.0;
  // Lap_{h0} f = -(1/h0) flat Laplacian f
  return std::exp(-2.0 * f(p)) * (k0 - lf / h);
}

ModelLaplacianCoeffs model_laplacian_coeffs(Face face, double s, double coord) {
  ModelLaplacianCoeffs c{};
  c.face = face;
  if (face == Face::I) {
    const double s_w = coord;
    if (!(s_w > 0.0)) throw std::domain_error("model_laplacian_coeffs: need s_w > 0");
    const double x = kPi * s / s_w;
    const double pre = (x == 0.0) ? 1.0 : std::pow(std::sin(x) / x, 2);
    c.prefactor = pre;
    c.second = -pre;           // (s_w d/ds_w)^2
    c.first = -pre;            // s_w d/ds_w
    c.angular = -pre / (s_w * s_w);
    // zero mode of Lap_I + 2 at s_w = 0: -(a^2 + a) + 2 = 0
    c.indicial_roots[0] = 1.0;
    c.indicial_roots[1] = -2.0;
  } else {
    const double rho = coord;
    if (!(rho >= 0.0)) throw std::domain_error("model_laplacian_coeffs: need rho_z >= 0");
    const double x = kPi / (1.0 + rho);
    const double pre = std::pow(std::sin(x) / x, 2);
    c.prefactor = pre;
    c.second = -pre * (1.0 + rho) * (1.0 + rho);  // d^2/drho^2
    c.first = -pre * 2.0 * (1.0 + rho);           // d/drho
    c.angular = -pre / (s * s * (1.0 + rho) * (1.0 + rho));
    // reduced zero mode (conjugated by the neck defining function): roots 0, 3
    c.indicial_roots[0] = 0.0;
    c.indicial_roots[1] = 3.0;
  }
  return c;
}

}  // namespace wpc::collar
