#include "wpcollar/grafting.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "wpcollar/tps.hpp"

namespace wpc::graft {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog16 = 2.7725887222397811;

// Profile knots: exact zone ends at |z| = 0.45, the depth then C^3-decays
// to zero with unit-bounded derivatives (integral of a septic smoothstep).
constexpr double kY1 = -0.79850769621777162;        // log 0.45
constexpr double kV1 = kLog16 - kY1;                // 3.5710964184575527
constexpr double kL = 2.0 * kV1;

double step7(double t) {  // septic smoothstep, C^3 at both ends
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double t4 = t * t * t * t;
  return t4 * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

double step7_int(double t) {  // int_0^t step7
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return t - 0.5;
  const double t5 = t * t * t * t * t;
  return t5 * (7.0 - 14.0 * t + 10.0 * t * t - 2.5 * t * t * t);
}

double step7_d(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = t * (1.0 - t);
  return 140.0 * a * a * a;
}

double profile_y(double y) {
  if (y <= kY1) return kLog16 - y;
  const double tau = (y - kY1) / kL;
  if (tau >= 1.0) return 0.0;
  return kV1 - kL * (tau - step7_int(tau));
}

double profile_y_d1(double y) {
  if (y <= kY1) return -1.0;
  const double tau = (y - kY1) / kL;
  if (tau >= 1.0) return 0.0;
  return -(1.0 - step7(tau));
}

double profile_y_d2(double y) {
  if (y <= kY1) return 0.0;
  const double tau = (y - kY1) / kL;
  if (tau >= 1.0) return 0.0;
  return step7_d(tau) / kL;
}

// 1/tau - cot(tau) and its derivative, regular through tau = 0.
double cotdef(double tau) {
  if (std::abs(tau) < 1e-3) {
    const double t2 = tau * tau;
    return tau / 3.0 + tau * t2 / 45.0 + 2.0 * tau * t2 * t2 / 945.0;
  }
  return 1.0 / tau - std::cos(tau) / std::sin(tau);
}

double cotdef_d(double tau) {
  if (std::abs(tau) < 1e-3) {
    const double t2 = tau * tau;
    return 1.0 / 3.0 + t2 / 15.0 + 2.0 * t2 * t2 / 189.0;
  }
  const double s = std::sin(tau);
  return 1.0 / (s * s) - 1.0 / (tau * tau);
}

// pi xi / sin(pi xi), regular at 0.
double usin(double xi) {
  const double t = kPi * xi;
  if (std::abs(t) < 1e-4) return 1.0 + t * t / 6.0;
  return t / std::sin(t);
}

struct MeldState {
  double V, W, Vp, Wp, Vpp, Wpp;  // depths and x-derivatives
  double sigma, xi;
};

MeldState meld_state(const PlumbingFamily& fam, std::complex<double> z) {
  const double x = std::log(std::abs(z));
  const double xb = std::log(std::abs(fam.t)) - x;  // log|t/z|
  MeldState m;
  m.V = profile_y(x);
  m.Vp = profile_y_d1(x);
  m.Vpp = profile_y_d2(x);
  m.W = profile_y(xb);
  m.Wp = -profile_y_d1(xb);
  m.Wpp = profile_y_d2(xb);
  m.sigma = m.V + m.W;
  m.xi = m.V / m.sigma;
  return m;
}

}  // namespace

PlumbingFamily PlumbingFamily::from_t(cplx t) {
  const double at = std::abs(t);
  if (!(at > 0.0) || at > t_max_abs * (1.0 + 1e-12))
    throw std::invalid_argument("PlumbingFamily: need 0 < |t| <= e^{-1/0.3}");
  PlumbingFamily f;
  f.t = t;
  f.s = 1.0 / std::log(1.0 / at);
  f.sigma0 = std::log(256.0 / at);
  f.s_hat = 1.0 / f.sigma0;
  f.theta_t = std::arg(t);
  return f;
}

PlumbingFamily PlumbingFamily::from_s(double s, double theta_t) {
  if (!(s > 0.0) || s > collar::s_max + 1e-12)
    throw std::invalid_argument("PlumbingFamily: need 0 < s <= 0.3");
  return from_t(std::polar(std::exp(-1.0 / s), theta_t));
}

double depth_profile(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("depth_profile: radius must be positive");
  return profile_y(std::log(x));
}
double depth_profile_d1(double x) { return profile_y_d1(std::log(x)); }
double depth_profile_d2(double x) { return profile_y_d2(std::log(x)); }

double depth_V(const PlumbingFamily& fam, cplx z) {
  (void)fam;
  return profile_y(std::log(std::abs(z)));
}

double depth_W(const PlumbingFamily& fam, cplx z) {
  return profile_y(std::log(std::abs(fam.t)) - std::log(std::abs(z)));
}

double component_A_density(cplx z) { return tps::density(z); }

double component_B_density(const PlumbingFamily& fam, cplx z) {
  const double at2 = std::norm(fam.t);
  return tps::density(z / fam.t) / at2;
}

double grafted_density(const PlumbingFamily& fam, cplx z) {
  const MeldState m = meld_state(fam, z);
  const double rhoA = component_A_density(z);
  const double rhoB = component_B_density(fam, z);
  // Xi = pi^2 V^2 W^2 / (sigma^2 sin^2(pi xi)), in overflow-safe form
  double Xi;
  if (m.xi <= 0.5) {
    const double u = usin(m.xi);
    Xi = m.W * m.W * u * u;
  } else {
    const double u = usin(1.0 - m.xi);
    Xi = m.V * m.V * u * u;
  }
  return rhoA * rhoB * std::norm(z) * Xi;
}

double collar_model_density(const PlumbingFamily& fam, cplx z) {
  const double v = kLog16 - std::log(std::abs(z));
  const double arg = kPi * v / fam.sigma0;
  if (!(arg > 0.0) || !(arg < kPi))
    throw std::domain_error("collar_model_density: z outside the matched annulus");
  const double sn = std::sin(arg);
  return kPi * kPi / (std::norm(z) * fam.sigma0 * fam.sigma0 * sn * sn);
}

double grafted_curvature(const PlumbingFamily& fam, cplx z) {
  const MeldState m = meld_state(fam, z);
  const double rhoA = component_A_density(z);
  const double rhoB = component_B_density(fam, z);
  const double sp = m.Vp + m.Wp;
  const double xip = (m.Vp * m.W - m.V * m.Wp) / (m.sigma * m.sigma);
  const double xipp =
      (m.Vpp * m.W - m.V * m.Wpp) / (m.sigma * m.sigma) - 2.0 * xip * sp / m.sigma;

  double Tpp, Xi;
  if (m.xi <= 0.5) {
    // T = 2 log W + 2 log u(xi)
    Tpp = 2.0 * (m.Wpp * m.W - m.Wp * m.Wp) / (m.W * m.W) +
          2.0 * kPi * (cotdef(kPi * m.xi) * xipp + kPi * cotdef_d(kPi * m.xi) * xip * xip);
    const double u = usin(m.xi);
    Xi = m.W * m.W * u * u;
  } else {
    // T = 2 log V + 2 log u(1 - xi)
    Tpp = 2.0 * (m.Vpp * m.V - m.Vp * m.Vp) / (m.V * m.V) -
          2.0 * kPi * cotdef(kPi * (1.0 - m.xi)) * xipp +
          2.0 * kPi * kPi * cotdef_d(kPi * (1.0 - m.xi)) * xip * xip;
    const double u = usin(1.0 - m.xi);
    Xi = m.V * m.V * u * u;
  }
  const double h0 = rhoA * rhoB * std::norm(z) * Xi;
  return -(rhoA + rhoB + 0.5 * Tpp / std::norm(z)) / h0;
}

DefectScan curvature_defect_scan(const PlumbingFamily& fam, int n_radial, int n_theta) {
  DefectScan out{0.0, cplx(0.0), 0.0, 0.0};
  const double x_lo = 0.5 * std::log(std::abs(fam.t));
  const double x_hi = std::log(3.2);
  for (int i = 0; i <= n_radial; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / n_radial;
    for (int j = 0; j < n_theta; ++j) {
      const double th = 2.0 * kPi * (j + 0.21) / n_theta;  // avoid the puncture ray
      const cplx z = std::polar(std::exp(x), th);
      if (std::abs(z - cplx(1.0)) < 0.04 || std::abs(z - fam.t) < 0.04 * std::abs(fam.t))
        continue;
      const double d = std::abs(grafted_curvature(fam, z) + 1.0);
      if (d > out.sup_defect) {
        out.sup_defect = d;
        out.argmax = z;
      }
      if (std::exp(x) >= 1.5 && std::exp(x) <= 3.0) out.bulk_defect = std::max(out.bulk_defect, d);
    }
  }
  const cplx zc = std::polar(std::sqrt(std::abs(fam.t)), fam.theta_t / 2.0 + 0.37);
  out.collar_core_defect = std::abs(grafted_curvature(fam, zc) + 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// fiber quadrature
// ---------------------------------------------------------------------------

namespace {

double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double ramp_up(double x, double a, double b) { return smoothstep5((x - a) / (b - a)); }

struct GL5 {
  static constexpr double node[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                     0.5384693101056831, 0.9061798459386640};
  static constexpr double weight[5] = {0.2369268850561891, 0.4786286704993665,
                                       0.5688888888888889, 0.4786286704993665,
                                       0.2369268850561891};
};

// Integral over a log-polar annulus chart around `center`:
//   int F(z) e^{2y} dy dphi,  z = center + e^{y + i phi},  y in [y_lo, y_hi].
// Gauss-Legendre panels radially, trapezoid in angle. If `invert`, the chart
// variable is u with z = 1/u and the Jacobian factor e^{-2y} is used.
double logpolar_integral(const std::function<double(std::complex<double>)>& F,
                         std::complex<double> center, double y_lo, double y_hi, bool invert,
                         int nr, int na, double* tail_ratio) {
  const int panels = std::max(4, nr / 5);
  const double hp = (y_hi - y_lo) / panels;
  double total = 0.0;
  double first_ring = 0.0, second_ring = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = y_lo + (p + 0.5) * hp;
    double panel_sum = 0.0;
    for (int g = 0; g < 5; ++g) {
      const double y = mid + 0.5 * hp * GL5::node[g];
      double ring = 0.0;
      for (int j = 0; j < na; ++j) {
        const double phi = 2.0 * kPi * j / na;
        const std::complex<double> e = std::polar(std::exp(y), phi);
        const std::complex<double> z = invert ? 1.0 / e : center + e;
        const double jac = invert ? std::exp(-2.0 * y) : std::exp(2.0 * y);
        ring += F(z) * jac;
      }
      ring *= 2.0 * kPi / na;
      panel_sum += 0.5 * hp * GL5::weight[g] * ring;
      if (p == 0 && g == 0) first_ring = std::abs(ring);
      if (p == 0 && g == 1) second_ring = std::abs(ring);
    }
    total += panel_sum;
  }
  if (tail_ratio) {
    // geometric decay estimate toward y_lo (the cusp end)
    *tail_ratio = second_ring > 0.0 ? first_ring / second_ring : 0.0;
    if (first_ring == 0.0) *tail_ratio = 0.0;
  }
  return total;
}

struct ChartSpec {
  std::function<double(std::complex<double>)> F;  // weighted integrand in chart plane
  std::complex<double> center;
  double y_lo, y_hi;
  bool invert;
  bool has_cusp_tail;
};

}  // namespace

QuadResult fiber_quadrature(const PlumbingFamily& fam, const std::function<double(cplx)>& f,
                            const std::function<double(cplx)>& area_density,
                            const QuadOptions& opts) {
  const double c0 = 0.45, d1 = 0.35, D = 2.4;
  const double at = std::abs(fam.t);
  const cplx t = fam.t;

  auto FA = [&](cplx z) { return f(z) * area_density(z); };

  // radial partition of the fiber into neck / A-bulk / B-bulk
  auto PA = [&](cplx z) { return ramp_up(std::log(std::abs(z)), std::log(0.75 * c0), std::log(c0)); };
  auto PB = [&](cplx z) {
    const double xz = std::log(std::abs(z / t));
    return 1.0 - ramp_up(xz, std::log(1.0 / c0), std::log(1.0 / (0.75 * c0)));
  };
  auto Pneck = [&](cplx z) { return 1.0 - PA(z) - PB(z); };

  // A-bulk subdivision: puncture-1 disk, infinity disk, core
  auto w1 = [&](cplx z) {
    return 1.0 - ramp_up(std::log(std::abs(z - cplx(1.0))), std::log(0.8 * d1), std::log(d1));
  };
  auto winf = [&](cplx z) { return ramp_up(std::log(std::abs(z)), std::log(0.8 * D), std::log(D)); };

  // B-bulk (zeta = z/t plane) subdivision: puncture-0 disk, puncture-1 disk, core
  auto w0z = [&](cplx zeta) {
    return 1.0 - ramp_up(std::log(std::abs(zeta)), std::log(0.8 * d1), std::log(d1));
  };
  auto w1z = [&](cplx zeta) {
    return 1.0 - ramp_up(std::log(std::abs(zeta - cplx(1.0))), std::log(0.8 * d1), std::log(d1));
  };

  const double at2 = at * at;
  auto FB = [&](cplx zeta) { return FA(t * zeta) * at2; };  // dA_z = |t|^2 dA_zeta

  std::vector<ChartSpec> charts;
  // neck annulus (z chart, centered at 0)
  charts.push_back({[&](cplx z) { return FA(z) * Pneck(z); }, cplx(0.0),
                    std::log(at / c0) - 0.3, std::log(c0), false, false});
  // A core annulus
  charts.push_back({[&](cplx z) { return FA(z) * PA(z) * (1.0 - w1(z) - winf(z)); }, cplx(0.0),
                    std::log(0.7 * c0), std::log(D), false, false});
  // A puncture-1 disk
  charts.push_back({[&](cplx z) { return FA(z) * PA(z) * w1(z); }, cplx(1.0),
                    std::log(d1) - opts.cusp_depth, std::log(d1), false, true});
  // A infinity disk (chart u = 1/z)
  charts.push_back({[&](cplx z) { return FA(z) * winf(z); }, cplx(0.0),
                    -std::log(0.8 * D) - opts.cusp_depth, -std::log(0.8 * D), true, true});
  // B core annulus (zeta chart)
  charts.push_back({[&](cplx zeta) { return FB(zeta) * PB(t * zeta) * (1.0 - w0z(zeta) - w1z(zeta)); },
                    cplx(0.0), std::log(0.7 * d1), std::log(1.0 / (0.7 * c0)), false, false});
  // B puncture-0 disk
  charts.push_back({[&](cplx zeta) { return FB(zeta) * w0z(zeta); }, cplx(0.0),
                    std::log(d1) - opts.cusp_depth, std::log(d1), false, true});
  // B puncture-1 disk
  charts.push_back({[&](cplx zeta) { return FB(zeta) * PB(t * zeta) * w1z(zeta); }, cplx(1.0),
                    std::log(d1) - opts.cusp_depth, std::log(d1), false, true});

  auto run = [&](int nr, int na) {
    double total = 0.0, tail = 0.0;
    for (const auto& c : charts) {
      double tr = 0.0;
      const double v = logpolar_integral(c.F, c.center, c.y_lo, c.y_hi, c.invert, nr, na,
                                         c.has_cusp_tail ? &tr : nullptr);
      total += v;
      if (c.has_cusp_tail && tr > 0.0 && tr < 0.9) {
        // crude geometric tail bound from the innermost rings
        tail += std::abs(v) * tr * 1e-3;
      } else if (c.has_cusp_tail && tr >= 0.9) {
        throw std::runtime_error(
            "fiber_quadrature: cusp tail not decaying (integrand class violated?)");
      }
    }
    return std::pair<double, double>(total, tail);
  };

  auto [q1, tail1] = run(opts.n_radial, opts.n_angular);
  auto [q2, tail2] = run(opts.n_radial / 2, opts.n_angular / 2);
  (void)tail2;
  QuadResult res;
  res.value = q1;
  const double scale = std::max(std::abs(q1), 1e-300);
  res.err_est = std::abs(q1 - q2) / scale + tail1 / scale;
  return res;
}

}  // namespace wpc::graft
