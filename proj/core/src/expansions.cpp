#include "wpcollar/expansions.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpc::series {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sin^2(pi xi) / (pi xi)^2, stable near xi = 0.
double sinc_sq(double xi) {
  const double t = kPi * xi;
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 3.0 + 2.0 * t2 * t2 / 45.0;
  }
  const double s = std::sin(t) / t;
  return s * s;
}

// Reduced neck operator in derivative form: L v = c2 v'' + c1 v' + c0 v,
// the zero mode of Lap_II + 2 conjugated by rho(xi) = xi (1 - xi).
void reduced_neck_ode(double xi, double& c2, double& c1, double& c0) {
  const double sin2 = sinc_sq(xi) * xi * xi;  // sin^2(pi xi)/pi^2
  const double rho = xi * (1.0 - xi);
  const double rp = 1.0 - 2.0 * xi;
  c2 = -sin2;
  c1 = 2.0 * sin2 * rp / rho;
  c0 = -sin2 * (2.0 * rp * rp / (rho * rho) + 2.0 / rho) + 2.0;
}

}  // namespace

LogPowerSeries::LogPowerSeries(int truncation_order) : order_(truncation_order) {
  if (truncation_order < 0) throw std::invalid_argument("LogPowerSeries: negative order");
}

double LogPowerSeries::coeff(int l, int j) const {
  auto it = terms_.find({l, j});
  return it == terms_.end() ? 0.0 : it->second;
}

void LogPowerSeries::set(int l, int j, double c) {
  if (l < 0 || j < 0 || j > l) throw std::invalid_argument("LogPowerSeries: need 0 <= j <= l");
  if (l > order_) throw std::invalid_argument("LogPowerSeries: term beyond truncation order");
  if (c == 0.0)
    terms_.erase({l, j});
  else
    terms_[{l, j}] = c;
}

double LogPowerSeries::eval(double s) const {
  if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("LogPowerSeries::eval: s in (0,1)");
  const double ls = std::log(s);
  double v = 0.0;
  for (const auto& [lj, c] : terms_) v += c * std::pow(s, lj.first) * std::pow(ls, lj.second);
  return v;
}

LogPowerSeries LogPowerSeries::truncated(int L) const {
  LogPowerSeries out(L);
  for (const auto& [lj, c] : terms_)
    if (lj.first <= L) out.set(lj.first, lj.second, c);
  return out;
}

LogPowerSeries operator+(const LogPowerSeries& a, const LogPowerSeries& b) {
  LogPowerSeries out(std::max(a.order_, b.order_));
  for (const auto& [lj, c] : a.terms_) out.set(lj.first, lj.second, c);
  for (const auto& [lj, c] : b.terms_)
    out.set(lj.first, lj.second, out.coeff(lj.first, lj.second) + c);
  return out;
}

LogPowerSeries operator*(const LogPowerSeries& a, const LogPowerSeries& b) {
  LogPowerSeries out(std::max(a.order_, b.order_));
  for (const auto& [lj1, c1] : a.terms_)
    for (const auto& [lj2, c2] : b.terms_) {
      const int l = lj1.first + lj2.first, j = lj1.second + lj2.second;
      if (l > out.order_) continue;  // truncation
      out.set(l, j, out.coeff(l, j) + c1 * c2);
    }
  return out;
}

std::vector<double> RegularSingularOp::indicial_polynomial() const {
  std::vector<double> p(coeff.size());
  for (size_t k = 0; k < coeff.size(); ++k) p[k] = coeff[k](0.0);
  return p;
}

std::vector<std::complex<double>> indicial_roots(const RegularSingularOp& op) {
  std::vector<double> p = op.indicial_polynomial();
  while (p.size() > 1 && std::abs(p.back()) < 1e-14) p.pop_back();
  const int n = static_cast<int>(p.size()) - 1;
  if (n < 1) throw std::invalid_argument("indicial_roots: trivial indicial polynomial");
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[i] / p[n];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<std::complex<double>> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()[i];
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) { return a.real() < b.real(); });
  for (auto& r : roots) {
    const double re = std::round(r.real());
    if (std::abs(r.real() - re) < 1e-10 && std::abs(r.imag()) < 1e-10) r = {re, 0.0};
  }
  return roots;
}

RegularSingularOp from_derivative_form(const std::function<double(double)>& p2,
                                       const std::function<double(double)>& p1,
                                       const std::function<double(double)>& p0) {
  const double eps = 1e-6;
  const double a2_0 = p2(eps) / (eps * eps), a2_0b = p2(eps / 2) / (eps * eps / 4);
  const double a1_0 = p1(eps) / eps, a1_0b = p1(eps / 2) / (eps / 2);
  if (!std::isfinite(a2_0) || std::abs(a2_0 - a2_0b) > 1e-2 * (1.0 + std::abs(a2_0)) ||
      !std::isfinite(a1_0) || std::abs(a1_0 - a1_0b) > 1e-2 * (1.0 + std::abs(a1_0)))
    throw std::invalid_argument("from_derivative_form: not regular-singular at x = 0");
  RegularSingularOp op;
  op.coeff.resize(3);
  // x u' = D u, x^2 u'' = (D^2 - D) u
  op.coeff[2] = [p2, a2_0](double x) { return x == 0.0 ? a2_0 : p2(x) / (x * x); };
  op.coeff[1] = [p2, p1, a2_0, a1_0](double x) {
    return x == 0.0 ? a1_0 - a2_0 : p1(x) / x - p2(x) / (x * x);
  };
  op.coeff[0] = p0;
  return op;
}

RegularSingularOp cusp_zero_mode_op() {
  // zero mode of Lap + 2 for the cusp metric drho^2/rho^2 + rho^2 dtheta^2:
  // -((x d/dx)^2 + (x d/dx)) + 2, indicial roots 1 and -2.
  RegularSingularOp op;
  op.coeff.resize(3);
  op.coeff[2] = [](double) { return -1.0; };
  op.coeff[1] = [](double) { return -1.0; };
  op.coeff[0] = [](double) { return 2.0; };
  return op;
}

RegularSingularOp neck_reduced_zero_mode_op() {
  // L = A2(xi) D^2 + A1(xi) D + A0(xi), D = xi d/dxi, from reduced_neck_ode:
  //   A2 = c2/xi^2, A1 = c1/xi - c2/xi^2, A0 = c0.
  // At xi = 0: A2 = -1, A1 = 3, A0 = 0, so the indicial roots are 0 and 3.
  RegularSingularOp op;
  op.coeff.resize(3);
  op.coeff[2] = [](double xi) { return -sinc_sq(xi); };
  op.coeff[1] = [](double xi) {
    if (xi < 1e-9) return 3.0;
    return sinc_sq(xi) * (1.0 + 2.0 * (1.0 - 2.0 * xi) / (1.0 - xi));
  };
  op.coeff[0] = [](double xi) {
    if (xi < 1e-9) return 0.0;
    double c2, c1, c0;
    reduced_neck_ode(xi, c2, c1, c0);
    return c0;
  };
  return op;
}

NeckSolution neck_dirichlet(double v_minus, double v_plus,
                            const std::function<double(double)>& forcing, int n_grid) {
  if (n_grid < 64) throw std::invalid_argument("neck_dirichlet: grid too small");
  const double xi0 = 2e-4;
  const int n = n_grid;
  std::vector<double> xi(n);
  const double h = (1.0 - 2.0 * xi0) / (n - 1);
  for (int i = 0; i < n; ++i) xi[i] = xi0 + h * i;

  Eigen::SparseMatrix<double> A(n, n);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  trip.emplace_back(0, 0, 1.0);
  rhs[0] = v_minus;  // bounded branch attains its boundary value (root 0)
  trip.emplace_back(n - 1, n - 1, 1.0);
  rhs[n - 1] = v_plus;
  for (int i = 1; i + 1 < n; ++i) {
    double c2, c1, c0;
    reduced_neck_ode(xi[i], c2, c1, c0);
    trip.emplace_back(i, i - 1, c2 / (h * h) - c1 / (2.0 * h));
    trip.emplace_back(i, i, -2.0 * c2 / (h * h) + c0);
    trip.emplace_back(i, i + 1, c2 / (h * h) + c1 / (2.0 * h));
    rhs[i] = forcing(xi[i]);
  }
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("neck_dirichlet: factorization failed");
  Eigen::VectorXd v = lu.solve(rhs);

  NeckSolution out;
  out.xi = xi;
  out.v.assign(v.data(), v.data() + n);

  // End structure per the model: v = smooth + xi^3 (a + b log xi).
  auto end_fit = [&](bool left, double& a3, double& b3) {
    const int m = 60;
    Eigen::MatrixXd M(m, 5);
    Eigen::VectorXd y(m);
    for (int k = 0; k < m; ++k) {
      const int idx = left ? (5 + 4 * k) : (n - 6 - 4 * k);
      const double x = left ? xi[idx] : 1.0 - xi[idx];
      M(k, 0) = 1.0;
      M(k, 1) = x;
      M(k, 2) = x * x;
      M(k, 3) = x * x * x;
      M(k, 4) = x * x * x * std::log(x);
      y[k] = v[idx];
    }
    Eigen::VectorXd c = M.colPivHouseholderQr().solve(y);
    a3 = c[3];
    b3 = c[4];
  };
  end_fit(true, out.rho3_coeff_left, out.rho3_log_coeff_left);
  end_fit(false, out.rho3_coeff_right, out.rho3_log_coeff_right);
  return out;
}

FitReport fit_log_series(std::span<const double> s, std::span<const double> F, int L, int J) {
  if (s.size() != F.size()) throw std::invalid_argument("fit_log_series: size mismatch");
  const bool relaxed = J > L;
  if (J > L + 1) throw std::invalid_argument("fit_log_series: J <= L+1 required");
  std::vector<std::pair<int, int>> basis;
  for (int l = 0; l <= L; ++l) {
    const int jmax = std::min(relaxed ? l + 1 : l, J);
    for (int j = 0; j <= jmax; ++j) basis.push_back({l, j});
  }
  const int m = static_cast<int>(s.size()), nb = static_cast<int>(basis.size());
  if (m < nb + 3) throw std::invalid_argument("fit_log_series: need >= terms + 3 samples");
  Eigen::MatrixXd M(m, nb);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const double ls = std::log(s[i]);
    for (int k = 0; k < nb; ++k)
      M(i, k) = std::pow(s[i], basis[k].first) * std::pow(ls, basis[k].second);
    y[i] = F[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond = svd.singularValues()(0) / svd.singularValues()(nb - 1);
  if (cond > 1e12) throw std::runtime_error("fit_log_series: design matrix condition > 1e12");
  Eigen::VectorXd c = svd.solve(y);

  FitReport rep;
  rep.fit = LogPowerSeries(std::max(L, 1));
  for (int k = 0; k < nb; ++k) {
    auto [l, j] = basis[k];
    if (j <= l) rep.fit.set(l, j, c[k]);
    // relaxed (j = l+1) columns participate in the fit but are not stored in
    // the series datum; they only tighten the residual, see the module notes.
  }
  rep.relaxed_log_order = relaxed;
  rep.condition = cond;
  Eigen::VectorXd r = y - M * c;
  rep.max_residual = r.cwiseAbs().maxCoeff();
  double num = 0.0, den = 0.0, mr = 0.0, ms = 0.0;
  int cnt = 0;
  for (int i = 0; i < m; ++i) {
    if (std::abs(r[i]) < 1e-15) continue;
    mr += std::log(std::abs(r[i]));
    ms += std::log(s[i]);
    ++cnt;
  }
  if (cnt >= 2) {
    mr /= cnt;
    ms /= cnt;
    for (int i = 0; i < m; ++i) {
      if (std::abs(r[i]) < 1e-15) continue;
      num += (std::log(s[i]) - ms) * (std::log(std::abs(r[i])) - mr);
      den += (std::log(s[i]) - ms) * (std::log(s[i]) - ms);
    }
  }
  rep.residual_order = den > 0.0 ? num / den : 0.0;
  return rep;
}

PushforwardDemo b_pushforward_demo(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("b_pushforward_demo: need a, b > 0");
  PushforwardDemo out;
  const bool diag = std::abs(a - b) < 1e-13;
  if (diag) {
    out.exact = [a](double r) { return std::pow(r, a) * std::log(1.0 / r); };
  } else {
    out.exact = [a, b](double r) { return (std::pow(r, b) - std::pow(r, a)) / (a - b); };
  }
  std::vector<double> rs, Fs;
  for (int k = 0; k < 16; ++k) {
    const double r = 0.5 * std::pow(2.0, -k * 0.5);
    rs.push_back(r);
    Fs.push_back(out.exact(r));
  }
  const int L = static_cast<int>(std::round(std::max(a, b))) + 2;
  out.fit = fit_log_series(rs, Fs, L, L);
  const int l_log = static_cast<int>(std::round(a));
  out.log_coeff = -out.fit.fit.coeff(l_log, 1);  // log(1/r) = -log r
  return out;
}

}  // namespace wpc::series
