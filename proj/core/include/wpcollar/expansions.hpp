#pragma once

// Log-smooth calculus at desk scale: truncated series in s^l (log s)^j with
// j <= l, indicial analysis of regular-singular operators, the reduced neck
// Dirichlet model, least-squares expansion fitting, and the exactly solvable
// push-forward demo.

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace wpc::series {

// Finite sum  sum c_{l,j} s^l (log s)^j,  0 <= j <= l <= L.
class LogPowerSeries {
 public:
  explicit LogPowerSeries(int truncation_order = 8);

  int order() const { return order_; }
  double coeff(int l, int j) const;
  void set(int l, int j, double c);  // throws unless 0 <= j <= l <= L
  const std::map<std::pair<int, int>, double>& terms() const { return terms_; }

  double eval(double s) const;  // s in (0,1)

  LogPowerSeries truncated(int L) const;
  friend LogPowerSeries operator+(const LogPowerSeries& a, const LogPowerSeries& b);
  friend LogPowerSeries operator*(const LogPowerSeries& a, const LogPowerSeries& b);

 private:
  int order_;
  std::map<std::pair<int, int>, double> terms_;
};

// Operator  sum_k a_k(x) (x d/dx)^k  with coefficients regular at x = 0.
struct RegularSingularOp {
  std::vector<std::function<double(double)>> coeff;  // index = power of x d/dx
  int order() const { return static_cast<int>(coeff.size()) - 1; }
  // indicial polynomial p(alpha) = sum a_k(0) alpha^k
  std::vector<double> indicial_polynomial() const;
};

// Roots (with multiplicity) of the indicial polynomial, sorted by real part.
std::vector<std::complex<double>> indicial_roots(const RegularSingularOp& op);

// Build a RegularSingularOp from p2(x) u'' + p1(x) u' + p0(x) u; checks the
// regular-singular pattern p2 = x^2 a2(x), p1 = x a1(x) at x = 0.
RegularSingularOp from_derivative_form(const std::function<double(double)>& p2,
                                       const std::function<double(double)>& p1,
                                       const std::function<double(double)>& p0);

// Zero Fourier mode of the cusp model Lap_I + 2 (indicial roots 1, -2).
RegularSingularOp cusp_zero_mode_op();

// Reduced neck model: zero mode of Lap_II + 2 conjugated by the neck
// defining function xi(1-xi) on the interval coordinate xi in (0,1)
// (indicial roots 0 and 3 at each end).
RegularSingularOp neck_reduced_zero_mode_op();

// Dirichlet problem for the reduced neck operator on (0,1):
//   L v = r,  v -> v_minus at xi = 0,  v -> v_plus at xi = 1.
struct NeckSolution {
  std::vector<double> xi;      // grid
  std::vector<double> v;       // solution values
  double rho3_coeff_left;      // fitted xi^3 coefficient at the left end
  double rho3_log_coeff_left;  // fitted xi^3 log xi coefficient
  double rho3_coeff_right;
  double rho3_log_coeff_right;
};

NeckSolution neck_dirichlet(double v_minus, double v_plus,
                            const std::function<double(double)>& forcing, int n_grid = 4000);

// Least-squares fit of samples (s_k, F_k) against {s^l (log s)^j}.
struct FitReport {
  LogPowerSeries fit;
  double condition;       // condition number of the design matrix
  double max_residual;    // max |F - fit| over the samples
  double residual_order;  // empirical order of the residual in s
  bool relaxed_log_order; // true if J = L+1 columns were allowed
};

FitReport fit_log_series(std::span<const double> s, std::span<const double> F, int L, int J);

// F(r) = int_r^1 rho^a (r/rho)^b drho/rho: (r^b - r^a)/(a-b) for a != b,
// r^a log(1/r) for a = b. Returns the exact function and a fit confirming
// that the log term appears exactly on the diagonal a = b.
struct PushforwardDemo {
  std::function<double(double)> exact;
  FitReport fit;
  double log_coeff;  // fitted coefficient of the expected (l, 1) term
};

PushforwardDemo b_pushforward_demo(double a, double b);

}  // namespace wpc::series
