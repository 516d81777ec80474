#pragma once

#include <string>
#include <string_view>

namespace tflux {

// F_delta(s): flux through the pick-up loop, in units of Phi_0 / 2, of a
// fluxon at s = cos(angle to the loop normal). delta is the dimensionless gap.

/// Legendre series through k = k_max (odd polynomials P_1 .. P_{2k_max+1}).
/// Warns for delta < 0.05 where the series converges poorly.
double f_series(double s, double delta, int k_max);
double f_series_deriv(double s, double delta, int k_max);

/// Integral representation by adaptive quadrature, relative error ~1e-12.
double f_integral(double s, double delta);

/// dF/ds from the differentiated integral representation.
double f_integral_deriv(double s, double delta);

/// Closed form through complete elliptic integrals of the third kind.
/// Ill-conditioned near s = 0; |s| < closed_form_min_s is rejected.
inline constexpr double closed_form_min_s = 0.02;
double f_closed(double s, double delta);

/// f_delta = F_delta(1).
double saturation(double delta);

/// kappa_delta = F'_delta(0).
double slope_at_zero(double delta);

/// Leading small-gap behaviour of kappa_delta, (2/pi)/delta.
double slope_at_zero_leading(double delta);

/// The two-term form (2/pi)(1/delta + 2). It does not approach kappa_delta:
/// the difference tends to -4/pi as delta -> 0.
double slope_at_zero_two_term(double delta);

/// Delta_delta = f_delta / kappa_delta.
double transition_width(double delta);

/// A_delta solving A arctan(kappa_delta / A) = f_delta.
double adjusted_amplitude(double delta);

double f_piecewise_linear(double s, double delta);
double f_arctan(double s, double delta);
double f_arctan_adjusted(double s, double delta);

/// Partial sums of the two hypergeometric-type Legendre series whose
/// difference is F_delta, with eta = 1 - delta. Used as analytic oracles.
struct SplitSeries {
  double f1, f2;
};
SplitSeries split_series(double s, double eta, int k_max);
SplitSeries split_series_deriv(double s, double eta, int k_max);

enum class TransferMethod { series, integral, closed_form, piecewise_linear, arctan, arctan_adjusted };

std::string_view to_string(TransferMethod m);
TransferMethod parse_transfer_method(std::string_view name);

/// F_delta evaluated by one method, with its constants precomputed.
/// Immutable after construction and safe to share across threads.
class TransferCurve {
 public:
  explicit TransferCurve(double delta, TransferMethod method = TransferMethod::arctan_adjusted, int series_terms = 400);

  double value(double s) const;
  double operator()(double s) const { return value(s); }
  double derivative(double s) const;

  double delta() const { return delta_; }
  TransferMethod method() const { return method_; }
  int series_terms() const { return series_terms_; }
  double f_delta() const { return f_; }
  double kappa_delta() const { return kappa_; }
  double delta_width() const { return width_; }
  double a_delta() const { return a_; }

 private:
  double delta_;
  TransferMethod method_;
  int series_terms_;
  double f_, kappa_, width_, a_;
};

}  // namespace tflux
