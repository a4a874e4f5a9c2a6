#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logconheat/ext_real.hpp"

namespace logconheat {

enum class TransformFamily { LogPower, Power };

// Admissible concavity transform F on [0,1]: strictly increasing and
// continuous on (0,1], F(0) = bottom, finite for s > 0.
//
//   LogPower(alpha): F(s) = -(-log s)^(1/alpha),  alpha > 0
//   Power(p):        F(s) = s^p / p for p != 0, log s for p = 0
//
// Instances are immutable values; all member functions are pure.
class ConcavityTransform {
 public:
  static ConcavityTransform log_power(double alpha);
  static ConcavityTransform power(double p);

  TransformFamily family() const { return family_; }
  double parameter() const { return param_; }

  // F(s) for s in [0,1].  Values in (1, 1+1e-9] are clamped to 1 so that
  // kappa = 1/sup(u) does not trip the range check through rounding;
  // anything beyond that is a domain error.
  ExtReal eval(double s) const;

  // Inverse on the achievable range; bottom maps to 0, y > F(1) is a
  // domain error.  For Power(p > 0) the range of finite values is
  // (0, 1/p], so finite y <= 0 is rejected there.
  double eval_inv(const ExtReal& y) const;

  double top() const;  // F(1)

  std::string name() const;  // e.g. "LogPower(2)", "Power(-1)"

 private:
  ConcavityTransform(TransformFamily f, double p) : family_(f), param_(p) {}
  TransformFamily family_;
  double param_;
};

// Weighted power mean M_gamma(a,b;mu) = ((1-mu) a^gamma + mu b^gamma)^(1/gamma)
// for a,b > 0.  gamma = 0 means the geometric mean a^(1-mu) b^mu, the
// continuity extension in gamma.
double power_mean(double a, double b, double mu, double gamma);

// The midpoint mean induced by LogPower(alpha) at scale kappa:
//
//   kappa^{-1} * F^{-1}( (1-mu) F(kappa a) + mu F(kappa b) ),  F = LogPower(alpha)
//
// i.e. exp(-[(1-mu)(-log kappa a)^(1/alpha) + mu(-log kappa b)^(1/alpha)]^alpha) / kappa.
// Requires kappa, a, b in (0,1], mu in [0,1], alpha >= 1.
double transform_midpoint_mean(double kappa, double a, double b, double mu, double alpha);

// Closed-form d/dkappa of transform_midpoint_mean.  With
// A = -log(kappa a), B = -log(kappa b), S = (1-mu) A^(1/alpha) + mu B^(1/alpha):
//
//   kappa^{-2} exp(-S^alpha) * ( S^(alpha-1) * [(1-mu) A^((1-alpha)/alpha)
//                                              + mu B^((1-alpha)/alpha)] - 1 )
//
// Nonnegative for alpha >= 1 (power-mean monotonicity); identically zero at
// alpha = 1.  Unbounded when kappa*a = 1 or kappa*b = 1 with alpha > 1.
double transform_midpoint_mean_dkappa(double kappa, double a, double b, double mu,
                                      double alpha);

// Radial second derivative of LogPower(alpha) applied to kappa * exp(-r^alpha):
//
//   (1-alpha) (-log kappa + r^alpha)^(1/alpha - 2) r^(alpha-2) (-log kappa)
//
// Strictly positive for 0 < alpha < 1, 0 < kappa < 1, r > 0: the transformed
// profile is locally convex at every radius, so no choice of kappa rescues
// concavity for this family.
double stretched_exp_radial_curvature(double alpha, double kappa, double r);

// Verdict of a sampled second-difference convexity scan.
struct ConvexityScan {
  bool convex = false;
  double tested_upper = 0.0;              // largest abscissa covered by the scan
  std::optional<double> witness = {};     // abscissa of the worst failure
  double min_second_diff = 0.0;           // most negative centered second difference
};

// Convexity of s -> (-(1/p) log s)^(1/alpha) on (0, s_max], p > 0,
// checked by centered second differences on a uniform grid of `samples`
// points.  Convex for s_max <= exp(-(alpha-1)/alpha); witnesses appear
// near s = 1 once s_max crosses that threshold.
ConvexityScan log_power_bridge_convexity(double p, double alpha, double s_max,
                                         int samples = 512);

// Convexity on s < 0 of the scalar coefficient
//
//   phi(s) = -(1/gamma) (-s)^(-(gamma-1)/gamma) + ((gamma-1)/gamma) s^{-1} + 1
//
// that multiplies |grad|^2 in the flow satisfied by the transformed
// solution.  Convex precisely for gamma in [1/2, 1]; gamma outside (0,1]
// is a domain error.  Checked by centered second differences at each
// sample point (all must be < 0).
ConvexityScan drift_term_convexity(double gamma, const std::vector<double>& s_samples);

// Default abscissae for drift_term_convexity: log-spaced over [-10, -0.01].
std::vector<double> drift_term_default_samples(int count = 400);

}  // namespace logconheat
