#include "logconheat/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace logconheat {

namespace {

constexpr double kEvalSlack = 1e-9;

// Finite stand-in for transform values that overflow downward (Power with
// p < 0 at extreme tail samples).  Keeps gap arithmetic finite and ordered.
constexpr double kValueFloor = -std::numeric_limits<double>::max() / 4.0;

double neg_log(double s) {
  // -log via log1p keeps full relative accuracy as s -> 1.
  double v = -std::log1p(s - 1.0);
  return v < 0.0 ? 0.0 : v;
}

}  // namespace

ConcavityTransform ConcavityTransform::log_power(double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("log_power: alpha must be > 0");
  return ConcavityTransform(TransformFamily::LogPower, alpha);
}

ConcavityTransform ConcavityTransform::power(double p) {
  if (!std::isfinite(p)) throw std::domain_error("power: p must be finite");
  return ConcavityTransform(TransformFamily::Power, p);
}

ExtReal ConcavityTransform::eval(double s) const {
  if (std::isnan(s)) throw std::domain_error("eval: s is NaN");
  if (s > 1.0) {
    if (s <= 1.0 + kEvalSlack) {
      s = 1.0;
    } else {
      throw std::domain_error("eval: s > 1; rescale by kappa <= 1/sup(u) first");
    }
  }
  if (s < 0.0) throw std::domain_error("eval: s < 0");
  if (s == 0.0) return ExtReal::bottom();

  if (family_ == TransformFamily::LogPower) {
    const double nl = neg_log(s);
    if (nl == 0.0) return ExtReal(0.0);
    return ExtReal(-std::pow(nl, 1.0 / param_));
  }

  if (param_ == 0.0) return ExtReal(-neg_log(s));
  double v = std::pow(s, param_) / param_;
  if (v < kValueFloor) v = kValueFloor;
  return ExtReal(v);
}

double ConcavityTransform::top() const {
  if (family_ == TransformFamily::LogPower) return 0.0;
  return param_ == 0.0 ? 0.0 : 1.0 / param_;
}

double ConcavityTransform::eval_inv(const ExtReal& y) const {
  if (y.is_bottom()) return 0.0;
  double yy = y.finite();
  const double t = top();
  if (yy > t) {
    if (yy <= t + 1e-12 * (1.0 + std::abs(t))) {
      yy = t;
    } else {
      throw std::domain_error("eval_inv: y above F(1)");
    }
  }

  if (family_ == TransformFamily::LogPower) {
    return std::exp(-std::pow(-yy, param_));
  }
  if (param_ == 0.0) return std::exp(yy);
  if (param_ > 0.0) {
    if (yy <= 0.0) throw std::domain_error("eval_inv: y below the range of Power(p>0)");
    return std::pow(param_ * yy, 1.0 / param_);
  }
  // p < 0: range of finite values is [1/p, ...) rising to 1/p at s = 1;
  // p*y >= 1 here because y <= 1/p < 0.
  return std::pow(param_ * yy, 1.0 / param_);
}

std::string ConcavityTransform::name() const {
  std::ostringstream os;
  os << (family_ == TransformFamily::LogPower ? "LogPower(" : "Power(") << param_ << ")";
  return os.str();
}

double power_mean(double a, double b, double mu, double gamma) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("power_mean: a, b must be > 0");
  if (mu < 0.0 || mu > 1.0) throw std::domain_error("power_mean: mu outside [0,1]");
  if (mu == 0.0) return a;
  if (mu == 1.0) return b;
  if (gamma == 0.0) return std::exp((1.0 - mu) * std::log(a) + mu * std::log(b));
  return std::pow((1.0 - mu) * std::pow(a, gamma) + mu * std::pow(b, gamma), 1.0 / gamma);
}

namespace {

void check_midpoint_args(double kappa, double a, double b, double mu, double alpha) {
  if (!(kappa > 0.0) || kappa > 1.0) throw std::domain_error("kappa outside (0,1]");
  if (!(a > 0.0) || a > 1.0 || !(b > 0.0) || b > 1.0)
    throw std::domain_error("a, b outside (0,1]");
  if (mu < 0.0 || mu > 1.0) throw std::domain_error("mu outside [0,1]");
  if (!(alpha >= 1.0)) throw std::domain_error("alpha must be >= 1");
}

}  // namespace

double transform_midpoint_mean(double kappa, double a, double b, double mu, double alpha) {
  check_midpoint_args(kappa, a, b, mu, alpha);
  double A = -std::log(kappa * a);
  double B = -std::log(kappa * b);
  if (A < 0.0) A = 0.0;
  if (B < 0.0) B = 0.0;
  const double S = (1.0 - mu) * std::pow(A, 1.0 / alpha) + mu * std::pow(B, 1.0 / alpha);
  return std::exp(-std::pow(S, alpha)) / kappa;
}

double transform_midpoint_mean_dkappa(double kappa, double a, double b, double mu,
                                      double alpha) {
  check_midpoint_args(kappa, a, b, mu, alpha);
  if (alpha == 1.0) return 0.0;  // the mean is kappa-independent: a^(1-mu) b^mu
  double A = -std::log(kappa * a);
  double B = -std::log(kappa * b);
  if (A < 0.0) A = 0.0;
  if (B < 0.0) B = 0.0;
  const double inv_alpha = 1.0 / alpha;
  const double S = (1.0 - mu) * std::pow(A, inv_alpha) + mu * std::pow(B, inv_alpha);
  const double W =
      (1.0 - mu) * std::pow(A, (1.0 - alpha) * inv_alpha) + mu * std::pow(B, (1.0 - alpha) * inv_alpha);
  const double bracket = std::pow(S, alpha - 1.0) * W - 1.0;
  return std::exp(-std::pow(S, alpha)) / (kappa * kappa) * bracket;
}

double stretched_exp_radial_curvature(double alpha, double kappa, double r) {
  if (!(alpha > 0.0) || alpha >= 1.0) throw std::domain_error("alpha outside (0,1)");
  if (!(kappa > 0.0) || kappa >= 1.0) throw std::domain_error("kappa outside (0,1)");
  if (!(r > 0.0)) throw std::domain_error("r must be > 0");
  const double c = -std::log(kappa);
  return (1.0 - alpha) * std::pow(c + std::pow(r, alpha), 1.0 / alpha - 2.0) *
         std::pow(r, alpha - 2.0) * c;
}

namespace {

// Shared scan core: centered second differences with a roundoff-aware floor.
// f is evaluated at x-h, x, x+h for each center; tol_abs guards exact-zero
// profiles.
template <typename F>
ConvexityScan scan_second_differences(F&& f, const std::vector<double>& centers,
                                      const std::vector<double>& steps, double tol_abs) {
  ConvexityScan out;
  out.convex = true;
  out.min_second_diff = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double x = centers[k];
    const double h = steps[k];
    const double fm = f(x - h), f0 = f(x), fp = f(x + h);
    const double d2 = (fm - 2.0 * f0 + fp) / (h * h);
    const double scale = std::max({std::abs(fm), std::abs(f0), std::abs(fp), 1.0});
    const double tol = 32.0 * std::numeric_limits<double>::epsilon() * scale / (h * h) + tol_abs;
    if (d2 < out.min_second_diff) {
      out.min_second_diff = d2;
      if (d2 < -tol) out.witness = x;
    }
    if (d2 < -tol) out.convex = false;
  }
  return out;
}

}  // namespace

ConvexityScan log_power_bridge_convexity(double p, double alpha, double s_max, int samples) {
  if (!(p > 0.0)) throw std::domain_error("bridge: p must be > 0");
  if (!(alpha > 0.0)) throw std::domain_error("bridge: alpha must be > 0");
  if (!(s_max > 0.0) || s_max >= 1.0) throw std::domain_error("bridge: s_max outside (0,1)");
  if (samples < 8) throw std::domain_error("bridge: too few samples");

  const double s_min = s_max * 1e-4;
  const double h = (s_max - s_min) / (samples - 1);
  std::vector<double> centers, steps;
  centers.reserve(samples - 2);
  for (int k = 1; k + 1 < samples; ++k) {
    centers.push_back(s_min + k * h);
    steps.push_back(h);
  }
  auto g = [p, alpha](double s) { return std::pow(-std::log(s) / p, 1.0 / alpha); };
  ConvexityScan out = scan_second_differences(g, centers, steps, 1e-10);
  out.tested_upper = s_max;
  return out;
}

ConvexityScan drift_term_convexity(double gamma, const std::vector<double>& s_samples) {
  if (!(gamma > 0.0) || gamma > 1.0) throw std::domain_error("drift: gamma outside (0,1]");
  if (s_samples.empty()) throw std::domain_error("drift: no sample points");

  const double q = (gamma - 1.0) / gamma;
  auto phi = [gamma, q](double s) {
    return -(1.0 / gamma) * std::pow(-s, -q) + q / s + 1.0;
  };

  std::vector<double> centers, steps;
  centers.reserve(s_samples.size());
  for (double s : s_samples) {
    if (!(s < 0.0)) throw std::domain_error("drift: samples must be < 0");
    double h = std::max(1e-4 * std::abs(s), 1e-8);
    if (s + h >= 0.0) h = std::abs(s) / 2.0;
    centers.push_back(s);
    steps.push_back(h);
  }
  ConvexityScan out = scan_second_differences(phi, centers, steps, 1e-10);
  out.tested_upper = *std::max_element(centers.begin(), centers.end());
  return out;
}

std::vector<double> drift_term_default_samples(int count) {
  if (count < 2) throw std::domain_error("drift samples: count must be >= 2");
  std::vector<double> s(count);
  const double lo = std::log(0.01), hi = std::log(10.0);
  for (int k = 0; k < count; ++k) {
    const double w = static_cast<double>(k) / (count - 1);
    s[k] = -std::exp(lo + w * (hi - lo));
  }
  return s;
}

}  // namespace logconheat
