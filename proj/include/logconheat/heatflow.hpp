#pragma once

#include <optional>
#include <vector>

#include "logconheat/grid.hpp"

namespace logconheat {

enum class HeatScheme { FreeConvolution, DirichletFD };

// Shared solver knobs.  theta is fixed at 1/2 (trapezoidal stepping); the
// first two steps of a Dirichlet run are replaced by four backward-Euler
// half-steps so that indicator-type data does not ring.  eps_trunc sets
// the free-space output window: mass beyond it is below eps_trunc.
struct HeatFlowConfig {
  HeatScheme scheme = HeatScheme::FreeConvolution;
  double dt = 1.0 / 256.0;
  double eps_trunc = 1e-12;
  double theta = 0.5;
  int smoothing_half_steps = 4;

  static HeatFlowConfig free_space(double eps_trunc = 1e-12);
  static HeatFlowConfig dirichlet(double dt);
};

// Heat semigroup on the whole space by direct lattice quadrature of the
// Gaussian convolution over the (bounded) support of u0.  The output
// window extends the input lattice by the truncation radius
// sqrt(4 t log(1/eps_trunc)) on each side.  Errors: t <= 0, empty support.
SampledFunction free_evolve(const SampledFunction& u0, double t, const HeatFlowConfig& cfg);

// Same quadrature evaluated at the points of an arbitrary output grid
// (used for profiling at large t on a coarse window).  The mass statement
// only applies when the window covers the truncation radius.
SampledFunction free_evolve(const SampledFunction& u0, double t, const HeatFlowConfig& cfg,
                            const Grid& out_grid);

// Homogeneous Dirichlet flow on omega with a masked second-difference
// Laplacian and trapezoidal stepping on u0's grid.  Unknowns are the grid
// points strictly inside omega; everything else is pinned to zero, so
// positive boundary samples of u0 are dropped at the first step.
// Errors: t <= 0, dt > h, support outside the closure of omega.
SampledFunction dirichlet_evolve(const SampledFunction& u0, const ConvexDomain& omega,
                                 double t, const HeatFlowConfig& cfg);

struct ProfileSample {
  double value = 0.0;       // (4 pi t)^(dim/2) / k_measure * u at the snapped point
  Point xi{0.0, 0.0};       // requested profile coordinate
  Point x_used{0.0, 0.0};   // snapped evaluation point (2 sqrt(t) xi, nearest lattice)
  double snap_distance = 0.0;
};

// Self-similar profile at scale 2 sqrt(t): compares u against the Gaussian
// limit shape exp(-|xi|^2).  Off-lattice targets snap to the nearest grid
// point and the snap is recorded.
ProfileSample rescaled_profile(const SampledFunction& u_t, double t, double k_measure,
                               const Point& xi);

// Sup over the omega-grid of | [flow of chi_K in n*omega at n^2 t](n x)
//                             - [flow of chi_{K/n} in omega at t](x) |.
// Both runs share the spacing h, so n x lands on the dilated lattice
// exactly.  Requires 0 inside K and omega, and integer n >= 1.
double scaling_identity_residual(const ConvexDomain& k, const ConvexDomain& omega, int n,
                                 double t, double h, const HeatFlowConfig& cfg);

// -Laplacian eta = 1 with zero boundary values on the masked grid.
// One-dimensional solves are direct (tridiagonal); two-dimensional ones
// use conjugate gradients with relative tolerance 1e-12.
SampledFunction torsion_solve(const ConvexDomain& omega, const Grid& grid);

struct EigenPair {
  double lambda1 = 0.0;
  SampledFunction phi;        // nonnegative, grid L2 norm 1
  double residual = 0.0;      // ||A phi - lambda phi||_2 at exit
  int iterations = 0;
};

// Principal Dirichlet eigenpair of the masked Laplacian by inverse power
// iteration.  Errors if the iteration cap is hit before the residual
// drops below 1e-8 * lambda.
EigenPair eigen_solve(const ConvexDomain& omega, const Grid& grid);

struct CurvatureRecord {
  double x = 0.0;      // coordinate along the probed axis
  double moment1 = 0.0;  // X = first kernel moment of u0 at x, normalized by u
  double moment2 = 0.0;  // Y = second kernel moment, normalized by u
  double q = 0.0;        // (2t/gamma) (-log u)^(1-gamma) * d2/dx2 (-log u)^gamma
  bool inner = false;    // |x|^2 <= eps * t * log t
};

struct CurvatureDiagnostic {
  std::vector<CurvatureRecord> records;
  double t = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;   // 1/alpha
  double delta = 0.0;   // (2 gamma - 1)/3, the outer-region margin
  double eps = 0.0;     // inner-region width parameter
  double support_radius = 0.0;
};

// Moment-normalized curvature of (-log u)^gamma along one axis for the
// free flow started from compactly supported u0 (recentred internally so
// first moments vanish).  alpha in [1,2).  The expected asymptotics are
// q >= 1/2 on the inner region and q >= delta/2 outside it; callers
// assert those.  Requires sup u(t) < 1: raise t otherwise.
// Two-dimensional inputs are probed along the single axis line through
// the recentred origin.
CurvatureDiagnostic curvature_diagnostic(const SampledFunction& u0, double t, double alpha,
                                         int axis, const HeatFlowConfig& cfg,
                                         double eps = 0.1);

}  // namespace logconheat
