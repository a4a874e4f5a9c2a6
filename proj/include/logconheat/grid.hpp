#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace logconheat {

using MultiIndex = std::array<long, 2>;  // [1] is 0 in one dimension
using Point = std::array<double, 2>;     // [1] is 0.0 in one dimension

// Uniform tensor grid in one or two dimensions: points origin + j*h per
// axis, at least 3 points per axis.
struct Grid {
  int dim = 1;
  Point origin = {0.0, 0.0};
  double h = 1.0;
  std::array<long, 2> extents = {0, 0};  // points per axis; [1] is 1 in 1D

  static Grid make_1d(double lo, double hi, double h);
  static Grid make_2d(double lo0, double hi0, double lo1, double hi1, double h);

  long count() const { return dim == 1 ? extents[0] : extents[0] * extents[1]; }
  bool in_range(const MultiIndex& j) const {
    if (j[0] < 0 || j[0] >= extents[0]) return false;
    if (dim == 2 && (j[1] < 0 || j[1] >= extents[1])) return false;
    return dim == 2 || j[1] == 0;
  }
  long flat(const MultiIndex& j) const {
    return dim == 1 ? j[0] : j[0] * extents[1] + j[1];
  }
  MultiIndex unflat(long f) const {
    if (dim == 1) return {f, 0};
    return {f / extents[1], f % extents[1]};
  }
  Point point(const MultiIndex& j) const {
    Point x{origin[0] + j[0] * h, 0.0};
    if (dim == 2) x[1] = origin[1] + j[1] * h;
    return x;
  }
  // Hull of the grid: [origin, origin + (extents-1)*h] per axis.
  double hull_lo(int axis) const { return origin[axis]; }
  double hull_hi(int axis) const { return origin[axis] + (extents[axis] - 1) * h; }

  // Nearest lattice index to x (not clamped to range).
  MultiIndex nearest(const Point& x) const;
  // Exact alignment test with tolerance 1e-9 * h per axis.
  bool aligned(const Point& x, MultiIndex* out = nullptr) const;
};

// Convex region given as an intersection of primitives: boxes, balls and
// half-spaces a.x <= b.  Membership uses the closed convention: a point
// exactly on the boundary counts as inside.  The strict variant is what
// the Dirichlet solvers use to pick PDE unknowns.
class ConvexDomain {
 public:
  static ConvexDomain box(const Point& lo, const Point& hi, int dim);
  static ConvexDomain ball(const Point& center, double radius, int dim);
  // Half-space list {a_k . x <= b_k}; dim from context.
  static ConvexDomain half_spaces(const std::vector<std::array<double, 3>>& rows, int dim);

  // Intersection with another region of the same dimension.
  ConvexDomain intersect(const ConvexDomain& other) const;

  int dim() const { return dim_; }
  bool contains(const Point& x) const;           // closed
  bool strictly_contains(const Point& x) const;  // open, margin 1e-12*(1+|x|)

  // Image under x -> n*x (dilation about the origin).  Requires n > 0 and
  // 0 inside the region, so that membership(n*x, scaled) == membership(x, this).
  ConvexDomain scaled(double n) const;

  // Axis-aligned bounds from the box/ball primitives; a domain error when
  // only half-spaces are present (they do not bound the region alone).
  void bounding_box(Point& lo, Point& hi) const;

 private:
  struct Prim {
    enum Kind { Box, Ball, Half } kind;
    Point a{0.0, 0.0};  // box lo / ball center / half-space normal
    Point b{0.0, 0.0};  // box hi
    double r = 0.0;     // ball radius / half-space offset
  };
  ConvexDomain(int dim, std::vector<Prim> prims) : dim_(dim), prims_(std::move(prims)) {}
  int dim_;
  std::vector<Prim> prims_;
};

// Nonnegative samples on a grid with zero extension outside the hull.
class SampledFunction {
 public:
  SampledFunction(Grid grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](long flat) const { return values_[flat]; }

  // Zero extension at the index level: out-of-range indices read as 0.
  double at(const MultiIndex& j) const {
    return grid_.in_range(j) ? values_[grid_.flat(j)] : 0.0;
  }

  double sup() const { return sup_; }               // cached max over samples
  double mass() const;                              // h^dim * sum of samples
  long support_size() const;                        // count of positive samples
  // Tight bounds of the positive samples per axis; false if identically zero.
  bool support_box(MultiIndex& lo, MultiIndex& hi) const;
  double support_radius() const;                    // max |x| over positive samples

 private:
  Grid grid_;
  std::vector<double> values_;
  double sup_;
};

// Evaluate f at every grid point; points outside `where` (if given) are
// zero.  Negative samples are a domain error naming the offending point.
SampledFunction sample(const std::function<double(const Point&)>& f, const Grid& grid,
                       const ConvexDomain* where = nullptr);

// Fundamental solution (4 pi t)^(-dim/2) exp(-|x|^2 / 4t); t <= 0 is a
// domain error.
double gauss_kernel(const Point& x, double t, int dim);

// Indicator of a convex region sampled on a grid; a domain error if no
// grid point lies inside.
SampledFunction indicator(const ConvexDomain& k, const Grid& grid);

// Zero-extended evaluation at an arbitrary point: 0 outside the hull,
// the sample at a lattice point, and a "non-aligned query" error for
// interior points off the lattice (no interpolation anywhere).
double eval_zero_extended(const SampledFunction& u, const Point& x);

// Translate the grid so the first moments h^dim * sum x_i u(x) vanish.
SampledFunction recentre(const SampledFunction& u);

// CSV: header "# dim,h,origin...,extents..." then "x[,y],value" rows in
// lexicographic index order, 17 significant digits.
void write_csv(const SampledFunction& u, const std::string& path);
SampledFunction read_csv(const std::string& path);

}  // namespace logconheat
