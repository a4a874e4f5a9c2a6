#include "logconheat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace logconheat {

namespace {

long axis_points(double lo, double hi, double h) {
  if (!(h > 0.0)) throw std::domain_error("grid: spacing must be > 0");
  if (!(hi > lo)) throw std::domain_error("grid: empty axis");
  const long n = std::lround((hi - lo) / h) + 1;
  if (n < 3) throw std::domain_error("grid: need at least 3 points per axis");
  return n;
}

}  // namespace

Grid Grid::make_1d(double lo, double hi, double h) {
  Grid g;
  g.dim = 1;
  g.origin = {lo, 0.0};
  g.h = h;
  g.extents = {axis_points(lo, hi, h), 1};
  return g;
}

Grid Grid::make_2d(double lo0, double hi0, double lo1, double hi1, double h) {
  Grid g;
  g.dim = 2;
  g.origin = {lo0, lo1};
  g.h = h;
  g.extents = {axis_points(lo0, hi0, h), axis_points(lo1, hi1, h)};
  return g;
}

MultiIndex Grid::nearest(const Point& x) const {
  MultiIndex j{std::lround((x[0] - origin[0]) / h), 0};
  if (dim == 2) j[1] = std::lround((x[1] - origin[1]) / h);
  return j;
}

bool Grid::aligned(const Point& x, MultiIndex* out) const {
  const MultiIndex j = nearest(x);
  for (int a = 0; a < dim; ++a) {
    const double snapped = origin[a] + j[a] * h;
    if (std::abs(x[a] - snapped) > 1e-9 * h) return false;
  }
  if (out) *out = j;
  return true;
}

ConvexDomain ConvexDomain::box(const Point& lo, const Point& hi, int dim) {
  if (dim != 1 && dim != 2) throw std::domain_error("domain: dim must be 1 or 2");
  for (int a = 0; a < dim; ++a)
    if (!(lo[a] <= hi[a])) throw std::domain_error("domain: box with lo > hi");
  Prim p;
  p.kind = Prim::Box;
  p.a = lo;
  p.b = hi;
  return ConvexDomain(dim, {p});
}

ConvexDomain ConvexDomain::ball(const Point& center, double radius, int dim) {
  if (dim != 1 && dim != 2) throw std::domain_error("domain: dim must be 1 or 2");
  if (!(radius > 0.0)) throw std::domain_error("domain: ball radius must be > 0");
  Prim p;
  p.kind = Prim::Ball;
  p.a = center;
  p.r = radius;
  return ConvexDomain(dim, {p});
}

ConvexDomain ConvexDomain::half_spaces(const std::vector<std::array<double, 3>>& rows,
                                       int dim) {
  if (dim != 1 && dim != 2) throw std::domain_error("domain: dim must be 1 or 2");
  if (rows.empty()) throw std::domain_error("domain: empty half-space list");
  std::vector<Prim> ps;
  for (const auto& r : rows) {
    Prim p;
    p.kind = Prim::Half;
    p.a = {r[0], r[1]};
    p.r = r[2];
    if (p.a[0] == 0.0 && (dim == 1 || p.a[1] == 0.0))
      throw std::domain_error("domain: zero normal in half-space");
    ps.push_back(p);
  }
  return ConvexDomain(dim, ps);
}

ConvexDomain ConvexDomain::intersect(const ConvexDomain& other) const {
  if (other.dim_ != dim_) throw std::domain_error("domain: dimension mismatch");
  std::vector<Prim> ps = prims_;
  ps.insert(ps.end(), other.prims_.begin(), other.prims_.end());
  return ConvexDomain(dim_, ps);
}

namespace {

double norm2(const Point& x, int dim) {
  double s = x[0] * x[0];
  if (dim == 2) s += x[1] * x[1];
  return s;
}

}  // namespace

bool ConvexDomain::contains(const Point& x) const {
  const double tol = 1e-12 * (1.0 + std::sqrt(norm2(x, dim_)));
  for (const auto& p : prims_) {
    switch (p.kind) {
      case Prim::Box:
        for (int a = 0; a < dim_; ++a)
          if (x[a] < p.a[a] - tol || x[a] > p.b[a] + tol) return false;
        break;
      case Prim::Ball: {
        Point d{x[0] - p.a[0], dim_ == 2 ? x[1] - p.a[1] : 0.0};
        if (std::sqrt(norm2(d, dim_)) > p.r + tol) return false;
        break;
      }
      case Prim::Half: {
        double dot = p.a[0] * x[0] + (dim_ == 2 ? p.a[1] * x[1] : 0.0);
        if (dot > p.r + tol) return false;
        break;
      }
    }
  }
  return true;
}

bool ConvexDomain::strictly_contains(const Point& x) const {
  const double tol = 1e-12 * (1.0 + std::sqrt(norm2(x, dim_)));
  for (const auto& p : prims_) {
    switch (p.kind) {
      case Prim::Box:
        for (int a = 0; a < dim_; ++a)
          if (x[a] <= p.a[a] + tol || x[a] >= p.b[a] - tol) return false;
        break;
      case Prim::Ball: {
        Point d{x[0] - p.a[0], dim_ == 2 ? x[1] - p.a[1] : 0.0};
        if (std::sqrt(norm2(d, dim_)) >= p.r - tol) return false;
        break;
      }
      case Prim::Half: {
        double dot = p.a[0] * x[0] + (dim_ == 2 ? p.a[1] * x[1] : 0.0);
        if (dot >= p.r - tol) return false;
        break;
      }
    }
  }
  return true;
}

ConvexDomain ConvexDomain::scaled(double n) const {
  if (!(n > 0.0)) throw std::domain_error("scaled: factor must be > 0");
  if (!contains({0.0, 0.0})) throw std::domain_error("scaled: region must contain the origin");
  std::vector<Prim> ps = prims_;
  for (auto& p : ps) {
    switch (p.kind) {
      case Prim::Box:
        for (int a = 0; a < dim_; ++a) {
          p.a[a] *= n;
          p.b[a] *= n;
        }
        break;
      case Prim::Ball:
        for (int a = 0; a < dim_; ++a) p.a[a] *= n;
        p.r *= n;
        break;
      case Prim::Half:
        p.r *= n;  // a.x <= b becomes a.(x/n) <= b
        break;
    }
  }
  return ConvexDomain(dim_, ps);
}

void ConvexDomain::bounding_box(Point& lo, Point& hi) const {
  const double inf = std::numeric_limits<double>::infinity();
  lo = {-inf, -inf};
  hi = {inf, inf};
  for (const auto& p : prims_) {
    if (p.kind == Prim::Box) {
      for (int a = 0; a < dim_; ++a) {
        lo[a] = std::max(lo[a], p.a[a]);
        hi[a] = std::min(hi[a], p.b[a]);
      }
    } else if (p.kind == Prim::Ball) {
      for (int a = 0; a < dim_; ++a) {
        lo[a] = std::max(lo[a], p.a[a] - p.r);
        hi[a] = std::min(hi[a], p.a[a] + p.r);
      }
    }
  }
  for (int a = 0; a < dim_; ++a)
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]))
      throw std::domain_error("bounding_box: region is not bounded by box/ball primitives");
}

SampledFunction::SampledFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<long>(values_.size()) != grid_.count())
    throw std::invalid_argument("SampledFunction: value count mismatch");
  sup_ = 0.0;
  for (double v : values_) {
    if (std::isnan(v)) throw std::invalid_argument("SampledFunction: NaN sample");
    if (v < 0.0) throw std::invalid_argument("SampledFunction: negative sample");
    sup_ = std::max(sup_, v);
  }
}

double SampledFunction::mass() const {
  double s = 0.0;
  for (double v : values_) s += v;
  double cell = grid_.h;
  if (grid_.dim == 2) cell *= grid_.h;
  return s * cell;
}

long SampledFunction::support_size() const {
  long n = 0;
  for (double v : values_) n += (v > 0.0);
  return n;
}

bool SampledFunction::support_box(MultiIndex& lo, MultiIndex& hi) const {
  bool any = false;
  lo = {grid_.extents[0], grid_.extents[1]};
  hi = {-1, -1};
  for (long f = 0; f < grid_.count(); ++f) {
    if (values_[f] <= 0.0) continue;
    const MultiIndex j = grid_.unflat(f);
    any = true;
    for (int a = 0; a < grid_.dim; ++a) {
      lo[a] = std::min(lo[a], j[a]);
      hi[a] = std::max(hi[a], j[a]);
    }
  }
  if (grid_.dim == 1) lo[1] = hi[1] = 0;
  return any;
}

double SampledFunction::support_radius() const {
  double r2 = 0.0;
  for (long f = 0; f < grid_.count(); ++f) {
    if (values_[f] <= 0.0) continue;
    const Point x = grid_.point(grid_.unflat(f));
    r2 = std::max(r2, norm2(x, grid_.dim));
  }
  return std::sqrt(r2);
}

SampledFunction sample(const std::function<double(const Point&)>& f, const Grid& grid,
                       const ConvexDomain* where) {
  std::vector<double> vals(grid.count());
  for (long idx = 0; idx < grid.count(); ++idx) {
    const Point x = grid.point(grid.unflat(idx));
    double v = 0.0;
    if (where == nullptr || where->contains(x)) {
      v = f(x);
      if (std::isnan(v) || v < 0.0) {
        std::ostringstream os;
        os << "sample: negative or NaN value " << v << " at (" << x[0];
        if (grid.dim == 2) os << ", " << x[1];
        os << ")";
        throw std::domain_error(os.str());
      }
    }
    vals[idx] = v;
  }
  return SampledFunction(grid, std::move(vals));
}

double gauss_kernel(const Point& x, double t, int dim) {
  if (!(t > 0.0)) throw std::domain_error("gauss_kernel: t must be > 0");
  if (dim != 1 && dim != 2) throw std::domain_error("gauss_kernel: dim must be 1 or 2");
  const double r2 = norm2(x, dim);
  const double pref = std::pow(4.0 * std::numbers::pi * t, -0.5 * dim);
  return pref * std::exp(-r2 / (4.0 * t));
}

SampledFunction indicator(const ConvexDomain& k, const Grid& grid) {
  if (k.dim() != grid.dim) throw std::domain_error("indicator: dimension mismatch");
  std::vector<double> vals(grid.count(), 0.0);
  long inside = 0;
  for (long idx = 0; idx < grid.count(); ++idx) {
    if (k.contains(grid.point(grid.unflat(idx)))) {
      vals[idx] = 1.0;
      ++inside;
    }
  }
  if (inside == 0) throw std::domain_error("indicator: no grid point inside the region");
  return SampledFunction(grid, std::move(vals));
}

double eval_zero_extended(const SampledFunction& u, const Point& x) {
  const Grid& g = u.grid();
  const double tol = 1e-9 * g.h;
  for (int a = 0; a < g.dim; ++a) {
    if (x[a] < g.hull_lo(a) - tol || x[a] > g.hull_hi(a) + tol) return 0.0;
  }
  MultiIndex j;
  if (!g.aligned(x, &j)) {
    throw std::domain_error("eval_zero_extended: non-aligned query inside the hull");
  }
  for (int a = 0; a < g.dim; ++a) j[a] = std::clamp(j[a], 0L, g.extents[a] - 1);
  return u.values()[g.flat(j)];
}

SampledFunction recentre(const SampledFunction& u) {
  const Grid& g = u.grid();
  double m0 = 0.0;
  Point m1{0.0, 0.0};
  for (long f = 0; f < g.count(); ++f) {
    const double v = u.values()[f];
    if (v <= 0.0) continue;
    const Point x = g.point(g.unflat(f));
    m0 += v;
    m1[0] += x[0] * v;
    if (g.dim == 2) m1[1] += x[1] * v;
  }
  if (m0 == 0.0) throw std::domain_error("recentre: function vanishes identically");
  Grid shifted = g;
  shifted.origin[0] -= m1[0] / m0;
  if (g.dim == 2) shifted.origin[1] -= m1[1] / m0;
  return SampledFunction(shifted, u.values());
}

void write_csv(const SampledFunction& u, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  const Grid& g = u.grid();
  char buf[64];
  os << "# " << g.dim;
  std::snprintf(buf, sizeof buf, ",%.17g", g.h);
  os << buf;
  for (int a = 0; a < g.dim; ++a) {
    std::snprintf(buf, sizeof buf, ",%.17g", g.origin[a]);
    os << buf;
  }
  for (int a = 0; a < g.dim; ++a) os << "," << g.extents[a];
  os << "\n";
  for (long f = 0; f < g.count(); ++f) {
    const Point x = g.point(g.unflat(f));
    std::snprintf(buf, sizeof buf, "%.17g", x[0]);
    os << buf;
    if (g.dim == 2) {
      std::snprintf(buf, sizeof buf, ",%.17g", x[1]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g", u.values()[f]);
    os << buf << "\n";
  }
  if (!os) throw std::runtime_error("write_csv: write failed for " + path);
}

SampledFunction read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(is, line) || line.size() < 2 || line[0] != '#')
    throw std::runtime_error("read_csv: missing header");
  std::vector<double> head;
  {
    std::istringstream hs(line.substr(1));
    std::string tok;
    while (std::getline(hs, tok, ',')) head.push_back(std::stod(tok));
  }
  if (head.size() < 4) throw std::runtime_error("read_csv: short header");
  Grid g;
  g.dim = static_cast<int>(head[0]);
  if (g.dim != 1 && g.dim != 2) throw std::runtime_error("read_csv: bad dimension");
  g.h = head[1];
  if (head.size() != static_cast<std::size_t>(2 + 2 * g.dim))
    throw std::runtime_error("read_csv: header field count mismatch");
  g.origin = {head[2], g.dim == 2 ? head[3] : 0.0};
  g.extents = {static_cast<long>(head[2 + g.dim]), 1};
  if (g.dim == 2) g.extents[1] = static_cast<long>(head[3 + g.dim]);
  std::vector<double> vals;
  vals.reserve(g.count());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto last = line.find_last_of(',');
    if (last == std::string::npos) throw std::runtime_error("read_csv: bad row");
    vals.push_back(std::stod(line.substr(last + 1)));
  }
  if (static_cast<long>(vals.size()) != g.count())
    throw std::runtime_error("read_csv: row count mismatch");
  return SampledFunction(g, std::move(vals));
}

}  // namespace logconheat
