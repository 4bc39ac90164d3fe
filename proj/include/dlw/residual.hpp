#pragma once

// Finite-difference residuals of the dispersive long wave system
//
//   r1 = u_yt + h_xx + (u^2)_xy / 2
//   r2 = h_t + (u h + u + u_xy)_x
//
// and of its (1+1)-dimensional reduction, computed only from point samples of
// (u, h) with second-order central stencils.

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dlw/seed.hpp"
#include "dlw/transform.hpp"

namespace dlw {

/// Must be pure. May throw PoleError, which the oracle turns into a skip.
using FieldSampler = std::function<FieldPair(const Point&)>;
using ReducedSampler = std::function<FieldPair(double z, double t)>;

struct StencilConfig {
  double step = 5e-3;
};

/// Distance from the stencil centre to its farthest sample.
double stencil_radius(const StencilConfig& cfg);

struct ResidualPair {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Raised when a sample inside the stencil footprint hits a pole.
class StencilPoleError : public std::runtime_error {
 public:
  StencilPoleError(const Point& centre, const Point& sample, const std::string& what);
  const Point& centre() const { return centre_; }
  const Point& sample() const { return sample_; }

 private:
  Point centre_;
  Point sample_;
};

ResidualPair fd_residual_dlw(const FieldSampler& s, const Point& p, const StencilConfig& cfg = {});

/// r1 = u_t + h_z + (u^2)_z / 2, r2 = h_t + (u h + u + u_zz)_z. For the 1D
/// oracle the stencil point carries z in x and t in t.
ResidualPair fd_residual_1d(const ReducedSampler& s, double z, double t, const StencilConfig& cfg = {});

struct OrderEstimate {
  enum class Status { Measured, ExactToRoundoff };
  Status status = Status::Measured;
  double order = 0.0;
  double coarse = 0.0;  // |r| at the larger step
  double fine = 0.0;    // |r| at the smaller step
};

struct ConvergenceReport {
  std::array<OrderEstimate, 2> equations;
};

/// Observed order log(|r(h1)| / |r(h2)|) / log(h1 / h2) per equation.
ConvergenceReport convergence_order(const FieldSampler& s, const Point& p, double coarse_step,
                                    double fine_step);

inline constexpr double kRoundoffFloor = 1e-13;

struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  double at(int n) const { return count == 1 ? lo : lo + (hi - lo) * n / (count - 1); }
};

struct GridSpec {
  Axis x, y, t;

  std::size_t size() const {
    return static_cast<std::size_t>(x.count) * static_cast<std::size_t>(y.count) *
           static_cast<std::size_t>(t.count);
  }
  /// Linear index n in x-fastest order.
  Point point(std::size_t n) const;
};

/// Throws std::invalid_argument unless every count is >= 1 and lo <= hi.
void validate(const GridSpec& grid);

struct PointResidual {
  Point point;
  bool skipped = false;
  FieldPair fields;  // sample at the centre; meaningless when skipped
  ResidualPair residual;
};

/// Every grid point in x-fastest order. `threads` > 1 splits the points across
/// worker threads; the result does not depend on it.
std::vector<PointResidual> grid_evaluate(const FieldSampler& s, const GridSpec& grid,
                                         const StencilConfig& cfg, unsigned threads = 1);

struct EquationStats {
  double maxAbs = 0.0;
  double meanAbs = 0.0;
  Point worst;
};

struct ResidualReport {
  std::array<EquationStats, 2> equations;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  GridSpec grid;
  StencilConfig stencil;

  double max_abs() const { return std::max(equations[0].maxAbs, equations[1].maxAbs); }
};

ResidualReport summarize(const std::vector<PointResidual>& points, const GridSpec& grid,
                         const StencilConfig& cfg);

ResidualReport grid_report(const FieldSampler& s, const GridSpec& grid, const StencilConfig& cfg = {},
                           unsigned threads = 1);

}  // namespace dlw
