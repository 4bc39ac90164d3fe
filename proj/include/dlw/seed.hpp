#pragma once

// Solutions phi(x, y, t) of the linear equation phi_t + sigma*phi_xx = 0 built
// from exponential kernels with y-dependent coefficients and heat polynomials.

#include <optional>
#include <stdexcept>
#include <vector>

#include "dlw/expr.hpp"
#include "dlw/jet.hpp"

namespace dlw {

struct Point {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

/// amplitude * exp(a(y) x - sigma a(y)^2 t + b(y))
struct Kernel {
  double amplitude = 1.0;
  CoeffExpr a;
  CoeffExpr b;
};

/// c2(y) (x^2 - 2 sigma t) + c1(y) x + c0(y)
struct HeatPolynomial {
  CoeffExpr c2;
  CoeffExpr c1;
  CoeffExpr c0;
};

struct SeedSpec {
  Branch branch = Branch::Plus;
  double constantTerm = 0.0;
  std::vector<Kernel> kernels;
  std::optional<HeatPolynomial> polyPart;
};

/// 1 + exp(a(y) x - sigma a(y)^2 t + b(y)).
SeedSpec single_kernel_seed(Branch branch, CoeffExpr a, CoeffExpr b);

/// Multiplies every component by lambda.
SeedSpec scaled(const SeedSpec& spec, double lambda);

/// The partial derivatives of phi a SeedField can produce at a point.
struct SeedJet {
  double phi = 0.0;
  double phi_x = 0.0;
  double phi_xx = 0.0;
  double phi_xxx = 0.0;
  double phi_y = 0.0;
  double phi_t = 0.0;
  double phi_xy = 0.0;
  double phi_xxy = 0.0;
};

class UnsupportedIndexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SeedField {
 public:
  const SeedSpec& spec() const { return spec_; }
  Branch branch() const { return spec_.branch; }

  SeedJet evaluate(const Point& p) const;

  /// Supported indices: phi, x, xx, xxx, y, t, xy, xxy.
  double partial(const Point& p, const JetIndex& idx) const;

 private:
  friend SeedField make_seed(SeedSpec spec);
  explicit SeedField(SeedSpec spec) : spec_(std::move(spec)) {}
  SeedSpec spec_;
};

/// Throws std::invalid_argument for the identically zero seed (no constant,
/// no kernels with nonzero amplitude, no polynomial part).
SeedField make_seed(SeedSpec spec);

double seed_partial(const SeedField& field, const Point& p, const JetIndex& idx);

/// phi_t + sigma*phi_xx from a jet of partials.
double heat_residual(const SeedJet& jet, Branch branch);
double heat_residual(const SeedField& field, const Point& p);

}  // namespace dlw
