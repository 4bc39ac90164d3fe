#pragma once

// The logarithmic map from heat solutions to dispersive long wave fields,
//
//   u = sigma * 2 phi_x / phi,
//   h = -2 phi_x phi_y / phi^2 + 2 phi_xy / phi - 1,
//
// the closed-form solitary waves it produces from 1 + exp(theta), and the
// (1+1)-dimensional reduction along z = x + y.

#include <stdexcept>

#include "dlw/expr.hpp"
#include "dlw/seed.hpp"

namespace dlw {

struct FieldPair {
  double u = 0.0;
  double h = 0.0;
};

struct TransformOptions {
  double poleTolerance = 1e-12;
  /// Distance within which a zero of phi is also reported as a pole, using the
  /// first-order estimate |phi| < guardRadius * |grad phi|. Zero disables it.
  double guardRadius = 0.0;
};

class PoleError : public std::runtime_error {
 public:
  PoleError(const Point& p, double phi);
  const Point& point() const { return point_; }
  double phi() const { return phi_; }

 private:
  Point point_;
  double phi_;
};

/// Throws PoleError when |phi| < poleTolerance * (1 + |phi_x| + |phi_y|) or the
/// guard test fires.
FieldPair transform_point(const SeedField& field, const Point& p, const TransformOptions& opts = {});

/// Same map applied to precomputed partials.
FieldPair transform_jet(const SeedJet& jet, Branch branch);

/// General closed form for phi = 1 + exp(a(y) x - sigma a(y)^2 t + b(y)).
struct ExactParams {
  CoeffExpr a;
  CoeffExpr b;
  Branch branch = Branch::Plus;
};

FieldPair exact_uh(const ExactParams& params, const Point& p);

/// Constant-coefficient case a(y) = a, b(y) = c y + d.
FieldPair exact_uh_const(double a, double c, double d, Branch branch, const Point& p);

/// Fields depending on x + y = z only (a = c), evaluated at (z, 0, t).
FieldPair reduce_1plus1(double a, double d, Branch branch, double z, double t);

}  // namespace dlw
