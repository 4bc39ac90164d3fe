#include "dlw/transform.hpp"

#include <cmath>
#include <sstream>

namespace dlw {

namespace {

std::string describe(const Point& p, double phi) {
  std::ostringstream os;
  os.precision(17);
  os << "pole of the transformation at (x, y, t) = (" << p.x << ", " << p.y << ", " << p.t
     << "), phi = " << phi;
  return os.str();
}

}  // namespace

PoleError::PoleError(const Point& p, double phi)
    : std::runtime_error(describe(p, phi)), point_(p), phi_(phi) {}

FieldPair transform_jet(const SeedJet& j, Branch branch) {
  FieldPair f;
  f.u = sign(branch) * 2.0 * j.phi_x / j.phi;
  f.h = -2.0 * j.phi_x * j.phi_y / (j.phi * j.phi) + 2.0 * j.phi_xy / j.phi - 1.0;
  return f;
}

FieldPair transform_point(const SeedField& field, const Point& p, const TransformOptions& opts) {
  const SeedJet j = field.evaluate(p);
  const double scale = 1.0 + std::abs(j.phi_x) + std::abs(j.phi_y);
  if (std::abs(j.phi) < opts.poleTolerance * scale) throw PoleError(p, j.phi);
  if (opts.guardRadius > 0.0) {
    const double grad = std::sqrt(j.phi_x * j.phi_x + j.phi_y * j.phi_y + j.phi_t * j.phi_t);
    if (std::abs(j.phi) < opts.guardRadius * grad) throw PoleError(p, j.phi);
  }
  return transform_jet(j, field.branch());
}

FieldPair exact_uh(const ExactParams& params, const Point& p) {
  const double sigma = sign(params.branch);
  const Dual a = eval_dual(params.a, p.y);
  const Dual b = eval_dual(params.b, p.y);
  const double half_theta = 0.5 * (a.value * p.x - sigma * a.value * a.value * p.t + b.value);
  const double th = std::tanh(half_theta);
  const double sech = 1.0 / std::cosh(half_theta);
  const double theta_y = a.deriv * p.x - 2.0 * sigma * a.value * a.deriv * p.t + b.deriv;
  FieldPair f;
  f.u = sigma * a.value * (1.0 + th);
  f.h = 0.5 * a.value * theta_y * sech * sech + a.deriv * th + a.deriv - 1.0;
  return f;
}

FieldPair exact_uh_const(double a, double c, double d, Branch branch, const Point& p) {
  const double sigma = sign(branch);
  const double half_theta = 0.5 * (a * p.x - sigma * a * a * p.t + c * p.y + d);
  const double sech = 1.0 / std::cosh(half_theta);
  FieldPair f;
  f.u = sigma * a * (1.0 + std::tanh(half_theta));
  f.h = 0.5 * a * c * sech * sech - 1.0;
  return f;
}

FieldPair reduce_1plus1(double a, double d, Branch branch, double z, double t) {
  return exact_uh_const(a, a, d, branch, Point{z, 0.0, t});
}

}  // namespace dlw
