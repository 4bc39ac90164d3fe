#include "dlw/seed.hpp"

#include <cmath>
#include <string>

namespace dlw {

SeedSpec single_kernel_seed(Branch branch, CoeffExpr a, CoeffExpr b) {
  SeedSpec spec;
  spec.branch = branch;
  spec.constantTerm = 1.0;
  spec.kernels.push_back(Kernel{1.0, std::move(a), std::move(b)});
  return spec;
}

SeedSpec scaled(const SeedSpec& spec, double lambda) {
  SeedSpec out = spec;
  out.constantTerm *= lambda;
  for (auto& k : out.kernels) k.amplitude *= lambda;
  if (out.polyPart) {
    auto scale = [lambda](const CoeffExpr& e) {
      return CoeffExpr::binary(BinaryOp::Mul, CoeffExpr::literal(lambda), e);
    };
    out.polyPart = HeatPolynomial{scale(out.polyPart->c2), scale(out.polyPart->c1),
                                  scale(out.polyPart->c0)};
  }
  return out;
}

SeedField make_seed(SeedSpec spec) {
  bool nonzero = spec.constantTerm != 0.0 || spec.polyPart.has_value();
  for (const auto& k : spec.kernels) nonzero = nonzero || k.amplitude != 0.0;
  if (!nonzero) throw std::invalid_argument("seed is identically zero");
  return SeedField(std::move(spec));
}

SeedJet SeedField::evaluate(const Point& p) const {
  const double sigma = sign(spec_.branch);
  SeedJet j;
  j.phi = spec_.constantTerm;

  for (const auto& k : spec_.kernels) {
    const Dual a = eval_dual(k.a, p.y);
    const Dual b = eval_dual(k.b, p.y);
    const double theta = a.value * p.x - sigma * a.value * a.value * p.t + b.value;
    const double theta_y = a.deriv * p.x - 2.0 * sigma * a.value * a.deriv * p.t + b.deriv;
    const double e = k.amplitude * std::exp(theta);
    j.phi += e;
    j.phi_x += a.value * e;
    j.phi_xx += a.value * a.value * e;
    j.phi_xxx += a.value * a.value * a.value * e;
    j.phi_t += -sigma * a.value * a.value * e;
    j.phi_y += theta_y * e;
    j.phi_xy += (a.deriv + a.value * theta_y) * e;
    j.phi_xxy += (2.0 * a.value * a.deriv + a.value * a.value * theta_y) * e;
  }

  if (spec_.polyPart) {
    const Dual c2 = eval_dual(spec_.polyPart->c2, p.y);
    const Dual c1 = eval_dual(spec_.polyPart->c1, p.y);
    const Dual c0 = eval_dual(spec_.polyPart->c0, p.y);
    const double q = p.x * p.x - 2.0 * sigma * p.t;
    j.phi += c2.value * q + c1.value * p.x + c0.value;
    j.phi_x += 2.0 * c2.value * p.x + c1.value;
    j.phi_xx += 2.0 * c2.value;
    j.phi_t += -2.0 * sigma * c2.value;
    j.phi_y += c2.deriv * q + c1.deriv * p.x + c0.deriv;
    j.phi_xy += 2.0 * c2.deriv * p.x + c1.deriv;
    j.phi_xxy += 2.0 * c2.deriv;
  }
  return j;
}

double SeedField::partial(const Point& p, const JetIndex& idx) const {
  const SeedJet j = evaluate(p);
  if (idx.k == 0 && idx.j == 0) {
    switch (idx.i) {
      case 0: return j.phi;
      case 1: return j.phi_x;
      case 2: return j.phi_xx;
      case 3: return j.phi_xxx;
      default: break;
    }
  }
  if (idx == JetIndex{0, 1, 0}) return j.phi_y;
  if (idx == JetIndex{0, 0, 1}) return j.phi_t;
  if (idx == JetIndex{1, 1, 0}) return j.phi_xy;
  if (idx == JetIndex{2, 1, 0}) return j.phi_xxy;
  throw UnsupportedIndexError("seed partial " + to_string(idx) + " is not supported");
}

double seed_partial(const SeedField& field, const Point& p, const JetIndex& idx) {
  return field.partial(p, idx);
}

double heat_residual(const SeedJet& jet, Branch branch) {
  return jet.phi_t + sign(branch) * jet.phi_xx;
}

double heat_residual(const SeedField& field, const Point& p) {
  return heat_residual(field.evaluate(p), field.branch());
}

}  // namespace dlw
