#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dlw/seed.hpp"

using namespace dlw;

namespace {

CoeffExpr E(const char* s) { return parse_coeff_expr(s); }

// Fourth-order central difference of phi along one axis.
double fd(const SeedField& f, Point p, double Point::*axis, double h = 1e-3) {
  auto at = [&](double d) {
    Point q = p;
    q.*axis += d;
    return f.evaluate(q).phi;
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

std::vector<SeedSpec> seed_corpus() {
  std::vector<SeedSpec> out;
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    out.push_back(single_kernel_seed(b, E("1"), E("y")));
    out.push_back(single_kernel_seed(b, E("1 + 0.5*tanh(y)"), E("0.2*y")));
    SeedSpec two;
    two.branch = b;
    two.constantTerm = 1.0;
    two.kernels = {Kernel{1.0, E("0.8"), E("0.3*y")}, Kernel{0.5, E("1.2 + 0.1*sin(y)"), E("-y")}};
    out.push_back(two);
    SeedSpec poly;
    poly.branch = b;
    poly.constantTerm = 2.0;
    poly.polyPart = HeatPolynomial{E("1 + 0.2*y^2"), E("cos(y)"), E("0.5")};
    poly.kernels = {Kernel{0.3, E("0.6"), E("y")}};
    out.push_back(poly);
  }
  return out;
}

}  // namespace

TEST_CASE("single kernel partials at a known point") {
  const SeedField f = make_seed(single_kernel_seed(Branch::Plus, E("1"), E("y")));
  const Point p{std::log(3.0), 0.0, 0.0};
  const SeedJet j = f.evaluate(p);
  CHECK(j.phi == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(j.phi_x == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(j.phi_y == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(j.phi_xy == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(j.phi_xx == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(j.phi_t == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(seed_partial(f, p, JetIndex{1, 1, 0}) == j.phi_xy);
  CHECK(seed_partial(f, p, JetIndex{0, 0, 0}) == j.phi);

  const SeedField g = make_seed(single_kernel_seed(Branch::Minus, E("2"), E("0")));
  const SeedJet k = g.evaluate(Point{0.0, 0.0, 0.25});
  CHECK(k.phi == doctest::Approx(1.0 + std::exp(1.0)));  // theta = +a^2 t on the minus branch
}

TEST_CASE("constant and zero seeds") {
  SeedSpec c;
  c.constantTerm = 5.0;
  const SeedJet j = make_seed(c).evaluate(Point{0.3, -1.0, 2.0});
  CHECK(j.phi == 5.0);
  CHECK(j.phi_x == 0.0);
  CHECK(j.phi_xy == 0.0);
  CHECK_THROWS_AS(make_seed(SeedSpec{}), std::invalid_argument);
  SeedSpec z;
  z.kernels = {Kernel{0.0, E("1"), E("0")}};
  CHECK_THROWS_AS(make_seed(z), std::invalid_argument);
}

TEST_CASE("unsupported partial index") {
  const SeedField f = make_seed(single_kernel_seed(Branch::Plus, E("1"), E("y")));
  CHECK_THROWS_AS(seed_partial(f, Point{}, JetIndex{0, 2, 0}), UnsupportedIndexError);
  CHECK_THROWS_AS(seed_partial(f, Point{}, JetIndex{1, 0, 1}), UnsupportedIndexError);
}

TEST_CASE("partials agree with finite differences of phi") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ux(-1.5, 1.5), uy(-1.5, 1.5), ut(-0.5, 0.5);
  for (const SeedSpec& spec : seed_corpus()) {
    const SeedField f = make_seed(spec);
    for (int n = 0; n < 25; ++n) {
      const Point p{ux(rng), uy(rng), ut(rng)};
      const SeedJet j = f.evaluate(p);
      const double scale = 1.0 + std::abs(j.phi);
      CHECK(std::abs(fd(f, p, &Point::x) - j.phi_x) <= 1e-8 * scale);
      CHECK(std::abs(fd(f, p, &Point::y) - j.phi_y) <= 1e-8 * scale);
      CHECK(std::abs(fd(f, p, &Point::t) - j.phi_t) <= 1e-8 * scale);

      // mixed and higher partials through differences of the lower ones
      const double h = 1e-4;
      auto shifted = [&](double Point::*axis, double d) {
        Point q = p;
        q.*axis += d;
        return f.evaluate(q);
      };
      const double xy = (shifted(&Point::y, h).phi_x - shifted(&Point::y, -h).phi_x) / (2 * h);
      const double xx = (shifted(&Point::x, h).phi_x - shifted(&Point::x, -h).phi_x) / (2 * h);
      const double xxx = (shifted(&Point::x, h).phi_xx - shifted(&Point::x, -h).phi_xx) / (2 * h);
      const double xxy = (shifted(&Point::y, h).phi_xx - shifted(&Point::y, -h).phi_xx) / (2 * h);
      CHECK(std::abs(xy - j.phi_xy) <= 1e-6 * scale);
      CHECK(std::abs(xx - j.phi_xx) <= 1e-6 * scale);
      CHECK(std::abs(xxx - j.phi_xxx) <= 1e-6 * scale);
      CHECK(std::abs(xxy - j.phi_xxy) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("seeds solve the heat equation of their branch") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(-2.0, 2.0), ut(-1.0, 1.0);
  for (const SeedSpec& spec : seed_corpus()) {
    const SeedField f = make_seed(spec);
    for (int n = 0; n < 100; ++n) {
      const Point p{ux(rng), uy(rng), ut(rng)};
      const SeedJet j = f.evaluate(p);
      CHECK(std::abs(heat_residual(f, p)) <= 1e-12 * (1.0 + std::abs(j.phi_t)));
      // the other branch's equation fails wherever the seed is not x-linear
      if (std::abs(j.phi_xx) > 1e-6) CHECK(std::abs(heat_residual(j, opposite(spec.branch))) > 1e-7);
    }
  }
}

TEST_CASE("a kernel with the wrong time dependence is caught") {
  // theta = a x + b with the -sigma a^2 t term dropped: phi_t = 0, phi_xx = a^2 e^theta.
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const double a = 1.3, bb = 0.2, x = 0.4;
    const double e = std::exp(a * x + bb);
    SeedJet j;
    j.phi = 1.0 + e;
    j.phi_x = a * e;
    j.phi_xx = a * a * e;
    j.phi_t = 0.0;
    CHECK(heat_residual(j, b) == doctest::Approx(sign(b) * a * a * e));
  }
}

TEST_CASE("linearity and scaling") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SeedSpec one = single_kernel_seed(Branch::Plus, E("1 + 0.5*tanh(y)"), E("0.2*y"));
  SeedSpec halves = one;
  halves.kernels = {Kernel{0.5, one.kernels[0].a, one.kernels[0].b}, Kernel{0.5, one.kernels[0].a, one.kernels[0].b}};
  const SeedField f1 = make_seed(one), f2 = make_seed(halves), f3 = make_seed(scaled(one, 3.7));
  for (int n = 0; n < 50; ++n) {
    const Point p{u(rng), u(rng), u(rng)};
    const SeedJet a = f1.evaluate(p), b = f2.evaluate(p), c = f3.evaluate(p);
    CHECK(a.phi == doctest::Approx(b.phi).epsilon(1e-14));
    CHECK(a.phi_xy == doctest::Approx(b.phi_xy).epsilon(1e-14));
    CHECK(a.phi_xxy == doctest::Approx(b.phi_xxy).epsilon(1e-14));
    CHECK(c.phi == doctest::Approx(3.7 * a.phi).epsilon(1e-14));
    CHECK(c.phi_y == doctest::Approx(3.7 * a.phi_y).epsilon(1e-14));
  }
}
