#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <set>

#include "dlw/balance.hpp"

using namespace dlw;

namespace {

const JetPoly phi_x = JetPoly::jet(1, 0, 0);
const JetPoly phi_y = JetPoly::jet(0, 1, 0);

JetPoly dx(const JetPoly& p) { return total_derivative(p, Direction::X); }
JetPoly dy(const JetPoly& p) { return total_derivative(p, Direction::Y); }
JetPoly dt(const JetPoly& p) { return total_derivative(p, Direction::T); }

JetPoly first_order_power(int a, int b, int c) {
  return pow(phi_x, a) * pow(phi_y, b) * pow(JetPoly::jet(0, 0, 1), c);
}

// Exponents of phi_x, phi_y, phi_t in the top-degree part of p that contains
// only first-order jets; the top-degree part of these expressions has exactly one.
std::array<int, 3> leading_exponents(const JetPoly& p) {
  const auto parts = degree_decompose(p);
  REQUIRE(!parts.empty());
  std::set<std::array<int, 3>> found;
  for (const auto& m : parts.rbegin()->second.monomials()) {
    std::array<int, 3> cnt{0, 0, 0};
    bool first_order = true;
    for (const auto& j : m.key.jets) {
      if (j.order() != 1) first_order = false;
      cnt[j.i ? 0 : j.j ? 1 : 2]++;
    }
    if (first_order) found.insert(cnt);
  }
  CHECK(found.size() == 1);
  return found.empty() ? std::array<int, 3>{-1, -1, -1} : *found.begin();
}

// Independent balance test: build both sides of each balance pair symbolically
// and compare the leading first-order monomials.
bool balances_symbolically(int l, int m, int n, int p, int q, int r) {
  const JetPoly u = JetPoly::f(1) * first_order_power(l, m, n);
  const JetPoly h = JetPoly::g(1) * first_order_power(p, q, r);
  return leading_exponents(dx(dy(u * u))) == leading_exponents(dx(dx(h))) &&
         leading_exponents(dx(u * h)) == leading_exponents(dx(dx(dy(u))));
}

}  // namespace

TEST_CASE("balance exponents") {
  const BalanceExponents e = solve_balance_exponents();
  CHECK(e == BalanceExponents{1, 0, 0, 1, 1, 0});
  CHECK(satisfies_balance(e));
  CHECK_FALSE(satisfies_balance(BalanceExponents{1, 0, 0, 1, 0, 0}));
  CHECK(balance_solutions(4).size() == 1);
  CHECK(balance_solutions(7).size() == 1);
}

TEST_CASE("balance exponents agree with a symbolic brute-force search") {
  std::vector<BalanceExponents> oracle;
  for (int l = 0; l <= 3; ++l)
    for (int m = 0; m <= 3; ++m)
      for (int n = 0; n <= 2; ++n)
        for (int p = 0; p <= 3; ++p)
          for (int q = 0; q <= 3; ++q)
            for (int r = 0; r <= 2; ++r)
              if (balances_symbolically(l, m, n, p, q, r)) oracle.push_back({l, m, n, p, q, r});
  REQUIRE(oracle.size() == 1);
  CHECK(oracle.front() == solve_balance_exponents());
}

TEST_CASE("ansatz shape") {
  const Ansatz a = build_ansatz(solve_balance_exponents(), Rational(-1));
  CHECK(a.u == JetPoly::f(1) * phi_x);
  const auto parts = degree_decompose(a.h);
  CHECK(parts.at(2) == JetPoly::g(2) * phi_x * phi_y);
  CHECK(parts.at(1) == JetPoly::g(1) * JetPoly::jet(1, 1, 0));
  CHECK(parts.at(0) == JetPoly::constant(Rational(-1)));
  CHECK_THROWS_AS(build_ansatz(BalanceExponents{2, 0, 0, 1, 1, 0}, Rational(-1)), std::invalid_argument);
}

TEST_CASE("residuals: degree structure and leading coefficients") {
  const Residuals r = build_residuals(Rational(-1));
  for (const JetPoly* e : {&r.e1, &r.e2}) {
    const auto parts = degree_decompose(*e);
    CHECK(parts.rbegin()->first == 4);
    CHECK(parts.begin()->first >= 1);
  }
  const auto F = [](int n) { return JetPoly::f(n); };
  const auto G = [](int n) { return JetPoly::g(n); };
  // hand expansion of the phi_x^3 phi_y coefficients
  CHECK(coefficient_of(r.e1, leading_jets()) == G(4) + F(2) * F(2) + F(1) * F(3));
  CHECK(coefficient_of(r.e2, leading_jets()) == F(4) + F(2) * G(2) + F(1) * G(3));
  CHECK(leading_exponents(r.e1) == std::array<int, 3>{3, 1, 0});
}

TEST_CASE("vacuum u = 0, h = -1 gives zero residuals") {
  const Residuals r = build_residuals(Ansatz{JetPoly{}, JetPoly::constant(Rational(-1))});
  CHECK(r.e1.is_zero());
  CHECK(r.e2.is_zero());
}

TEST_CASE("leading-coefficient ODEs and identities vanish on both branches") {
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const DerivationCheck c = check_ode_system(b);
    REQUIRE(c.odeResiduals.size() == 2);
    REQUIRE(c.identityResiduals.size() == 2);
    for (const auto& p : c.odeResiduals) CHECK(p.is_zero());
    for (const auto& p : c.identityResiduals) CHECK(p.is_zero());
  }
  const JetPoly spec = specialize_log(JetPoly::g(1) * JetPoly::g(2) + JetPoly::g(3), Branch::Plus);
  CHECK(spec.is_zero());
}

TEST_CASE("full verification on both branches") {
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const DerivationCheck c = verify_factorization(b);
    CHECK(c.e1Residual.is_zero());
    CHECK(c.e2Residual.is_zero());
    CHECK(c.factorizationDeltas.first.is_zero());
    CHECK(c.factorizationDeltas.second.is_zero());
    CHECK(c.passed());

    // Independent route: specialize the residuals, then eliminate t-derivatives.
    const Residuals r = build_residuals(Rational(-1));
    CHECK(reduce_heat(specialize_log(r.e1, b), b).is_zero());
    CHECK(reduce_heat(specialize_log(r.e2, b), b).is_zero());
    CHECK(reduce_heat(heat_expression(b), b).is_zero());
  }
}

TEST_CASE("the constant A is forced to -1") {
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const JetPoly ux = reduce_heat(specialize_log(dx(JetPoly::f(1) * phi_x), b), b);
    CHECK_FALSE(ux.is_zero());
    for (const Rational& A : {Rational(0), Rational(2), Rational(-3, 2), Rational(5)}) {
      const DerivationCheck c = verify_factorization(b, A);
      CHECK_FALSE(c.passed());
      CHECK(c.e1Residual.is_zero());
      CHECK(c.e2Residual == (A + 1) * ux);
    }
  }
  const Rational A(0);
  const DerivationCheck c = verify_factorization(Branch::Plus, A);
  CHECK(c.e2Residual == Rational(-2) * JetPoly::phi_power(-2) * phi_x * phi_x +
                            Rational(2) * JetPoly::phi_power(-1) * JetPoly::jet(2, 0, 0));
}

TEST_CASE("the second factorization uses g', not f'") {
  const Residuals r = build_residuals(Rational(-1));
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const JetPoly with_f = specialize_log(r.e2, b) - specialize_log(heat_operator(JetPoly::f(1), b), b);
    if (b == Branch::Plus) {
      CHECK(with_f.is_zero());
    } else {
      const JetPoly expected = Rational(4) * JetPoly::phi_power(-1) * JetPoly::jet(1, 1, 1) -
                               Rational(4) * JetPoly::phi_power(-1) * JetPoly::jet(3, 1, 0);
      CHECK(with_f == expected);
    }
  }
}

TEST_CASE("derive report") {
  const BalanceReport rep = derive();
  CHECK(rep.exponents == BalanceExponents{1, 0, 0, 1, 1, 0});
  CHECK(rep.A == -1);
  REQUIRE(rep.checks.size() == 2);
  CHECK(rep.checks[0].branch == Branch::Plus);
  CHECK(rep.checks[1].branch == Branch::Minus);

  const std::string text = render_text(rep);
  CHECK(text.find("(l,m,n,p,q,r) = (1,0,0,1,1,0)") != std::string::npos);
  CHECK(text.find("A = -1") != std::string::npos);
  CHECK(text.find("FAIL") == std::string::npos);
  CHECK(render_text(derive()) == text);
  CHECK(render_json(derive()) == render_json(rep));
}
