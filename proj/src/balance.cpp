#include "dlw/balance.hpp"

#include <sstream>

#include "json.hpp"

namespace dlw {

namespace {

constexpr int kBalanceSearchBound = 4;

JetPoly phi_x() { return JetPoly::jet(1, 0, 0); }
JetPoly phi_y() { return JetPoly::jet(0, 1, 0); }
JetPoly phi_xy() { return JetPoly::jet(1, 1, 0); }

JetPoly dx(const JetPoly& p) { return total_derivative(p, Direction::X); }
JetPoly dy(const JetPoly& p) { return total_derivative(p, Direction::Y); }
JetPoly dt(const JetPoly& p) { return total_derivative(p, Direction::T); }

std::string f_text(Branch b) { return b == Branch::Plus ? "f = 2 ln phi" : "f = -2 ln phi"; }

}  // namespace

bool satisfies_balance(const BalanceExponents& e) {
  // (u^2)_xy ~ phi_x^(2l+1) phi_y^(2m+1) phi_t^(2n)   vs  h_xx ~ phi_x^(p+2) phi_y^q phi_t^r
  // (u h)_x ~ phi_x^(l+p+1) phi_y^(m+q) phi_t^(n+r)  vs  u_xxy ~ phi_x^(l+2) phi_y^(m+1) phi_t^n
  return 2 * e.l + 1 == e.p + 2 && 2 * e.m + 1 == e.q && 2 * e.n == e.r &&
         e.l + e.p + 1 == e.l + 2 && e.m + e.q == e.m + 1 && e.n + e.r == e.n;
}

std::vector<BalanceExponents> balance_solutions(int bound) {
  std::vector<BalanceExponents> found;
  for (int l = 0; l <= bound; ++l)
    for (int m = 0; m <= bound; ++m)
      for (int n = 0; n <= bound; ++n)
        for (int p = 0; p <= bound; ++p)
          for (int q = 0; q <= bound; ++q)
            for (int r = 0; r <= bound; ++r) {
              const BalanceExponents e{l, m, n, p, q, r};
              if (satisfies_balance(e)) found.push_back(e);
            }
  return found;
}

BalanceExponents solve_balance_exponents() {
  const auto found = balance_solutions(kBalanceSearchBound);
  if (found.empty()) throw std::runtime_error("balance system has no nonnegative solution");
  if (found.size() > 1) throw std::runtime_error("balance system solution is not unique");
  return found.front();
}

Ansatz build_ansatz(const BalanceExponents& e, const Rational& A) {
  if (!(e == BalanceExponents{1, 0, 0, 1, 1, 0})) {
    throw std::invalid_argument("unsupported balance exponents; only (1,0,0,1,1,0) has an ansatz");
  }
  Ansatz a;
  a.u = JetPoly::f(1) * phi_x();
  a.h = JetPoly::g(2) * phi_x() * phi_y() + JetPoly::g(1) * phi_xy() + JetPoly::constant(A);
  return a;
}

Residuals build_residuals(const Ansatz& ansatz) {
  const JetPoly& u = ansatz.u;
  const JetPoly& h = ansatz.h;
  const Rational half(1, 2);
  Residuals r;
  r.e1 = dt(dy(u)) + dx(dx(h)) + half * dy(dx(u * u));
  r.e2 = dt(h) + dx(u * h + u + dy(dx(u)));
  return r;
}

Residuals build_residuals(const Rational& A) {
  return build_residuals(build_ansatz(solve_balance_exponents(), A));
}

std::vector<JetIndex> leading_jets() {
  return {JetIndex{1, 0, 0}, JetIndex{1, 0, 0}, JetIndex{1, 0, 0}, JetIndex{0, 1, 0}};
}

JetPoly heat_expression(Branch branch) {
  return JetPoly::jet(0, 0, 1) + Rational(sign(branch)) * JetPoly::jet(2, 0, 0);
}

JetPoly heat_operator(const JetPoly& second_order_coeff, Branch branch) {
  const JetPoly w = heat_expression(branch);
  return phi_x() * phi_y() * JetPoly::g(3) * w +
         JetPoly::g(2) * (phi_x() * dy(w) + phi_y() * dx(w) + phi_xy() * w) +
         second_order_coeff * dy(dx(w));
}

bool DerivationCheck::passed() const {
  for (const auto& p : odeResiduals)
    if (!p.is_zero()) return false;
  for (const auto& p : identityResiduals)
    if (!p.is_zero()) return false;
  return e1Residual.is_zero() && e2Residual.is_zero() && factorizationDeltas.first.is_zero() &&
         factorizationDeltas.second.is_zero();
}

DerivationCheck check_ode_system(Branch branch) {
  const Residuals formal = build_residuals(Rational(-1));
  DerivationCheck check;
  check.branch = branch;
  check.odeResiduals.push_back(specialize_log(coefficient_of(formal.e1, leading_jets()), branch));
  check.odeResiduals.push_back(specialize_log(coefficient_of(formal.e2, leading_jets()), branch));

  const JetPoly g1 = JetPoly::g(1), g2 = JetPoly::g(2), g3 = JetPoly::g(3);
  check.identityResiduals.push_back(specialize_log(g1 * g2 + g3, branch));
  check.identityResiduals.push_back(specialize_log(g1 * g1 + Rational(2) * g2, branch));
  return check;
}

DerivationCheck verify_factorization(Branch branch, const Rational& A) {
  DerivationCheck check = check_ode_system(branch);
  check.A = A;
  const Residuals formal = build_residuals(A);
  const JetPoly s1 = specialize_log(formal.e1, branch);
  const JetPoly s2 = specialize_log(formal.e2, branch);
  check.e1Residual = reduce_heat(s1, branch);
  check.e2Residual = reduce_heat(s2, branch);

  // Both factorizations carry g' on the mixed second derivative; the first one
  // additionally carries the overall sign sigma.
  const JetPoly rhs1 = Rational(sign(branch)) * heat_operator(JetPoly::g(1), branch);
  const JetPoly rhs2 = heat_operator(JetPoly::g(1), branch);
  check.factorizationDeltas = {s1 - specialize_log(rhs1, branch),
                               s2 - specialize_log(rhs2, branch)};
  return check;
}

BalanceReport derive() {
  BalanceReport report;
  report.exponents = solve_balance_exponents();
  report.A = -1;
  report.g = FunctionDescription{Family::G, Branch::Plus, "g = 2 ln phi"};
  bool ok = true;
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    report.f.push_back(FunctionDescription{Family::F, b, f_text(b)});
    report.checks.push_back(verify_factorization(b, report.A));
    ok = ok && report.checks.back().passed();
  }
  if (!ok) throw DerivationFailure("homogeneous balance derivation left nonzero residuals", report.checks);
  return report;
}

std::string render_text(const DerivationCheck& check) {
  std::ostringstream os;
  os << "branch " << to_string(check.branch) << " (sigma = " << sign(check.branch)
     << ", A = " << check.A.get_str() << "): " << (check.passed() ? "PASS" : "FAIL") << '\n';
  static const char* ode_names[] = {"g^(4) + f''^2 + f'f'''", "f^(4) + f''g'' + f'g'''"};
  for (std::size_t n = 0; n < check.odeResiduals.size(); ++n) {
    os << "  ode " << (n < 2 ? ode_names[n] : "?") << " -> " << to_string(check.odeResiduals[n]) << '\n';
  }
  static const char* id_names[] = {"g'g'' + g'''", "g'^2 + 2g''"};
  for (std::size_t n = 0; n < check.identityResiduals.size(); ++n) {
    os << "  identity " << (n < 2 ? id_names[n] : "?") << " -> "
       << to_string(check.identityResiduals[n]) << '\n';
  }
  os << "  equation 1 under heat constraint -> " << to_string(check.e1Residual) << '\n';
  os << "  equation 2 under heat constraint -> " << to_string(check.e2Residual) << '\n';
  os << "  factorization delta 1 -> " << to_string(check.factorizationDeltas.first) << '\n';
  os << "  factorization delta 2 -> " << to_string(check.factorizationDeltas.second) << '\n';
  return os.str();
}

std::string render_text(const BalanceReport& report) {
  std::ostringstream os;
  const auto& e = report.exponents;
  os << "homogeneous balance exponents\n";
  os << "  (l,m,n,p,q,r) = (" << e.l << ',' << e.m << ',' << e.n << ',' << e.p << ',' << e.q << ','
     << e.r << ")\n";
  const Ansatz ansatz = build_ansatz(e, report.A);
  os << "ansatz\n";
  os << "  u = " << to_string(ansatz.u) << '\n';
  os << "  h = " << to_string(ansatz.h) << '\n';
  os << "solutions of the leading-order ODE system\n";
  for (const auto& f : report.f) os << "  " << f.text << "  (branch " << to_string(f.branch) << ")\n";
  os << "  " << report.g.text << '\n';
  os << "  A = " << report.A.get_str() << '\n';
  os << "transformation (phi_t + sigma*phi_xx = 0)\n";
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    os << "  sigma = " << (sign(b) > 0 ? "+1" : "-1") << ":  u = "
       << to_string(specialize_log(ansatz.u, b)) << ",  h = " << to_string(specialize_log(ansatz.h, b))
       << '\n';
  }
  os << "exact checks\n";
  for (const auto& c : report.checks) os << render_text(c);
  return os.str();
}

std::string render_json(const BalanceReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  const auto& e = report.exponents;
  j["exponents"] = {{"l", e.l}, {"m", e.m}, {"n", e.n}, {"p", e.p}, {"q", e.q}, {"r", e.r}};
  ordered_json fs = ordered_json::array();
  for (const auto& f : report.f) fs.push_back({{"branch", to_string(f.branch)}, {"f", f.text}});
  j["f"] = fs;
  j["g"] = report.g.text;
  j["A"] = report.A.get_str();
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json cj;
    cj["branch"] = to_string(c.branch);
    cj["A"] = c.A.get_str();
    cj["passed"] = c.passed();
    ordered_json ode = ordered_json::array();
    for (const auto& p : c.odeResiduals) ode.push_back(to_string(p));
    cj["odeResiduals"] = ode;
    ordered_json ids = ordered_json::array();
    for (const auto& p : c.identityResiduals) ids.push_back(to_string(p));
    cj["identityResiduals"] = ids;
    cj["e1Residual"] = to_string(c.e1Residual);
    cj["e2Residual"] = to_string(c.e2Residual);
    cj["factorizationDeltas"] = {to_string(c.factorizationDeltas.first),
                                 to_string(c.factorizationDeltas.second)};
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

}  // namespace dlw
