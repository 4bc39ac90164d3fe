#include "dlw/jet.hpp"

#include <algorithm>
#include <sstream>

namespace dlw {

std::string to_string(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

JetIndex jet_index(int i, int j, int k) {
  if (i < 0 || j < 0 || k < 0) throw std::invalid_argument("jet index orders must be nonnegative");
  if (i + j + k > kMaxJetOrder) {
    throw OrderLimitError("jet index (" + std::to_string(i) + "," + std::to_string(j) + "," +
                          std::to_string(k) + ") exceeds total order " +
                          std::to_string(kMaxJetOrder));
  }
  return JetIndex{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                  static_cast<std::uint8_t>(k)};
}

JetIndex JetIndex::raised(Direction d) const {
  switch (d) {
    case Direction::X: return jet_index(i + 1, j, k);
    case Direction::Y: return jet_index(i, j + 1, k);
    case Direction::T: return jet_index(i, j, k + 1);
  }
  return *this;
}

std::string to_string(const JetIndex& idx) {
  if (idx.is_phi()) return "phi";
  std::string s = "phi_";
  s.append(idx.i, 'x');
  s.append(idx.j, 'y');
  s.append(idx.k, 't');
  return s;
}

std::string to_string(const CoeffSymbol& s) {
  std::string out(1, s.family == Family::F ? 'f' : 'g');
  if (s.order <= 3) {
    out.append(s.order, '\'');
  } else {
    out += "^(" + std::to_string(s.order) + ")";
  }
  return out;
}

namespace {

JetIndex raise_checked(const JetIndex& idx, Direction d, const MonomialKey& context) {
  try {
    return idx.raised(d);
  } catch (const OrderLimitError&) {
    throw OrderLimitError("derivative order limit " + std::to_string(kMaxJetOrder) +
                          " exceeded while differentiating monomial " + to_string(context));
  }
}

JetIndex unit_jet(Direction d) {
  switch (d) {
    case Direction::X: return {1, 0, 0};
    case Direction::Y: return {0, 1, 0};
    case Direction::T: return {0, 0, 1};
  }
  return {};
}

void insert_sorted(std::vector<JetIndex>& v, JetIndex idx) {
  v.insert(std::upper_bound(v.begin(), v.end(), idx), idx);
}

// (-1)^(n-1) (n-1)!, the n-th derivative of ln(phi) without the phi^-n factor.
Rational log_derivative_coefficient(int n) {
  mpz_class fact = 1;
  for (int m = 2; m < n; ++m) fact *= m;
  Rational c(fact);
  if ((n - 1) % 2 != 0) c = -c;
  return c;
}

}  // namespace

JetPoly JetPoly::constant(const Rational& c) {
  JetPoly p;
  p.add_term(MonomialKey{}, c);
  return p;
}

JetPoly JetPoly::jet(int i, int j, int k) { return jet(jet_index(i, j, k)); }

JetPoly JetPoly::jet(const JetIndex& idx) {
  if (idx.is_phi()) return phi_power(1);
  JetPoly p;
  MonomialKey key;
  key.jets.push_back(idx);
  p.add_term(key, Rational(1));
  return p;
}

JetPoly JetPoly::phi_power(int power) {
  JetPoly p;
  MonomialKey key;
  key.phiPower = power;
  p.add_term(key, Rational(1));
  return p;
}

JetPoly JetPoly::symbol(Family family, int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw OrderLimitError("coefficient symbol order " + std::to_string(order) + " outside [0, " +
                          std::to_string(kMaxJetOrder) + "]");
  }
  JetPoly p;
  MonomialKey key;
  key.symbols.push_back(CoeffSymbol{family, static_cast<std::uint8_t>(order)});
  p.add_term(key, Rational(1));
  return p;
}

JetPoly JetPoly::from_monomial(const Monomial& m) {
  MonomialKey key = m.key;
  std::sort(key.jets.begin(), key.jets.end());
  std::sort(key.symbols.begin(), key.symbols.end());
  for (const auto& idx : key.jets) {
    if (idx.is_phi()) throw std::invalid_argument("phi itself must be expressed as a phi power");
    if (idx.order() > kMaxJetOrder) throw OrderLimitError("jet factor exceeds order limit");
  }
  JetPoly p;
  p.add_term(key, m.coeff);
  return p;
}

std::vector<Monomial> JetPoly::monomials() const {
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (const auto& [key, c] : terms_) out.push_back(Monomial{c, key});
  return out;
}

bool JetPoly::has_symbols() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const auto& kv) { return !kv.first.symbols.empty(); });
}

void JetPoly::add_term(const MonomialKey& key, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (inserted) {
    it->second.canonicalize();  // GMP equality assumes lowest terms
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

JetPoly& JetPoly::operator+=(const JetPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key, c);
  return *this;
}

JetPoly& JetPoly::operator-=(const JetPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key, -c);
  return *this;
}

JetPoly& JetPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, v] : terms_) v *= c;
  return *this;
}

MonomialKey multiply(const MonomialKey& a, const MonomialKey& b) {
  MonomialKey out;
  out.phiPower = a.phiPower + b.phiPower;
  out.jets.reserve(a.jets.size() + b.jets.size());
  std::merge(a.jets.begin(), a.jets.end(), b.jets.begin(), b.jets.end(),
             std::back_inserter(out.jets));
  out.symbols.reserve(a.symbols.size() + b.symbols.size());
  std::merge(a.symbols.begin(), a.symbols.end(), b.symbols.begin(), b.symbols.end(),
             std::back_inserter(out.symbols));
  return out;
}

JetPoly operator*(const JetPoly& a, const JetPoly& b) {
  JetPoly out;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) out.add_term(multiply(ka, kb), ca * cb);
  }
  return out;
}

bool operator==(const JetPoly& a, const JetPoly& b) { return a.terms_ == b.terms_; }

JetPoly pow(const JetPoly& p, int n) {
  if (n < 0) throw std::invalid_argument("pow: negative exponent");
  JetPoly out = JetPoly::constant(Rational(1));
  for (int m = 0; m < n; ++m) out = out * p;
  return out;
}

JetPoly total_derivative(const JetPoly& p, Direction d) {
  JetPoly out;
  const JetIndex unit = unit_jet(d);
  for (const auto& [key, c] : p.terms()) {
    // phi^p -> p phi^(p-1) phi_d
    if (key.phiPower != 0) {
      MonomialKey k = key;
      k.phiPower -= 1;
      insert_sorted(k.jets, unit);
      out.add_term(k, c * key.phiPower);
    }
    for (std::size_t n = 0; n < key.jets.size(); ++n) {
      if (n > 0 && key.jets[n] == key.jets[n - 1]) continue;  // handled with multiplicity
      const auto mult = std::count(key.jets.begin(), key.jets.end(), key.jets[n]);
      MonomialKey k = key;
      k.jets.erase(k.jets.begin() + static_cast<std::ptrdiff_t>(n));
      insert_sorted(k.jets, raise_checked(key.jets[n], d, key));
      out.add_term(k, c * static_cast<long>(mult));
    }
    for (std::size_t n = 0; n < key.symbols.size(); ++n) {
      if (n > 0 && key.symbols[n] == key.symbols[n - 1]) continue;
      const auto mult = std::count(key.symbols.begin(), key.symbols.end(), key.symbols[n]);
      const CoeffSymbol s = key.symbols[n];
      if (s.order + 1 > kMaxJetOrder) {
        throw OrderLimitError("coefficient symbol order limit exceeded while differentiating " +
                              to_string(key));
      }
      MonomialKey k = key;
      k.symbols.erase(k.symbols.begin() + static_cast<std::ptrdiff_t>(n));
      const CoeffSymbol next{s.family, static_cast<std::uint8_t>(s.order + 1)};
      k.symbols.insert(std::upper_bound(k.symbols.begin(), k.symbols.end(), next), next);
      insert_sorted(k.jets, unit);
      out.add_term(k, c * static_cast<long>(mult));
    }
  }
  return out;
}

JetPoly total_derivative(const JetPoly& p, int i, int j, int k) {
  JetPoly out = p;
  for (int n = 0; n < i; ++n) out = total_derivative(out, Direction::X);
  for (int n = 0; n < j; ++n) out = total_derivative(out, Direction::Y);
  for (int n = 0; n < k; ++n) out = total_derivative(out, Direction::T);
  return out;
}

JetPoly specialize_log(const JetPoly& p, Branch branch) {
  JetPoly out;
  for (const auto& [key, c] : p.terms()) {
    MonomialKey k = key;
    k.symbols.clear();
    Rational coeff = c;
    for (const auto& s : key.symbols) {
      if (s.order == 0) {
        throw SpecializationError("cannot specialize undifferentiated " + to_string(s) +
                                  " (ln phi) in monomial " + to_string(key));
      }
      coeff *= 2 * log_derivative_coefficient(s.order);
      if (s.family == Family::F) coeff *= sign(branch);
      k.phiPower -= s.order;
    }
    out.add_term(k, coeff);
  }
  return out;
}

JetPoly reduce_heat(const JetPoly& p, Branch branch) {
  JetPoly out;
  const int minus_sigma = -sign(branch);
  for (const auto& [key, c] : p.terms()) {
    MonomialKey k = key;
    Rational coeff = c;
    for (auto& idx : k.jets) {
      if (idx.k == 0) continue;
      // (i, j, k) -> (-sigma)^k (i + 2k, j, 0)
      const int steps = idx.k;
      if (idx.i + 2 * steps + idx.j > kMaxJetOrder) {
        throw OrderLimitError("derivative order limit exceeded while imposing the heat constraint on " +
                              to_string(key));
      }
      if (steps % 2 != 0 && minus_sigma < 0) coeff = -coeff;
      idx = JetIndex{static_cast<std::uint8_t>(idx.i + 2 * steps), idx.j, 0};
    }
    std::sort(k.jets.begin(), k.jets.end());
    out.add_term(k, coeff);
  }
  return out;
}

std::map<int, JetPoly> degree_decompose(const JetPoly& p) {
  std::map<int, JetPoly> parts;
  for (const auto& [key, c] : p.terms()) parts[key.degree()].add_term(key, c);
  return parts;
}

JetPoly coefficient_of(const JetPoly& p, std::vector<JetIndex> jets) {
  std::sort(jets.begin(), jets.end());
  JetPoly out;
  for (const auto& [key, c] : p.terms()) {
    if (key.jets != jets) continue;
    MonomialKey k = key;
    k.jets.clear();
    out.add_term(k, c);
  }
  return out;
}

std::string to_string(const MonomialKey& key) {
  std::vector<std::string> factors;
  for (std::size_t n = 0; n < key.symbols.size();) {
    std::size_t run = n;
    while (run < key.symbols.size() && key.symbols[run] == key.symbols[n]) ++run;
    std::string f = to_string(key.symbols[n]);
    if (run - n > 1) f += "^" + std::to_string(run - n);
    factors.push_back(std::move(f));
    n = run;
  }
  if (key.phiPower == 1) {
    factors.emplace_back("phi");
  } else if (key.phiPower != 0) {
    factors.push_back("phi^" + std::to_string(key.phiPower));
  }
  for (std::size_t n = 0; n < key.jets.size();) {
    std::size_t run = n;
    while (run < key.jets.size() && key.jets[run] == key.jets[n]) ++run;
    std::string f = to_string(key.jets[n]);
    if (run - n > 1) f += "^" + std::to_string(run - n);
    factors.push_back(std::move(f));
    n = run;
  }
  std::string out;
  for (std::size_t n = 0; n < factors.size(); ++n) {
    if (n > 0) out += '*';
    out += factors[n];
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const JetPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : p.terms()) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    const bool bare = key.phiPower == 0 && key.jets.empty() && key.symbols.empty();
    if (bare) {
      os << mag.get_str();
    } else if (mag == 1) {
      os << to_string(key);
    } else {
      os << mag.get_str() << '*' << to_string(key);
    }
  }
  return os.str();
}

}  // namespace dlw
