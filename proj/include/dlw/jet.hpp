#pragma once

// Exact polynomial calculus over jet variables: formal partial derivatives of
// a single scalar function phi(x, y, t), integer powers of phi, and formal
// derivatives f^(n)(phi), g^(n)(phi) of two one-variable functions.

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace dlw {

using Rational = mpq_class;

/// Sign selecting the coupled upper/lower branch: phi_t + sigma*phi_xx = 0
/// together with u = sigma*2*phi_x/phi.
enum class Branch : int { Plus = 1, Minus = -1 };

constexpr int sign(Branch b) { return static_cast<int>(b); }
constexpr Branch opposite(Branch b) { return b == Branch::Plus ? Branch::Minus : Branch::Plus; }
std::string to_string(Branch b);

enum class Direction { X, Y, T };

/// Largest total derivative order any jet variable or coefficient symbol may
/// carry. Exceeding it raises OrderLimitError.
inline constexpr int kMaxJetOrder = 8;

struct JetIndex {
  std::uint8_t i = 0;  // x
  std::uint8_t j = 0;  // y
  std::uint8_t k = 0;  // t

  constexpr int order() const { return i + j + k; }
  constexpr bool is_phi() const { return order() == 0; }
  JetIndex raised(Direction d) const;

  friend bool operator==(const JetIndex&, const JetIndex&) = default;
  /// Lower total order first; within an order, more x then more y.
  friend std::strong_ordering operator<=>(const JetIndex& a, const JetIndex& b) {
    if (auto c = a.order() <=> b.order(); c != 0) return c;
    if (auto c = b.i <=> a.i; c != 0) return c;
    return b.j <=> a.j;
  }
};

JetIndex jet_index(int i, int j, int k);
std::string to_string(const JetIndex& idx);

enum class Family : std::uint8_t { F, G };

/// f^(order)(phi) for Family::F, g^(order)(phi) for Family::G.
struct CoeffSymbol {
  Family family = Family::F;
  std::uint8_t order = 0;

  friend auto operator<=>(const CoeffSymbol&, const CoeffSymbol&) = default;
};

std::string to_string(const CoeffSymbol& s);

/// Everything about a monomial except its coefficient. Factor lists are kept
/// sorted so that equal multisets compare equal.
struct MonomialKey {
  int phiPower = 0;
  std::vector<JetIndex> jets;        // phi itself never appears here
  std::vector<CoeffSymbol> symbols;

  /// Homogeneous degree: number of proper-derivative factors.
  int degree() const { return static_cast<int>(jets.size()); }

  friend auto operator<=>(const MonomialKey&, const MonomialKey&) = default;
};

struct Monomial {
  Rational coeff;
  MonomialKey key;
};

class OrderLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SpecializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class JetPoly {
 public:
  using Terms = std::map<MonomialKey, Rational>;

  JetPoly() = default;

  static JetPoly constant(const Rational& c);
  /// phi_{x^i y^j t^k}; (0,0,0) yields phi itself (a phi power).
  static JetPoly jet(int i, int j, int k);
  static JetPoly jet(const JetIndex& idx);
  static JetPoly phi_power(int p);
  static JetPoly symbol(Family family, int order);
  static JetPoly f(int order) { return symbol(Family::F, order); }
  static JetPoly g(int order) { return symbol(Family::G, order); }
  static JetPoly from_monomial(const Monomial& m);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }
  std::vector<Monomial> monomials() const;
  bool has_symbols() const;

  /// Adds c * key, dropping the entry if it cancels.
  void add_term(const MonomialKey& key, const Rational& c);

  JetPoly& operator+=(const JetPoly& o);
  JetPoly& operator-=(const JetPoly& o);
  JetPoly& operator*=(const Rational& c);

  friend JetPoly operator+(JetPoly a, const JetPoly& b) { return a += b; }
  friend JetPoly operator-(JetPoly a, const JetPoly& b) { return a -= b; }
  friend JetPoly operator-(JetPoly a) { return a *= Rational(-1); }
  friend JetPoly operator*(JetPoly a, const Rational& c) { return a *= c; }
  friend JetPoly operator*(const Rational& c, JetPoly a) { return a *= c; }
  friend JetPoly operator*(const JetPoly& a, const JetPoly& b);

  friend bool operator==(const JetPoly& a, const JetPoly& b);

 private:
  Terms terms_;
};

JetPoly pow(const JetPoly& p, int n);

MonomialKey multiply(const MonomialKey& a, const MonomialKey& b);

/// Total derivative treating phi and every jet variable as functions of
/// (x, y, t) and f^(n), g^(n) as functions of phi.
JetPoly total_derivative(const JetPoly& p, Direction d);

/// Repeated total derivative: x-order i, y-order j, t-order k.
JetPoly total_derivative(const JetPoly& p, int i, int j, int k);

/// Replaces f^(n) by sigma*d^n/dphi^n(2 ln phi) and g^(n) by d^n/dphi^n(2 ln phi).
JetPoly specialize_log(const JetPoly& p, Branch branch);

/// Eliminates every t-derivative using phi_t = -sigma*phi_xx and its
/// differential consequences.
JetPoly reduce_heat(const JetPoly& p, Branch branch);

/// Partition by homogeneous degree; empty parts are omitted.
std::map<int, JetPoly> degree_decompose(const JetPoly& p);

/// Collects the terms whose jet multiset is exactly `jets` and strips those
/// jet factors, e.g. the coefficient of phi_x^3 phi_y.
JetPoly coefficient_of(const JetPoly& p, std::vector<JetIndex> jets);

std::string to_string(const MonomialKey& key);
std::string to_string(const JetPoly& p);

}  // namespace dlw
