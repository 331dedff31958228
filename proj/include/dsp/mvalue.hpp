#pragma once

// Exact nonzero scalars for eigenvalue data.
//
// Only the multiplicative group is needed, so two encodings suffice:
//   Cyclo: r * zeta(a/b) = r * exp(2 pi i a/b) with r a positive rational, stored as
//          prime exponents (Q_{>0} is free abelian on the primes) and a/b taken mod 1.
//   Sym:   g1^e1 * ... * gm^em over declared generators, equal to one exactly when the
//          exponent vector lies in a declared relation lattice.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dsp/errors.hpp"

namespace dsp {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw EncodingUnsupported("integer overflow in exact arithmetic");
  return r;
}
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw EncodingUnsupported("integer overflow in exact arithmetic");
  return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  for (; e; e >>= 1, a = mulmod(a, a, m))
    if (e & 1) r = mulmod(r, a, m);
  return r;
}
/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    if (n % p == 0) return n == p;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s && composite; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

/// Prime factorisation by trial division; the cofactor left after 10^6 must be prime.
inline std::vector<std::pair<std::uint64_t, std::int64_t>> factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, std::int64_t>> f;
  for (std::uint64_t p = 2; p <= 1'000'000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    std::int64_t e = 0;
    while (n % p == 0) n /= p, ++e;
    if (e) f.emplace_back(p, e);
  }
  if (n > 1) {
    if (!is_prime_u64(n))
      throw EncodingUnsupported("cannot factor " + std::to_string(n) + " for exact magnitude encoding");
    f.emplace_back(n, 1);
  }
  return f;
}

}  // namespace detail

/// Positive rational stored as sorted (prime, exponent) pairs with nonzero exponents.
class PrimePowers {
 public:
  using Entry = std::pair<std::uint64_t, std::int64_t>;

  PrimePowers() = default;

  static PrimePowers from_ratio(std::uint64_t num, std::uint64_t den) {
    if (num == 0 || den == 0) throw InputError("magnitude must be a positive rational");
    PrimePowers out;
    auto fn = detail::factor(num);
    auto fd = detail::factor(den);
    for (auto& [p, e] : fd) e = -e;
    out.f_ = merge(fn, fd);
    return out;
  }

  bool is_one() const noexcept { return f_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return f_; }

  friend PrimePowers operator*(const PrimePowers& a, const PrimePowers& b) {
    PrimePowers out;
    out.f_ = merge(a.f_, b.f_);
    return out;
  }
  PrimePowers pow(std::int64_t e) const {
    PrimePowers out;
    if (e == 0) return out;
    for (auto [p, x] : f_) out.f_.emplace_back(p, detail::checked_mul(x, e));
    return out;
  }
  friend bool operator==(const PrimePowers&, const PrimePowers&) = default;

  cpp_rational to_rational() const {
    cpp_int num = 1, den = 1;
    for (auto [p, e] : f_) {
      cpp_int pp = boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(e < 0 ? -e : e));
      (e > 0 ? num : den) *= pp;
    }
    return cpp_rational(num, den);
  }
  double log() const {
    double s = 0;
    for (auto [p, e] : f_) s += static_cast<double>(e) * std::log(static_cast<double>(p));
    return s;
  }

 private:
  static std::vector<Entry> merge(const std::vector<Entry>& a, const std::vector<Entry>& b) {
    std::vector<Entry> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.push_back(b[j++]);
      } else {
        auto e = detail::checked_add(a[i].second, b[j].second);
        if (e) out.emplace_back(a[i].first, e);
        ++i, ++j;
      }
    }
    return out;
  }

  std::vector<Entry> f_;
};

/// Rational number mod 1, normalised to num in [0, den), gcd(num, den) = 1.
class Angle {
 public:
  Angle() = default;
  Angle(std::int64_t num, std::int64_t den) {
    if (den == 0) throw InputError("angle denominator is zero");
    if (den < 0) num = -num, den = -den;
    num %= den;
    if (num < 0) num += den;
    auto g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }
  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }

  friend Angle operator+(const Angle& a, const Angle& b) {
    auto g = std::gcd(a.den_, b.den_);
    auto l = detail::checked_mul(a.den_ / g, b.den_);
    auto x = static_cast<__int128>(a.num_) * (l / a.den_) + static_cast<__int128>(b.num_) * (l / b.den_);
    return Angle(static_cast<std::int64_t>(x % l), l);
  }
  Angle operator-() const { return Angle(-num_, den_); }
  Angle times(std::int64_t e) const {
    auto x = static_cast<__int128>(num_) * e % den_;
    return Angle(static_cast<std::int64_t>(x), den_);
  }
  friend bool operator==(const Angle&, const Angle&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

struct Cyclo {
  PrimePowers magnitude;
  Angle angle;
  friend bool operator==(const Cyclo&, const Cyclo&) = default;
};

// Relation lattice --------------------------------------------------------------------------

/// Sublattice of Z^m given by generating rows, kept in Hermite normal form.
class RelationLattice {
 public:
  RelationLattice() = default;
  RelationLattice(std::size_t rank, const std::vector<std::vector<std::int64_t>>& rows) : m_(rank) {
    for (const auto& r : rows)
      if (r.size() != m_) throw InputError("relation row has wrong length");
    rows_ = rows;
    hermite();
  }

  std::size_t ambient_rank() const noexcept { return m_; }
  const std::vector<std::vector<std::int64_t>>& hnf_rows() const noexcept { return rows_; }

  RelationLattice with_relation(std::vector<std::int64_t> row) const {
    auto rows = rows_;
    rows.push_back(std::move(row));
    return RelationLattice(m_, rows);
  }

  /// Canonical representative of v modulo the lattice.
  std::vector<std::int64_t> reduce(std::vector<std::int64_t> v) const {
    if (v.size() != m_) throw InputError("exponent vector has wrong length");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      auto c = pivot_[i];
      auto p = rows_[i][c];
      auto q = v[c] / p;
      if (v[c] % p < 0) --q;
      if (q == 0) continue;
      for (std::size_t j = c; j < m_; ++j) v[j] = detail::checked_add(v[j], -detail::checked_mul(q, rows_[i][j]));
    }
    return v;
  }

  bool contains(const std::vector<std::int64_t>& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](std::int64_t x) { return x == 0; });
  }

  /// Least m >= 1 with m v in the lattice, or nullopt if v has infinite order modulo it.
  std::optional<std::uint64_t> order(const std::vector<std::int64_t>& v) const {
    if (v.size() != m_) throw InputError("exponent vector has wrong length");
    std::vector<cpp_rational> x(v.begin(), v.end());
    cpp_int den = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      auto c = pivot_[i];
      cpp_rational coef = x[c] / rows_[i][c];
      for (std::size_t j = c; j < m_; ++j) x[j] -= coef * rows_[i][j];
      den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(coef));
    }
    for (const auto& xi : x)
      if (xi != 0) return std::nullopt;
    return static_cast<std::uint64_t>(den);
  }

  friend bool operator==(const RelationLattice& a, const RelationLattice& b) {
    return a.m_ == b.m_ && a.rows_ == b.rows_;
  }

 private:
  void hermite() {
    using detail::checked_add;
    using detail::checked_mul;
    std::vector<std::vector<std::int64_t>> a = rows_;
    std::vector<std::vector<std::int64_t>> out;
    std::size_t r = 0;
    pivot_.clear();
    for (std::size_t c = 0; c < m_ && r < a.size(); ++c) {
      // Euclid on column c among rows r.. until one nonzero entry remains.
      for (;;) {
        std::size_t best = a.size();
        for (std::size_t i = r; i < a.size(); ++i)
          if (a[i][c] != 0 && (best == a.size() || std::abs(a[i][c]) < std::abs(a[best][c]))) best = i;
        if (best == a.size()) break;
        std::swap(a[r], a[best]);
        bool done = true;
        for (std::size_t i = r + 1; i < a.size(); ++i) {
          if (a[i][c] == 0) continue;
          auto q = a[i][c] / a[r][c];
          for (std::size_t j = c; j < m_; ++j) a[i][j] = checked_add(a[i][j], -checked_mul(q, a[r][j]));
          if (a[i][c] != 0) done = false;
        }
        if (done) break;
      }
      if (a[r][c] == 0) continue;
      if (a[r][c] < 0)
        for (auto& x : a[r]) x = -x;
      for (std::size_t i = 0; i < r; ++i) {
        auto q = a[i][c] / a[r][c];
        if (a[i][c] % a[r][c] < 0) --q;
        for (std::size_t j = c; j < m_; ++j) a[i][j] = checked_add(a[i][j], -checked_mul(q, a[r][j]));
      }
      pivot_.push_back(c);
      ++r;
    }
    a.resize(r);
    rows_ = std::move(a);
  }

  std::size_t m_ = 0;
  std::vector<std::vector<std::int64_t>> rows_;
  std::vector<std::size_t> pivot_;
};

/// Declared generator names plus the relations among them.
struct SymDomain {
  std::vector<std::string> generators;
  RelationLattice relations;

  std::size_t index_of(std::string_view name) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (generators[i] == name) return i;
    throw InputError("undeclared generator '" + std::string(name) + "'");
  }
};

struct SymValue {
  std::shared_ptr<const SymDomain> domain;
  std::vector<std::int64_t> exponents;
};

// MValue ------------------------------------------------------------------------------------

/// A nonzero scalar in one of the two exact encodings.
class MValue {
 public:
  MValue() = default;
  explicit MValue(Cyclo c) : v_(std::move(c)) {}
  explicit MValue(SymValue s) : v_(std::move(s)) {
    auto& sv = std::get<SymValue>(v_);
    if (!sv.domain) throw InputError("symbolic value without a domain");
    if (sv.exponents.size() != sv.domain->generators.size())
      throw InputError("symbolic exponent vector has wrong length");
  }

  static MValue one() { return MValue(); }
  static MValue rational(std::int64_t num, std::int64_t den = 1) {
    if (num == 0) throw InputError("zero is not a valid eigenvalue");
    if (den == 0) throw InputError("zero denominator");
    bool negative = (num < 0) != (den < 0);
    auto an = static_cast<std::uint64_t>(num < 0 ? -num : num);
    auto ad = static_cast<std::uint64_t>(den < 0 ? -den : den);
    return MValue(Cyclo{PrimePowers::from_ratio(an, ad), negative ? Angle(1, 2) : Angle()});
  }
  /// exp(2 pi i num/den).
  static MValue root_of_unity(std::int64_t num, std::int64_t den) { return MValue(Cyclo{{}, Angle(num, den)}); }
  static MValue cyclo(PrimePowers mag, Angle angle) { return MValue(Cyclo{std::move(mag), angle}); }
  static MValue generator(std::shared_ptr<const SymDomain> d, std::size_t g) {
    std::vector<std::int64_t> e(d->generators.size(), 0);
    e.at(g) = 1;
    return MValue(SymValue{std::move(d), std::move(e)});
  }
  static MValue sym_identity(std::shared_ptr<const SymDomain> d) {
    std::vector<std::int64_t> e(d->generators.size(), 0);
    return MValue(SymValue{std::move(d), std::move(e)});
  }

  bool is_cyclo() const noexcept { return std::holds_alternative<Cyclo>(v_); }
  bool is_sym() const noexcept { return std::holds_alternative<SymValue>(v_); }
  const Cyclo& as_cyclo() const { return std::get<Cyclo>(v_); }
  const SymValue& as_sym() const { return std::get<SymValue>(v_); }

  /// Cyclotomic one acts as a neutral element for either encoding.
  bool is_neutral_cyclo() const {
    return is_cyclo() && as_cyclo().magnitude.is_one() && as_cyclo().angle.is_zero();
  }

  bool is_one() const {
    if (is_cyclo()) return is_neutral_cyclo();
    const auto& s = as_sym();
    return s.domain->relations.contains(s.exponents);
  }

  friend MValue operator*(const MValue& a, const MValue& b) {
    if (a.is_cyclo() && b.is_cyclo())
      return MValue(Cyclo{a.as_cyclo().magnitude * b.as_cyclo().magnitude, a.as_cyclo().angle + b.as_cyclo().angle});
    if (a.is_sym() && b.is_sym()) {
      const auto& x = a.as_sym();
      const auto& y = b.as_sym();
      if (x.domain != y.domain && !(x.domain->generators == y.domain->generators &&
                                    x.domain->relations == y.domain->relations))
        throw ModeMismatch("symbolic values over different domains");
      std::vector<std::int64_t> e(x.exponents.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = detail::checked_add(x.exponents[i], y.exponents[i]);
      return MValue(SymValue{x.domain, std::move(e)});
    }
    if (a.is_neutral_cyclo()) return b;
    if (b.is_neutral_cyclo()) return a;
    throw ModeMismatch("cannot combine cyclotomic and symbolic values");
  }
  MValue& operator*=(const MValue& b) { return *this = *this * b; }

  MValue pow(std::int64_t e) const {
    if (is_cyclo()) return MValue(Cyclo{as_cyclo().magnitude.pow(e), as_cyclo().angle.times(e)});
    const auto& s = as_sym();
    std::vector<std::int64_t> x(s.exponents.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = detail::checked_mul(s.exponents[i], e);
    return MValue(SymValue{s.domain, std::move(x)});
  }
  MValue inverse() const { return pow(-1); }
  friend MValue operator/(const MValue& a, const MValue& b) { return a * b.inverse(); }

  /// Equality as group elements (for Sym: modulo the relation lattice).
  friend bool operator==(const MValue& a, const MValue& b) { return (a / b).is_one(); }

  /// Least m >= 1 with v^m = 1, or nullopt (infinite order).
  std::optional<std::uint64_t> order() const {
    if (is_cyclo()) {
      if (!as_cyclo().magnitude.is_one()) return std::nullopt;
      return static_cast<std::uint64_t>(as_cyclo().angle.den());
    }
    const auto& s = as_sym();
    return s.domain->relations.order(s.exponents);
  }

  std::complex<double> to_complex() const {
    if (!is_cyclo()) throw EncodingUnsupported("symbolic eigenvalues have no numeric value");
    const auto& c = as_cyclo();
    double r = std::exp(c.magnitude.log());
    double t = 2.0 * std::numbers::pi * static_cast<double>(c.angle.num()) / static_cast<double>(c.angle.den());
    return std::polar(r, t);
  }

  /// Exact rational value when the angle is 0 or 1/2.
  std::optional<cpp_rational> to_rational() const {
    if (!is_cyclo()) return std::nullopt;
    const auto& c = as_cyclo();
    if (c.angle.is_zero()) return c.magnitude.to_rational();
    if (c.angle == Angle(1, 2)) return -c.magnitude.to_rational();
    return std::nullopt;
  }

  /// Hash of the canonical form (Sym values are reduced modulo relations first).
  std::size_t hash() const {
    std::size_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t x) { h = (h ^ x) * 1099511628211ULL; };
    if (is_cyclo()) {
      for (auto [p, e] : as_cyclo().magnitude.entries()) mix(p), mix(static_cast<std::uint64_t>(e));
      mix(static_cast<std::uint64_t>(as_cyclo().angle.num()));
      mix(static_cast<std::uint64_t>(as_cyclo().angle.den()));
    } else {
      for (auto e : as_sym().domain->relations.reduce(as_sym().exponents)) mix(static_cast<std::uint64_t>(e));
    }
    return h;
  }

 private:
  std::variant<Cyclo, SymValue> v_;
};

// Text syntax -------------------------------------------------------------------------------
//
//   cyclo:  [-] r [* zeta(a/b)]  |  [-] zeta(a/b)      r = n or n/d, a/b any rational
//   sym:    1  |  g [^e] (* g [^e])*                      e may be negative

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}
  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  bool eat(std::string_view w) {
    skip_ws();
    if (s_.substr(i_, w.size()) == w) {
      i_ += w.size();
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool at_end() {
    skip_ws();
    return i_ == s_.size();
  }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  std::uint64_t unsigned_int() {
    skip_ws();
    std::size_t start = i_;
    std::uint64_t x = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      auto d = static_cast<std::uint64_t>(s_[i_] - '0');
      if (x > (UINT64_MAX - d) / 10) fail("integer too large");
      x = x * 10 + d;
      ++i_;
    }
    if (i_ == start) fail("expected integer");
    return x;
  }
  std::int64_t signed_int() {
    bool neg = eat('-');
    auto x = unsigned_int();
    if (x > static_cast<std::uint64_t>(INT64_MAX)) fail("integer too large");
    return neg ? -static_cast<std::int64_t>(x) : static_cast<std::int64_t>(x);
  }
  std::string identifier() {
    skip_ws();
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (i_ == start || std::isdigit(static_cast<unsigned char>(s_[start]))) fail("expected generator name");
    return std::string(s_.substr(start, i_ - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError("value '" + std::string(s_) + "': " + what, 1, i_ + 1);
  }
  std::size_t pos() const { return i_; }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline MValue parse_cyclo(std::string_view text) {
  detail::Cursor c(text);
  bool negative = c.eat('-');
  PrimePowers mag;
  Angle angle;
  auto parse_zeta = [&] {
    c.expect('(');
    auto a = c.signed_int();
    std::int64_t b = 1;
    if (c.eat('/')) {
      auto d = c.unsigned_int();
      if (d == 0 || d > static_cast<std::uint64_t>(INT64_MAX)) c.fail("bad angle denominator");
      b = static_cast<std::int64_t>(d);
    }
    c.expect(')');
    return Angle(a, b);
  };
  if (c.eat("zeta")) {
    angle = parse_zeta();
  } else {
    auto num = c.unsigned_int();
    std::uint64_t den = 1;
    if (c.eat('/')) den = c.unsigned_int();
    if (num == 0) throw SemanticError("zero is not a valid eigenvalue");
    if (den == 0) c.fail("zero denominator");
    mag = PrimePowers::from_ratio(num, den);
    if (c.eat('*')) {
      if (!c.eat("zeta")) c.fail("expected zeta(...)");
      angle = parse_zeta();
    }
  }
  if (!c.at_end()) c.fail("unexpected trailing text");
  if (negative) angle = angle + Angle(1, 2);
  return MValue::cyclo(std::move(mag), angle);
}

inline MValue parse_sym(std::string_view text, const std::shared_ptr<const SymDomain>& domain) {
  detail::Cursor c(text);
  std::vector<std::int64_t> e(domain->generators.size(), 0);
  if (c.peek() == '1') {
    c.unsigned_int();
    if (!c.at_end()) c.fail("unexpected trailing text");
    return MValue(SymValue{domain, std::move(e)});
  }
  do {
    auto name = c.identifier();
    std::size_t g;
    try {
      g = domain->index_of(name);
    } catch (const InputError& err) {
      c.fail(err.what());
    }
    std::int64_t x = 1;
    if (c.eat('^')) x = c.signed_int();
    e[g] = detail::checked_add(e[g], x);
  } while (c.eat('*'));
  if (!c.at_end()) c.fail("unexpected trailing text");
  return MValue(SymValue{domain, std::move(e)});
}

inline std::string format_rational(const cpp_rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

inline std::string format(const MValue& v) {
  if (v.is_cyclo()) {
    const auto& c = v.as_cyclo();
    std::string r = format_rational(c.magnitude.to_rational());
    if (c.angle.is_zero()) return r;
    if (c.angle == Angle(1, 2)) return "-" + r;
    std::string z = "zeta(" + std::to_string(c.angle.num()) + "/" + std::to_string(c.angle.den()) + ")";
    return c.magnitude.is_one() ? z : r + "*" + z;
  }
  if (v.is_one()) return "1";
  const auto& s = v.as_sym();
  std::string out;
  for (std::size_t g = 0; g < s.exponents.size(); ++g) {
    if (s.exponents[g] == 0) continue;
    if (!out.empty()) out += "*";
    out += s.domain->generators[g];
    if (s.exponents[g] != 1) out += "^" + std::to_string(s.exponents[g]);
  }
  return out.empty() ? "1" : out;
}

}  // namespace dsp
