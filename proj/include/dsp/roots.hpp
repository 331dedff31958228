#pragma once

// Kac root system of a loop-free quiver: root membership by height descent,
// box enumeration of roots, and Dynkin / extended Dynkin / wild classification.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dsp/errors.hpp"
#include "dsp/lattice.hpp"

namespace dsp {

enum class RootKind : std::uint8_t { NotRoot, Real, Imaginary };

inline const char* to_string(RootKind k) {
  switch (k) {
    case RootKind::NotRoot: return "not_root";
    case RootKind::Real: return "real";
    case RootKind::Imaginary: return "imaginary";
  }
  return "?";
}

inline constexpr std::uint64_t kDefaultMaxBox = 2'000'000;

/// Classifies a positive vector as a real root, an imaginary root or neither.
/// Reflects at the smallest vertex v with (a, e_v) > 0 until no such vertex is left;
/// the height drops at every step.
inline RootKind is_positive_root(const Quiver& Q, LatticeVector a) {
  Q.check(a);
  if (a.is_zero()) throw InputError("is_positive_root: zero vector");
  if (!a.is_nonnegative()) return RootKind::NotRoot;
  const std::size_t n = Q.vertex_count();
  for (;;) {
    std::size_t v = n;
    std::int64_t pairing = 0;
    for (std::size_t u = 0; u < n; ++u) {
      pairing = sym_simple(Q, a, u);
      if (pairing > 0) {
        v = u;
        break;
      }
    }
    if (v == n) return support_connected(Q, a) ? RootKind::Imaginary : RootKind::NotRoot;
    if (a[v] == a.height()) return a[v] == 1 ? RootKind::Real : RootKind::NotRoot;
    a[v] -= pairing;
    if (a[v] < 0) return RootKind::NotRoot;
  }
}

/// Mixed-radix indexing of the box {0 <= b <= bound}.
class Box {
 public:
  Box(const LatticeVector& bound, std::uint64_t max_volume) : bound_(bound) {
    if (!bound.is_nonnegative()) throw InputError("box bound must be nonnegative");
    stride_.resize(bound.size());
    std::uint64_t vol = 1;
    for (std::size_t v = 0; v < bound.size(); ++v) {
      stride_[v] = vol;
      auto side = static_cast<std::uint64_t>(bound[v]) + 1;
      if (vol > max_volume / side)
        throw GuardExceeded("max_box", "box volume exceeds limit of " + std::to_string(max_volume));
      vol *= side;
    }
    volume_ = vol;
  }

  std::size_t volume() const noexcept { return volume_; }
  const LatticeVector& bound() const noexcept { return bound_; }
  std::size_t stride(std::size_t v) const { return stride_[v]; }

  bool contains(const LatticeVector& b) const {
    return b.is_nonnegative() && b.dominated_by(bound_);
  }
  std::size_t index(const LatticeVector& b) const {
    std::size_t idx = 0;
    for (std::size_t v = 0; v < b.size(); ++v) idx += static_cast<std::size_t>(b[v]) * stride_[v];
    return idx;
  }
  LatticeVector at(std::size_t idx) const {
    LatticeVector b(bound_.size());
    for (std::size_t v = 0; v < bound_.size(); ++v) {
      auto side = static_cast<std::size_t>(bound_[v]) + 1;
      b[v] = static_cast<std::int64_t>(idx % side);
      idx /= side;
    }
    return b;
  }
  /// Advances b to the next vector in index order; false after the last one.
  bool next(LatticeVector& b) const {
    for (std::size_t v = 0; v < b.size(); ++v) {
      if (b[v] < bound_[v]) {
        ++b[v];
        return true;
      }
      b[v] = 0;
    }
    return false;
  }

 private:
  LatticeVector bound_;
  std::vector<std::size_t> stride_;
  std::size_t volume_ = 0;
};

/// Root kind of every vector in a box. Each cell takes one descent step and reuses
/// the (smaller) cell it lands on, which gives the same answer as is_positive_root.
class RootTable {
 public:
  RootTable(const Quiver& Q, const LatticeVector& bound, std::uint64_t max_box = kDefaultMaxBox)
      : box_(bound, max_box), kind_(box_.volume(), RootKind::NotRoot) {
    Q.check(bound);
    const std::size_t n = Q.vertex_count();
    LatticeVector b(n);
    for (std::size_t idx = 1; idx < box_.volume(); ++idx) {
      box_.next(b);
      std::size_t v = n;
      std::int64_t pairing = 0;
      for (std::size_t u = 0; u < n; ++u) {
        pairing = sym_simple(Q, b, u);
        if (pairing > 0) {
          v = u;
          break;
        }
      }
      RootKind k;
      if (v == n) {
        k = support_connected(Q, b) ? RootKind::Imaginary : RootKind::NotRoot;
      } else if (b[v] == b.height()) {
        k = b[v] == 1 ? RootKind::Real : RootKind::NotRoot;
      } else if (b[v] - pairing < 0) {
        k = RootKind::NotRoot;
      } else {
        k = kind_[idx - static_cast<std::size_t>(pairing) * box_.stride(v)];
      }
      kind_[idx] = k;
    }
  }

  const Box& box() const noexcept { return box_; }
  RootKind kind(std::size_t idx) const { return kind_.at(idx); }
  RootKind kind(const LatticeVector& b) const { return kind_.at(box_.index(b)); }

  /// Positive roots in the box, in index order.
  std::vector<LatticeVector> roots() const {
    std::vector<LatticeVector> out;
    for (std::size_t idx = 1; idx < kind_.size(); ++idx)
      if (kind_[idx] != RootKind::NotRoot) out.push_back(box_.at(idx));
    return out;
  }

 private:
  Box box_;
  std::vector<RootKind> kind_;
};

/// All positive roots b with 0 < b <= a, ordered by mixed-radix index of the box under a.
inline std::vector<LatticeVector> positive_roots_below(const Quiver& Q, const LatticeVector& a,
                                                       std::uint64_t max_box = kDefaultMaxBox) {
  Q.check(a);
  if (!a.is_nonnegative()) throw InputError("positive_roots_below: vector must be nonnegative");
  return RootTable(Q, a, max_box).roots();
}

// Classification ----------------------------------------------------------------------------

enum class QuiverKind { Dynkin, ExtendedDynkin, Wild };

inline const char* to_string(QuiverKind k) {
  switch (k) {
    case QuiverKind::Dynkin: return "dynkin";
    case QuiverKind::ExtendedDynkin: return "extended_dynkin";
    case QuiverKind::Wild: return "wild";
  }
  return "?";
}

struct QuiverClass {
  QuiverKind kind = QuiverKind::Wild;
  std::optional<LatticeVector> delta;
  std::vector<std::size_t> extending_vertices;
};

/// Sign of sum 1/w_i - (k - 2).
inline int star_curvature_sign(const WeightSequence& w) {
  std::int64_t l = 1;
  for (int x : w) l = std::lcm(l, std::int64_t{x});
  std::int64_t s = 0;
  for (int x : w) s += l / x;
  std::int64_t rhs = (static_cast<std::int64_t>(w.size()) - 2) * l;
  return s > rhs ? 1 : (s == rhs ? 0 : -1);
}

inline QuiverClass classify(const StarQuiver& Q) {
  const auto& w = Q.weights();
  QuiverClass out;
  int sign = star_curvature_sign(w);
  if (sign > 0) {
    out.kind = QuiverKind::Dynkin;
    return out;
  }
  if (sign < 0) {
    out.kind = QuiverKind::Wild;
    return out;
  }
  out.kind = QuiverKind::ExtendedDynkin;
  std::int64_t l = 1;
  for (int x : w) l = std::lcm(l, std::int64_t{x});
  LatticeVector delta(Q.vertex_count());
  delta[StarQuiver::center] = l;
  for (std::size_t i = 1; i <= Q.arm_count(); ++i)
    for (std::size_t j = 1; j <= Q.arm_length(i); ++j)
      delta[Q.vertex(i, j)] = l - static_cast<std::int64_t>(j) * l / w[i - 1];
  if (tits_form(Q, delta) != 0) throw std::logic_error("classify: computed delta is not isotropic");
  for (std::size_t v = 0; v < Q.vertex_count(); ++v)
    if (delta[v] == 1) out.extending_vertices.push_back(v);
  out.delta = std::move(delta);
  return out;
}

/// For a connected loop-free quiver: the minimal imaginary root if the quiver is
/// extended Dynkin (positive generator of the radical of the symmetric form), else nullopt.
inline std::optional<LatticeVector> affine_radical(const Quiver& Q) {
  using boost::multiprecision::cpp_rational;
  using boost::multiprecision::cpp_int;
  const std::size_t n = Q.vertex_count();
  if (n == 0) return std::nullopt;
  std::vector<std::vector<cpp_rational>> m(n, std::vector<cpp_rational>(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) m[u][v] = sym_simple(Q, Q.simple(u), v);
  // Reduced row echelon form.
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < n; ++c) {
    std::size_t p = r;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(m[p], m[r]);
    cpp_rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || m[i][c] == 0) continue;
      cpp_rational f = m[i][c];
      for (std::size_t j = 0; j < n; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  if (r != n - 1) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t c = 0, pi = 0; c < n; ++c) {
    if (pi < pivot_col.size() && pivot_col[pi] == c) {
      ++pi;
    } else {
      free_col = c;
      break;
    }
  }
  std::vector<cpp_rational> x(n);
  x[free_col] = 1;
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = -m[i][free_col];
  cpp_int den = 1;
  for (auto& xi : x) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(xi));
  std::vector<cpp_int> z(n);
  cpp_int g = 0;
  for (std::size_t v = 0; v < n; ++v) {
    z[v] = boost::multiprecision::numerator(x[v]) * (den / boost::multiprecision::denominator(x[v]));
    g = boost::multiprecision::gcd(g, z[v]);
  }
  if (z[0] < 0) g = -g;
  LatticeVector delta(n);
  for (std::size_t v = 0; v < n; ++v) {
    cpp_int d = z[v] / g;
    if (d <= 0) return std::nullopt;
    delta[v] = static_cast<std::int64_t>(d);
  }
  return delta;
}

}  // namespace dsp
