#pragma once

// Quivers, the root lattice Z^I and the bilinear forms on it.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dsp/errors.hpp"

namespace dsp {

/// Element of the root lattice: one integer coordinate per vertex.
class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(std::size_t n) : c_(n, 0) {}
  LatticeVector(std::initializer_list<std::int64_t> c) : c_(c) {}
  explicit LatticeVector(std::vector<std::int64_t> c) : c_(std::move(c)) {}

  static LatticeVector unit(std::size_t n, std::size_t v) {
    LatticeVector e(n);
    e.c_.at(v) = 1;
    return e;
  }

  std::size_t size() const noexcept { return c_.size(); }
  std::int64_t operator[](std::size_t v) const { return c_[v]; }
  std::int64_t& operator[](std::size_t v) { return c_[v]; }
  std::span<const std::int64_t> coords() const noexcept { return c_; }
  auto begin() const noexcept { return c_.begin(); }
  auto end() const noexcept { return c_.end(); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t x) { return x == 0; });
  }
  bool is_nonnegative() const {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t x) { return x >= 0; });
  }
  /// Nonzero with all coordinates >= 0.
  bool is_positive() const { return is_nonnegative() && !is_zero(); }
  std::int64_t height() const { return std::accumulate(c_.begin(), c_.end(), std::int64_t{0}); }

  /// Componentwise order: *this <= other.
  bool dominated_by(const LatticeVector& other) const {
    check_size(other);
    for (std::size_t v = 0; v < c_.size(); ++v)
      if (c_[v] > other.c_[v]) return false;
    return true;
  }

  LatticeVector& operator+=(const LatticeVector& o) {
    check_size(o);
    for (std::size_t v = 0; v < c_.size(); ++v) c_[v] += o.c_[v];
    return *this;
  }
  LatticeVector& operator-=(const LatticeVector& o) {
    check_size(o);
    for (std::size_t v = 0; v < c_.size(); ++v) c_[v] -= o.c_[v];
    return *this;
  }
  LatticeVector& operator*=(std::int64_t s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
  friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }
  friend LatticeVector operator*(std::int64_t s, LatticeVector a) { return a *= s; }
  friend LatticeVector operator-(LatticeVector a) { return a *= -1; }

  friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
  /// Lexicographic; used only for canonical orderings, not the root order.
  friend auto operator<=>(const LatticeVector& a, const LatticeVector& b) { return a.c_ <=> b.c_; }

  friend std::ostream& operator<<(std::ostream& os, const LatticeVector& a) {
    os << '(';
    for (std::size_t v = 0; v < a.c_.size(); ++v) os << (v ? "," : "") << a.c_[v];
    return os << ')';
  }

  void check_size(const LatticeVector& o) const {
    if (o.size() != size())
      throw InputError("lattice vector size mismatch: " + std::to_string(size()) + " vs " +
                       std::to_string(o.size()));
  }

 private:
  std::vector<std::int64_t> c_;
};

struct LatticeVectorHash {
  std::size_t operator()(const LatticeVector& a) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto x : a) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
    return h;
  }
};

struct Arrow {
  std::size_t tail;
  std::size_t head;
};

/// A loop-free quiver on vertices 0..n-1.
class Quiver {
 public:
  Quiver() = default;
  Quiver(std::size_t n, std::vector<Arrow> arrows, std::vector<std::string> names = {})
      : n_(n), arrows_(std::move(arrows)), names_(std::move(names)), adj_(n) {
    if (names_.empty())
      for (std::size_t v = 0; v < n_; ++v) names_.push_back(std::to_string(v));
    if (names_.size() != n_) throw InputError("quiver: name count does not match vertex count");
    for (const auto& a : arrows_) {
      if (a.tail >= n_ || a.head >= n_) throw InputError("quiver: arrow endpoint out of range");
      if (a.tail == a.head) throw InputError("quiver: loops are not supported");
      adj_[a.tail].push_back(a.head);
      adj_[a.head].push_back(a.tail);
    }
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::span<const Arrow> arrows() const noexcept { return arrows_; }
  /// Neighbours with multiplicity (one entry per arrow in either direction).
  std::span<const std::size_t> neighbors(std::size_t v) const { return adj_.at(v); }
  const std::string& name(std::size_t v) const { return names_.at(v); }
  std::size_t vertex_by_name(const std::string& s) const {
    for (std::size_t v = 0; v < n_; ++v)
      if (names_[v] == s) return v;
    throw InputError("unknown vertex '" + s + "'");
  }

  LatticeVector zero() const { return LatticeVector(n_); }
  LatticeVector simple(std::size_t v) const { return LatticeVector::unit(n_, v); }

  void check(const LatticeVector& a) const {
    if (a.size() != n_)
      throw InputError("vector has " + std::to_string(a.size()) + " coordinates, quiver has " +
                       std::to_string(n_) + " vertices");
  }

  /// Full subquiver on the given vertices (in the given order).
  Quiver full_subquiver(std::span<const std::size_t> vertices) const {
    std::vector<std::size_t> pos(n_, n_);
    for (std::size_t i = 0; i < vertices.size(); ++i) pos.at(vertices[i]) = i;
    std::vector<Arrow> arrows;
    for (const auto& a : arrows_)
      if (pos[a.tail] < n_ && pos[a.head] < n_) arrows.push_back({pos[a.tail], pos[a.head]});
    std::vector<std::string> names;
    for (auto v : vertices) names.push_back(names_.at(v));
    return Quiver(vertices.size(), std::move(arrows), std::move(names));
  }

 private:
  std::size_t n_ = 0;
  std::vector<Arrow> arrows_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> adj_;
};

/// w = (w_1, ..., w_k), k >= 1, w_i >= 1.
class WeightSequence {
 public:
  WeightSequence() = default;
  WeightSequence(std::initializer_list<int> w) : WeightSequence(std::vector<int>(w)) {}
  explicit WeightSequence(std::vector<int> w) : w_(std::move(w)) {
    if (w_.empty()) throw InputError("weight sequence must have at least one entry");
    for (int x : w_)
      if (x < 1) throw InputError("weights must be >= 1, got " + std::to_string(x));
  }
  std::size_t size() const noexcept { return w_.size(); }
  int operator[](std::size_t i) const { return w_[i]; }
  std::span<const int> values() const noexcept { return w_; }
  auto begin() const noexcept { return w_.begin(); }
  auto end() const noexcept { return w_.end(); }
  friend bool operator==(const WeightSequence&, const WeightSequence&) = default;

 private:
  std::vector<int> w_;
};

/// Star-shaped quiver: centre * (index 0) and arms [i,j] -> [i,j-1] -> ... -> [i,1] -> *.
/// Arms are 1-based in the [i,j] notation; vertex indices are laid out arm by arm.
class StarQuiver : public Quiver {
 public:
  StarQuiver() = default;
  explicit StarQuiver(WeightSequence w) : Quiver(build(w)), w_(std::move(w)) {
    offset_.push_back(1);
    for (std::size_t i = 0; i < w_.size(); ++i)
      offset_.push_back(offset_.back() + static_cast<std::size_t>(w_[i] - 1));
  }

  static constexpr std::size_t center = 0;

  const WeightSequence& weights() const noexcept { return w_; }
  std::size_t arm_count() const noexcept { return w_.size(); }
  /// Number of vertices on arm i (1-based), i.e. w_i - 1.
  std::size_t arm_length(std::size_t i) const { return static_cast<std::size_t>(w_[i - 1] - 1); }
  /// Index of [i,j]; [i,0] denotes the centre.
  std::size_t vertex(std::size_t i, std::size_t j) const {
    if (i < 1 || i > w_.size()) throw InputError("arm index out of range");
    if (j == 0) return center;
    if (j > arm_length(i)) throw InputError("arm position out of range");
    return offset_[i - 1] + j - 1;
  }
  /// n_{ij} with the conventions n_{i0} = n_* and n_{i,w_i} = 0.
  std::int64_t arm_coord(const LatticeVector& a, std::size_t i, std::size_t j) const {
    if (j == 0) return a[center];
    if (j == static_cast<std::size_t>(w_[i - 1])) return 0;
    return a[vertex(i, j)];
  }

 private:
  static Quiver build(const WeightSequence& w) {
    std::size_t n = 1;
    std::vector<std::string> names{"*"};
    std::vector<Arrow> arrows;
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (int j = 1; j < w[i]; ++j) {
        std::size_t v = n++;
        names.push_back("[" + std::to_string(i + 1) + "," + std::to_string(j) + "]");
        arrows.push_back({v, j == 1 ? center : v - 1});
      }
    }
    return Quiver(n, std::move(arrows), std::move(names));
  }

  WeightSequence w_;
  std::vector<std::size_t> offset_;
};

inline StarQuiver build_star(const WeightSequence& w) { return StarQuiver(w); }

// Forms -------------------------------------------------------------------------------------

/// Euler form <a,b> = sum_v a_v b_v - sum_{arrows} a_{tail} b_{head}.
inline std::int64_t euler(const Quiver& Q, const LatticeVector& a, const LatticeVector& b) {
  Q.check(a);
  Q.check(b);
  std::int64_t s = 0;
  for (std::size_t v = 0; v < Q.vertex_count(); ++v) s += a[v] * b[v];
  for (const auto& arr : Q.arrows()) s -= a[arr.tail] * b[arr.head];
  return s;
}

inline std::int64_t sym(const Quiver& Q, const LatticeVector& a, const LatticeVector& b) {
  return euler(Q, a, b) + euler(Q, b, a);
}

/// (a, e_v) without materialising e_v.
inline std::int64_t sym_simple(const Quiver& Q, const LatticeVector& a, std::size_t v) {
  std::int64_t s = 2 * a[v];
  for (auto u : Q.neighbors(v)) s -= a[u];
  return s;
}

inline std::int64_t tits_form(const Quiver& Q, const LatticeVector& a) { return euler(Q, a, a); }

inline std::int64_t p_value(const Quiver& Q, const LatticeVector& a) { return 1 - tits_form(Q, a); }

/// s_v(a) = a - (a, e_v) e_v.
inline LatticeVector reflect(const Quiver& Q, std::size_t v, LatticeVector a) {
  Q.check(a);
  if (v >= Q.vertex_count()) throw InputError("reflect: vertex out of range");
  a[v] -= sym_simple(Q, a, v);
  return a;
}

/// n_* >= n_{i1} >= ... >= n_{i,w_i-1} >= 0 on every arm.
inline bool is_strict(const StarQuiver& Q, const LatticeVector& a) {
  Q.check(a);
  for (std::size_t i = 1; i <= Q.arm_count(); ++i)
    for (std::size_t j = 1; j <= Q.arm_length(i) + 1; ++j)
      if (Q.arm_coord(a, i, j - 1) < Q.arm_coord(a, i, j)) return false;
  return a[StarQuiver::center] >= 0;
}

inline std::vector<std::size_t> support(const LatticeVector& a) {
  std::vector<std::size_t> s;
  for (std::size_t v = 0; v < a.size(); ++v)
    if (a[v] != 0) s.push_back(v);
  return s;
}

inline bool support_connected(const Quiver& Q, const LatticeVector& a) {
  auto s = support(a);
  if (s.empty()) return false;
  std::vector<char> seen(Q.vertex_count(), 0);
  std::vector<std::size_t> stack{s.front()};
  seen[s.front()] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    ++reached;
    for (auto u : Q.neighbors(v))
      if (!seen[u] && a[u] != 0) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  return reached == s.size();
}

}  // namespace dsp
