#pragma once

// Eigenvalue data attached to a star quiver: the character xi^[a], the parameter q
// of the multiplicative preprojective algebra, and q^a.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsp/errors.hpp"
#include "dsp/lattice.hpp"
#include "dsp/mvalue.hpp"

namespace dsp {

enum class ValueMode { Cyclo, Sym };

/// xi_{i1}, ..., xi_{i,w_i} for every arm i.
class XiTable {
 public:
  XiTable() = default;
  explicit XiTable(std::vector<std::vector<MValue>> rows) : rows_(std::move(rows)) {
    bool any_cyclo = false, any_sym = false;
    for (const auto& r : rows_)
      for (const auto& x : r) (x.is_cyclo() ? any_cyclo : any_sym) = true;
    if (any_cyclo && any_sym) throw ModeMismatch("eigenvalue table mixes cyclotomic and symbolic values");
    mode_ = any_sym ? ValueMode::Sym : ValueMode::Cyclo;
  }

  std::size_t arm_count() const noexcept { return rows_.size(); }
  const std::vector<MValue>& arm(std::size_t i) const { return rows_.at(i - 1); }
  const MValue& at(std::size_t i, std::size_t j) const { return rows_.at(i - 1).at(j - 1); }
  ValueMode mode() const noexcept { return mode_; }
  const std::vector<std::vector<MValue>>& rows() const noexcept { return rows_; }

  void check(const StarQuiver& Q) const {
    if (rows_.size() != Q.arm_count())
      throw InputError("eigenvalue table has " + std::to_string(rows_.size()) + " arms, weight sequence has " +
                       std::to_string(Q.arm_count()));
    for (std::size_t i = 1; i <= rows_.size(); ++i)
      if (rows_[i - 1].size() != static_cast<std::size_t>(Q.weights()[i - 1]))
        throw InputError("arm " + std::to_string(i) + " lists " + std::to_string(rows_[i - 1].size()) +
                         " eigenvalues, weight is " + std::to_string(Q.weights()[i - 1]));
  }

 private:
  std::vector<std::vector<MValue>> rows_;
  ValueMode mode_ = ValueMode::Cyclo;
};

/// One value per vertex of the quiver.
class CharacterQ {
 public:
  CharacterQ() = default;
  explicit CharacterQ(std::vector<MValue> q) : q_(std::move(q)) {}
  std::size_t size() const noexcept { return q_.size(); }
  const MValue& operator[](std::size_t v) const { return q_.at(v); }
  MValue& operator[](std::size_t v) { return q_.at(v); }
  auto begin() const noexcept { return q_.begin(); }
  auto end() const noexcept { return q_.end(); }

  friend bool operator==(const CharacterQ& a, const CharacterQ& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t v = 0; v < a.size(); ++v)
      if (!(a[v] == b[v])) return false;
    return true;
  }

 private:
  std::vector<MValue> q_;
};

/// xi^[a] = prod_{i,j} xi_{ij}^(n_{i,j-1} - n_{ij}), with n_{i0} = n_* and n_{i,w_i} = 0.
inline MValue xi_char(const StarQuiver& Q, const XiTable& xi, const LatticeVector& a) {
  xi.check(Q);
  Q.check(a);
  MValue out = MValue::one();
  for (std::size_t i = 1; i <= Q.arm_count(); ++i)
    for (std::size_t j = 1; j <= static_cast<std::size_t>(Q.weights()[i - 1]); ++j) {
      auto e = Q.arm_coord(a, i, j - 1) - Q.arm_coord(a, i, j);
      if (e != 0) out *= xi.at(i, j).pow(e);
    }
  return out;
}

/// q_* = 1 / prod_i xi_{i1},  q_{ij} = xi_{ij} / xi_{i,j+1}.
inline CharacterQ q_from_xi(const StarQuiver& Q, const XiTable& xi) {
  xi.check(Q);
  std::vector<MValue> q(Q.vertex_count());
  MValue prod = MValue::one();
  for (std::size_t i = 1; i <= Q.arm_count(); ++i) prod *= xi.at(i, 1);
  q[StarQuiver::center] = prod.inverse();
  for (std::size_t i = 1; i <= Q.arm_count(); ++i)
    for (std::size_t j = 1; j <= Q.arm_length(i); ++j) q[Q.vertex(i, j)] = xi.at(i, j) / xi.at(i, j + 1);
  return CharacterQ(std::move(q));
}

/// q^a = prod_v q_v^{a_v}.
inline MValue q_pow(const CharacterQ& q, const LatticeVector& a) {
  if (q.size() != a.size()) throw InputError("q_pow: size mismatch");
  MValue out = MValue::one();
  for (std::size_t v = 0; v < a.size(); ++v)
    if (a[v] != 0) out *= q[v].pow(a[v]);
  return out;
}

/// Least m >= 1 with v^m = 1; nullopt for infinite order.
inline std::optional<std::uint64_t> order_of(const MValue& v) { return v.order(); }

}  // namespace dsp
