#pragma once

// Explicit matrices for conjugacy classes: rank data alpha_C from a tuple of matrices,
// and Jordan-type witnesses realising prescribed rank data.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsp/errors.hpp"
#include "dsp/lattice.hpp"
#include "dsp/mvalue.hpp"
#include "dsp/spectral.hpp"

namespace dsp {

using ComplexMatrix = Eigen::MatrixXcd;

/// Square matrix over Q, row-major.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  explicit ExactMatrix(std::size_t n) : n_(n), a_(n * n) {}
  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  std::size_t size() const noexcept { return n_; }
  cpp_rational& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const cpp_rational& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

  friend ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y) {
    if (x.n_ != y.n_) throw InputError("matrix size mismatch");
    ExactMatrix z(x.n_);
    for (std::size_t i = 0; i < x.n_; ++i)
      for (std::size_t k = 0; k < x.n_; ++k) {
        if (x(i, k) == 0) continue;
        for (std::size_t j = 0; j < x.n_; ++j) z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }
  ExactMatrix minus_scalar(const cpp_rational& s) const {
    ExactMatrix z = *this;
    for (std::size_t i = 0; i < n_; ++i) z(i, i) -= s;
    return z;
  }
  bool is_zero() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }

 private:
  std::size_t n_ = 0;
  std::vector<cpp_rational> a_;
};

/// Rank over Q by fraction-free (Bareiss) elimination after clearing row denominators.
inline std::size_t exact_rank(const ExactMatrix& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<cpp_int>> a(n, std::vector<cpp_int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    cpp_int l = 1;
    for (std::size_t j = 0; j < n; ++j) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(m(i, j)));
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = boost::multiprecision::numerator(m(i, j)) * (l / boost::multiprecision::denominator(m(i, j)));
  }
  std::size_t rank = 0;
  cpp_int prev = 1;
  for (std::size_t c = 0; c < n && rank < n; ++c) {
    std::size_t p = rank;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = rank + 1; i < n; ++i) {
      for (std::size_t j = c + 1; j < n; ++j) a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

inline constexpr double kDefaultRankTol = 1e-8;

/// Numerical rank: singular values above tol * scale, where scale defaults to sigma_max.
inline std::size_t numeric_rank(const ComplexMatrix& m, double tol = kDefaultRankTol, double scale = -1.0) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  double ref = scale > 0 ? scale : s(0);
  if (ref == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * ref) ++r;
  return r;
}

using MatrixTuple = std::variant<std::vector<ExactMatrix>, std::vector<ComplexMatrix>>;

/// Raised when (A_i - xi_{i1}) ... (A_i - xi_{i,w_i}) != 0 for some arms.
class AnnihilationError : public InputError {
 public:
  explicit AnnihilationError(std::vector<std::size_t> arms)
      : InputError(message(arms)), arms_(std::move(arms)) {}
  const std::vector<std::size_t>& arms() const noexcept { return arms_; }

 private:
  static std::string message(const std::vector<std::size_t>& arms) {
    std::string s = "eigenvalue sequence does not annihilate matrix on arm(s)";
    for (auto i : arms) s += " " + std::to_string(i);
    return s;
  }
  std::vector<std::size_t> arms_;
};

inline std::size_t tuple_size(const MatrixTuple& m) {
  return std::visit([](const auto& v) { return v.size(); }, m);
}
inline std::size_t tuple_dim(const MatrixTuple& m) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        if (v.empty()) return 0;
        using M = std::decay_t<decltype(v.front())>;
        if constexpr (std::is_same_v<M, ExactMatrix>)
          return v.front().size();
        else
          return static_cast<std::size_t>(v.front().rows());
      },
      m);
}

/// alpha_C: n_* = n and n_{ij} = rank (A_i - xi_{i1}) ... (A_i - xi_{ij}).
/// Exact matrices need rational eigenvalues; floating matrices use an SVD threshold.
inline LatticeVector alpha_from_matrices(const StarQuiver& Q, const MatrixTuple& matrices, const XiTable& xi,
                                         double tol = kDefaultRankTol) {
  xi.check(Q);
  if (tuple_size(matrices) != Q.arm_count())
    throw InputError("expected " + std::to_string(Q.arm_count()) + " matrices, got " +
                     std::to_string(tuple_size(matrices)));
  const std::size_t n = tuple_dim(matrices);
  if (n == 0) throw InputError("matrices must be at least 1x1");
  LatticeVector alpha(Q.vertex_count());
  alpha[StarQuiver::center] = static_cast<std::int64_t>(n);
  std::vector<std::size_t> bad_arms;

  if (const auto* exact = std::get_if<std::vector<ExactMatrix>>(&matrices)) {
    for (std::size_t i = 1; i <= Q.arm_count(); ++i) {
      const auto& A = (*exact)[i - 1];
      if (A.size() != n) throw InputError("matrices must all have the same size");
      if (exact_rank(A) != n) throw InputError("matrix " + std::to_string(i) + " is not invertible");
      ExactMatrix P = ExactMatrix::identity(n);
      for (std::size_t j = 1; j <= static_cast<std::size_t>(Q.weights()[i - 1]); ++j) {
        auto r = xi.at(i, j).to_rational();
        if (!r) throw EncodingUnsupported("exact matrices require rational eigenvalues (arm " + std::to_string(i) + ")");
        P = P * A.minus_scalar(*r);
        if (j <= Q.arm_length(i))
          alpha[Q.vertex(i, j)] = static_cast<std::int64_t>(exact_rank(P));
        else if (!P.is_zero())
          bad_arms.push_back(i);
      }
    }
  } else {
    const auto& fl = std::get<std::vector<ComplexMatrix>>(matrices);
    for (std::size_t i = 1; i <= Q.arm_count(); ++i) {
      const auto& A = fl[i - 1];
      if (static_cast<std::size_t>(A.rows()) != n || static_cast<std::size_t>(A.cols()) != n)
        throw InputError("matrices must all be square of the same size");
      if (numeric_rank(A, tol) != n) throw InputError("matrix " + std::to_string(i) + " is not invertible");
      ComplexMatrix P = ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      double scale = 1.0;
      for (std::size_t j = 1; j <= static_cast<std::size_t>(Q.weights()[i - 1]); ++j) {
        auto z = xi.at(i, j).to_complex();
        ComplexMatrix F = A - z * ComplexMatrix::Identity(A.rows(), A.cols());
        scale *= std::max(1.0, F.operatorNorm());
        P = P * F;
        if (j <= Q.arm_length(i)) {
          alpha[Q.vertex(i, j)] = static_cast<std::int64_t>(numeric_rank(P, tol, scale));
        } else if (P.operatorNorm() > tol * scale) {
          bad_arms.push_back(i);
        }
      }
    }
  }
  if (!bad_arms.empty()) throw AnnihilationError(std::move(bad_arms));
  return alpha;
}

struct JordanBlock {
  MValue eigenvalue;
  std::size_t size;
};

/// Block-diagonal representative of one conjugacy class.
struct JordanWitness {
  std::size_t n = 0;
  std::vector<JordanBlock> blocks;

  ExactMatrix to_exact() const {
    ExactMatrix m(n);
    std::size_t at = 0;
    for (const auto& b : blocks) {
      auto r = b.eigenvalue.to_rational();
      if (!r) throw EncodingUnsupported("eigenvalue " + format(b.eigenvalue) + " is not rational");
      for (std::size_t k = 0; k < b.size; ++k) {
        m(at + k, at + k) = *r;
        if (k + 1 < b.size) m(at + k, at + k + 1) = 1;
      }
      at += b.size;
    }
    return m;
  }

  ComplexMatrix to_complex() const {
    auto N = static_cast<Eigen::Index>(n);
    ComplexMatrix m = ComplexMatrix::Zero(N, N);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
      auto z = b.eigenvalue.to_complex();
      auto s = static_cast<Eigen::Index>(b.size);
      for (Eigen::Index k = 0; k < s; ++k) {
        m(at + k, at + k) = z;
        if (k + 1 < s) m(at + k, at + k + 1) = 1.0;
      }
      at += s;
    }
    return m;
  }
};

/// Builds a matrix A with (A - xi_1) ... (A - xi_w) = 0 and
/// rank (A - xi_1) ... (A - xi_j) = ranks[j-1] for j < w.
///
/// With d_j = r_{j-1} - r_j, the positions c = 1, 2, ... at which an eigenvalue mu occurs
/// in the sequence see d = (number of Jordan blocks of mu with size >= c), so the data is
/// realisable exactly when every d_j >= 0 and these counts are non-increasing per eigenvalue.
inline JordanWitness realize_class(std::span<const MValue> xi_arm, std::span<const std::int64_t> ranks, std::size_t n) {
  const std::size_t w = xi_arm.size();
  if (w == 0) throw InputError("realize_class: empty eigenvalue sequence");
  if (ranks.size() + 1 != w)
    throw InputError("realize_class: expected " + std::to_string(w - 1) + " ranks, got " + std::to_string(ranks.size()));
  std::vector<std::int64_t> r{static_cast<std::int64_t>(n)};
  r.insert(r.end(), ranks.begin(), ranks.end());
  r.push_back(0);
  std::vector<std::int64_t> d(w);
  for (std::size_t j = 1; j <= w; ++j) {
    d[j - 1] = r[j - 1] - r[j];
    if (d[j - 1] < 0) throw NotRealizable("rank sequence is not weakly decreasing from n");
  }
  // Group positions by exact eigenvalue.
  std::vector<std::size_t> group(w);
  std::vector<std::size_t> reps;
  for (std::size_t j = 0; j < w; ++j) {
    std::size_t g = reps.size();
    for (std::size_t k = 0; k < reps.size(); ++k)
      if (xi_arm[reps[k]] == xi_arm[j]) {
        g = k;
        break;
      }
    if (g == reps.size()) reps.push_back(j);
    group[j] = g;
  }
  JordanWitness out{n, {}};
  for (std::size_t g = 0; g < reps.size(); ++g) {
    std::vector<std::int64_t> at_least;  // blocks of size >= c, c = 1, 2, ...
    for (std::size_t j = 0; j < w; ++j)
      if (group[j] == g) at_least.push_back(d[j]);
    at_least.push_back(0);
    for (std::size_t c = 1; c < at_least.size(); ++c) {
      if (at_least[c] > at_least[c - 1])
        throw NotRealizable("eigenvalue " + format(xi_arm[reps[g]]) + ": rank drops force more blocks of size >= " +
                            std::to_string(c + 1) + " than of size >= " + std::to_string(c));
    }
    // Largest blocks first.
    for (std::size_t c = at_least.size() - 1; c >= 1; --c)
      for (std::int64_t k = 0; k < at_least[c - 1] - at_least[c]; ++k) out.blocks.push_back({xi_arm[reps[g]], c});
  }
  return out;
}

/// Witness matrices for every arm of a dimension vector.
inline std::vector<JordanWitness> realize_instance(const StarQuiver& Q, const XiTable& xi, const LatticeVector& alpha) {
  xi.check(Q);
  Q.check(alpha);
  std::vector<JordanWitness> out;
  auto n = alpha[StarQuiver::center];
  if (n < 1) throw InputError("realize_instance: n_* must be >= 1");
  for (std::size_t i = 1; i <= Q.arm_count(); ++i) {
    std::vector<std::int64_t> ranks;
    for (std::size_t j = 1; j <= Q.arm_length(i); ++j) ranks.push_back(alpha[Q.vertex(i, j)]);
    out.push_back(realize_class(xi.arm(i), ranks, static_cast<std::size_t>(n)));
  }
  return out;
}

}  // namespace dsp
