#pragma once

// Floating-point search for explicit solutions A_1 ... A_k = 1 with A_i in prescribed
// conjugacy classes, and a Burnside-style irreducibility test.
//
// This is a semi-oracle. Failing to find a solution proves nothing; the only outcome that
// contradicts the exact decider is an irreducible solution for an instance it calls unsolvable.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dsp/decider.hpp"
#include "dsp/errors.hpp"
#include "dsp/matrices.hpp"

namespace dsp::numeric {

using Matrix = Eigen::MatrixXcd;
using cd = std::complex<double>;

/// Raised when some g_i is too close to singular for A_i = g_i J_i g_i^{-1} to be trusted.
class NearSingular : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxCondition = 1e10;

/// Representative J_i of each class; A_i = g_i J_i g_i^{-1}.
struct NumericClasses {
  std::size_t n = 0;
  std::vector<Matrix> base;
};

inline NumericClasses classes_from_instance(const ProblemInstance& inst) {
  if (inst.xi.mode() != ValueMode::Cyclo)
    throw EncodingUnsupported("numeric search needs eigenvalues with numeric values (cyclo mode)");
  NumericClasses out;
  out.n = static_cast<std::size_t>(inst.n());
  for (const auto& w : realize_instance(inst.quiver, inst.xi, inst.alpha)) out.base.push_back(w.to_complex());
  return out;
}

struct Candidate {
  std::vector<Matrix> g;
};

inline double condition_number(const Matrix& g) {
  Eigen::JacobiSVD<Matrix> svd(g);
  const auto& s = svd.singularValues();
  double lo = s(s.size() - 1);
  return lo == 0.0 ? INFINITY : s(0) / lo;
}

/// A_i = g_i J_i g_i^{-1}, plus the inverses used for derivatives.
struct Conjugated {
  std::vector<Matrix> A;
  std::vector<Matrix> g_inv;
};

inline Conjugated conjugate(const NumericClasses& cls, const Candidate& c, bool check_condition = true) {
  if (c.g.size() != cls.base.size()) throw InputError("candidate has wrong number of matrices");
  Conjugated out;
  for (std::size_t i = 0; i < c.g.size(); ++i) {
    if (check_condition && condition_number(c.g[i]) > kMaxCondition)
      throw NearSingular("g_" + std::to_string(i + 1) + " is nearly singular");
    Matrix inv = c.g[i].inverse();
    out.A.push_back(c.g[i] * cls.base[i] * inv);
    out.g_inv.push_back(std::move(inv));
  }
  return out;
}

inline Matrix product(const std::vector<Matrix>& A, std::size_t n) {
  auto N = static_cast<Eigen::Index>(n);
  Matrix P = Matrix::Identity(N, N);
  for (const auto& a : A) P = P * a;
  return P;
}

/// ||A_1 ... A_k - I||_F^2.
inline double residual_of(const std::vector<Matrix>& A, std::size_t n) {
  auto N = static_cast<Eigen::Index>(n);
  return (product(A, n) - Matrix::Identity(N, N)).squaredNorm();
}

inline double residual(const NumericClasses& cls, const Candidate& c) {
  return residual_of(conjugate(cls, c, false).A, cls.n);
}

/// Gradient with respect to the entries of each g_i, packed as d/dRe + i d/dIm.
/// With R = A_1...A_k - I and M_i = (A_{i+1}...A_k) R^H (A_1...A_{i-1}),
/// df = 2 Re tr(G_i dg_i) for G_i = g_i^{-1} [A_i, M_i], so the gradient is 2 G_i^H.
inline std::vector<Matrix> grad_residual(const NumericClasses& cls, const Candidate& c) {
  auto conj = conjugate(cls, c, true);
  const auto k = conj.A.size();
  auto N = static_cast<Eigen::Index>(cls.n);
  std::vector<Matrix> left(k + 1, Matrix::Identity(N, N)), right(k + 1, Matrix::Identity(N, N));
  for (std::size_t i = 0; i < k; ++i) left[i + 1] = left[i] * conj.A[i];
  for (std::size_t i = k; i-- > 0;) right[i] = conj.A[i] * right[i + 1];
  Matrix Rh = (left[k] - Matrix::Identity(N, N)).adjoint();
  std::vector<Matrix> grad;
  for (std::size_t i = 0; i < k; ++i) {
    Matrix M = right[i + 1] * Rh * left[i];
    Matrix G = conj.g_inv[i] * (conj.A[i] * M - M * conj.A[i]);
    grad.push_back(2.0 * G.adjoint());
  }
  return grad;
}

// Irreducibility ------------------------------------------------------------------------------

enum class Irreducibility { Irreducible, Reducible, Inconclusive };

inline const char* to_string(Irreducibility x) {
  switch (x) {
    case Irreducibility::Irreducible: return "irreducible";
    case Irreducibility::Reducible: return "reducible";
    case Irreducibility::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct BurnsideReport {
  std::size_t word_rank = 0;   // numerical rank of the span of words
  double min_ratio = 0.0;      // sigma_{n^2} / sigma_1 (0 if fewer than n^2 words survive)
  Irreducibility verdict = Irreducibility::Reducible;
};

inline constexpr double kIrreducibleMargin = 1e-6;
inline constexpr double kReducibleMargin = 1e-10;

/// Span of all words of length <= maxlen in the A_i (maxlen 0 means n^2). Words are grown
/// from those that enlarged the span so far; the generated algebra is full (Burnside) iff
/// the span has dimension n^2.
inline BurnsideReport burnside_rank(const std::vector<Matrix>& A, std::size_t maxlen = 0) {
  if (A.empty()) throw InputError("burnside_rank: no matrices");
  const auto N = A.front().rows();
  const auto dim = N * N;
  if (maxlen == 0) maxlen = static_cast<std::size_t>(dim);
  std::vector<Eigen::VectorXcd> basis;  // orthonormal
  std::vector<Eigen::VectorXcd> words;  // unit-norm word vectors
  auto try_add = [&](const Matrix& w) {
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(w.data(), dim);
    double nv = v.norm();
    if (nv == 0.0) return false;
    v /= nv;
    Eigen::VectorXcd r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) r -= b.dot(r) * b;
    if (r.norm() <= 1e-13 || static_cast<Eigen::Index>(basis.size()) == dim) return false;
    basis.push_back(r / r.norm());
    words.push_back(v);
    return true;
  };
  std::vector<Matrix> frontier{Matrix::Identity(N, N)};
  try_add(frontier.front());
  for (std::size_t len = 1; len <= maxlen && !frontier.empty(); ++len) {
    std::vector<Matrix> next;
    for (const auto& w : frontier)
      for (const auto& a : A) {
        Matrix x = w * a;
        double nx = x.norm();
        if (nx > 0) x /= nx;
        if (try_add(x)) next.push_back(std::move(x));
      }
    frontier = std::move(next);
  }
  BurnsideReport out;
  Matrix W(dim, static_cast<Eigen::Index>(words.size()));
  for (std::size_t c = 0; c < words.size(); ++c) W.col(static_cast<Eigen::Index>(c)) = words[c];
  Eigen::JacobiSVD<Matrix> svd(W);
  const auto& s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > kIrreducibleMargin * s(0)) ++out.word_rank;
  if (s.size() >= dim) out.min_ratio = s(dim - 1) / s(0);
  if (out.word_rank == static_cast<std::size_t>(dim))
    out.verdict = Irreducibility::Irreducible;
  else if (out.min_ratio <= kReducibleMargin)
    out.verdict = Irreducibility::Reducible;
  else
    out.verdict = Irreducibility::Inconclusive;
  return out;
}

// Search ----------------------------------------------------------------------------------------

struct SearchOptions {
  std::size_t restarts = 50;
  std::size_t iters = 500;         // gradient-descent iterations per restart
  std::size_t polish_iters = 200;  // damped Gauss-Newton iterations per restart
  double tol = 1e-8;               // acceptance threshold on the residual
  std::uint64_t seed = 1;
  std::size_t maxlen = 0;          // Burnside word length (0: n^2)
  bool require_irreducible = false;
  bool stop_at_first = true;       // false: run every restart and keep all converged candidates
};

struct FoundCandidate {
  Candidate candidate;
  std::vector<Matrix> A;
  double residual = 0;
  BurnsideReport burnside;
  std::size_t restart = 0;
};

struct OracleReport {
  std::optional<FoundCandidate> best;  // first accepted candidate
  std::vector<FoundCandidate> found;   // every converged candidate (stop_at_first = false)
  double best_residual = INFINITY;
  std::size_t restarts_used = 0;
  std::uint64_t seed = 0;

  bool irreducible() const { return best && best->burnside.verdict == Irreducibility::Irreducible; }
  std::size_t word_rank() const { return best ? best->burnside.word_rank : 0; }
};

namespace detail {

inline void step(Candidate& c, const std::vector<Matrix>& dir, double t) {
  for (std::size_t i = 0; i < c.g.size(); ++i) c.g[i] -= t * dir[i];
}

inline double safe_residual(const NumericClasses& cls, const Candidate& c) {
  try {
    return residual_of(conjugate(cls, c, true).A, cls.n);
  } catch (const NearSingular&) {
    return INFINITY;
  }
}

/// Gradient descent with Armijo backtracking.
inline double descend(const NumericClasses& cls, Candidate& c, std::size_t iters, double tol) {
  double f = safe_residual(cls, c);
  double t = 1.0;
  for (std::size_t it = 0; it < iters && std::isfinite(f) && f > tol * 1e-2; ++it) {
    auto g = grad_residual(cls, c);
    double gg = 0;
    for (const auto& x : g) gg += x.squaredNorm();
    if (gg == 0.0) break;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      Candidate trial = c;
      step(trial, g, t);
      double ft = safe_residual(cls, trial);
      if (ft <= f - 1e-4 * t * gg) {
        c = std::move(trial);
        f = ft;
        t *= 2.0;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return f;
}

/// Real residual vector (Re, Im of A_1...A_k - I) and its Jacobian in the real coordinates of g.
inline void residual_jacobian(const NumericClasses& cls, const Candidate& c, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
  auto conj = conjugate(cls, c, true);
  const auto k = conj.A.size();
  const auto N = static_cast<Eigen::Index>(cls.n);
  const auto nn = N * N;
  std::vector<Matrix> left(k + 1, Matrix::Identity(N, N)), right(k + 1, Matrix::Identity(N, N));
  for (std::size_t i = 0; i < k; ++i) left[i + 1] = left[i] * conj.A[i];
  for (std::size_t i = k; i-- > 0;) right[i] = conj.A[i] * right[i + 1];
  Matrix R = left[k] - Matrix::Identity(N, N);
  r.resize(2 * nn);
  for (Eigen::Index e = 0; e < nn; ++e) r(e) = R.data()[e].real(), r(nn + e) = R.data()[e].imag();
  J.resize(2 * nn, static_cast<Eigen::Index>(2 * k) * nn);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (int part = 0; part < 2; ++part)
      for (Eigen::Index b = 0; b < N; ++b)
        for (Eigen::Index a = 0; a < N; ++a, ++col) {
          // dg = unit (or i * unit) at (a, b); dA = dg g^{-1} A - A dg g^{-1}.
          Matrix E = Matrix::Zero(N, N);
          E(a, b) = part == 0 ? cd(1, 0) : cd(0, 1);
          Matrix Eg = E * conj.g_inv[i];
          Matrix dA = Eg * conj.A[i] - conj.A[i] * Eg;
          Matrix dR = left[i] * dA * right[i + 1];
          for (Eigen::Index e = 0; e < nn; ++e) J(e, col) = dR.data()[e].real(), J(nn + e, col) = dR.data()[e].imag();
        }
}

/// Damped Gauss-Newton (Levenberg-Marquardt) polish.
inline double polish(const NumericClasses& cls, Candidate& c, std::size_t iters) {
  double f = safe_residual(cls, c);
  double lambda = 1e-3;
  const auto N = static_cast<Eigen::Index>(cls.n);
  for (std::size_t it = 0; it < iters && std::isfinite(f) && f > 1e-30; ++it) {
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    try {
      residual_jacobian(cls, c, r, J);
    } catch (const NearSingular&) {
      return INFINITY;
    }
    Eigen::MatrixXd JtJ = J.transpose() * J;
    Eigen::VectorXd Jtr = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::MatrixXd H = JtJ;
      H.diagonal().array() += lambda * (1.0 + JtJ.diagonal().array());
      Eigen::VectorXd delta = H.ldlt().solve(-Jtr);
      Candidate trial = c;
      Eigen::Index col = 0;
      for (std::size_t i = 0; i < c.g.size(); ++i)
        for (int part = 0; part < 2; ++part)
          for (Eigen::Index b = 0; b < N; ++b)
            for (Eigen::Index a = 0; a < N; ++a, ++col)
              trial.g[i](a, b) += part == 0 ? cd(delta(col), 0) : cd(0, delta(col));
      double ft = safe_residual(cls, trial);
      if (ft < f) {
        c = std::move(trial);
        f = ft;
        lambda = std::max(lambda * 0.3, 1e-15);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  return f;
}

}  // namespace detail

inline Candidate random_candidate(std::size_t k, std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Candidate c;
  auto N = static_cast<Eigen::Index>(n);
  for (std::size_t i = 0; i < k; ++i) {
    Matrix g(N, N);
    for (Eigen::Index a = 0; a < N; ++a)
      for (Eigen::Index b = 0; b < N; ++b) g(a, b) = cd(normal(rng), normal(rng));
    c.g.push_back(std::move(g));
  }
  return c;
}

/// Multi-start descent. Restart r draws its starting point from a generator seeded with
/// (seed, r), so results do not depend on how many restarts ran before.
inline OracleReport search(const NumericClasses& cls, const SearchOptions& opt) {
  OracleReport rep;
  rep.seed = opt.seed;
  const std::size_t k = cls.base.size();
  for (std::size_t r = 0; r < opt.restarts; ++r) {
    rep.restarts_used = r + 1;
    std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(r)};
    std::mt19937_64 rng(seq);
    Candidate c = random_candidate(k, cls.n, rng);
    double f = detail::descend(cls, c, opt.iters, opt.tol);
    if (!std::isfinite(f)) continue;
    f = std::min(f, detail::polish(cls, c, opt.polish_iters));
    if (!std::isfinite(f)) continue;
    rep.best_residual = std::min(rep.best_residual, f);
    if (f >= opt.tol) continue;
    FoundCandidate fc;
    fc.A = conjugate(cls, c, false).A;
    fc.residual = f;
    fc.burnside = burnside_rank(fc.A, opt.maxlen);
    fc.restart = r;
    fc.candidate = std::move(c);
    bool accept = !opt.require_irreducible || fc.burnside.verdict == Irreducibility::Irreducible;
    if (accept && !rep.best) rep.best = fc;
    if (!opt.stop_at_first) rep.found.push_back(std::move(fc));
    if (accept && opt.stop_at_first) break;
  }
  return rep;
}

inline OracleReport search(const ProblemInstance& inst, const SearchOptions& opt) {
  return search(classes_from_instance(inst), opt);
}

// Cross-validation ------------------------------------------------------------------------------

enum class Agreement { ExactSolvableFound, ExactSolvableNotFound, ExactUnsolvableNoIrreducibleFound, ExactUnknown, Conflict };

inline const char* to_string(Agreement a) {
  switch (a) {
    case Agreement::ExactSolvableFound: return "exact_solvable+found";
    case Agreement::ExactSolvableNotFound: return "exact_solvable+not_found";
    case Agreement::ExactUnsolvableNoIrreducibleFound: return "exact_unsolvable+no_irreducible_found";
    case Agreement::ExactUnknown: return "exact_unknown";
    case Agreement::Conflict: return "CONFLICT";
  }
  return "?";
}

struct CrossReport {
  Agreement agreement = Agreement::ExactUnknown;
  Verdict verdict;
  OracleReport oracle;
};

inline CrossReport cross_validate(const ProblemInstance& inst, SearchOptions opt, Guards guards = {}) {
  CrossReport out;
  out.verdict = decide_dsp(inst, guards);
  switch (out.verdict.status) {
    case Status::Solvable:
      opt.require_irreducible = true;
      opt.stop_at_first = true;
      out.oracle = search(inst, opt);
      out.agreement = out.oracle.irreducible() ? Agreement::ExactSolvableFound : Agreement::ExactSolvableNotFound;
      break;
    case Status::Unsolvable: {
      opt.require_irreducible = true;
      opt.stop_at_first = false;
      out.oracle = search(inst, opt);
      out.agreement = out.oracle.irreducible() ? Agreement::Conflict : Agreement::ExactUnsolvableNoIrreducibleFound;
      break;
    }
    case Status::Unknown:
      out.agreement = Agreement::ExactUnknown;
      break;
  }
  return out;
}

}  // namespace dsp::numeric
