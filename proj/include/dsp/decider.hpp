#pragma once

// Solvability of the Deligne-Simpson problem through the root system of the star quiver.
//
// For q in (C^*)^I:
//   R_q      positive roots b with q^b = 1
//   N R_q    nonempty sums of elements of R_q
//   Sigma_q  a in R_q admitting no decomposition a = b + c + ... (>= 2 parts in R_q)
//            with p(a) <= p(b) + p(c) + ...
// Sigma_q membership is computed two ways: straight from the definition, and by the
// pairing characterisation (0 != a in N R_q and (b, a - b) <= -2 whenever b and a - b
// are nonzero elements of N R_q). decide_dsp requires the two to agree.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dsp/errors.hpp"
#include "dsp/lattice.hpp"
#include "dsp/matrices.hpp"
#include "dsp/mvalue.hpp"
#include "dsp/roots.hpp"
#include "dsp/spectral.hpp"
#include "dsp/verdict.hpp"

namespace dsp {

struct Guards {
  /// Largest box {0 <= b <= a} that is scanned.
  std::uint64_t max_box = kDefaultMaxBox;
  /// Cap on decomposition-search steps (one step = one (residual, part) pair examined).
  std::uint64_t max_decomps = 200'000'000;

  /// Defaults, overridden by DSP_MAX_BOX / DSP_MAX_DECOMPS when set.
  static Guards from_environment() {
    Guards g;
    if (const char* s = std::getenv("DSP_MAX_BOX")) g.max_box = std::strtoull(s, nullptr, 10);
    if (const char* s = std::getenv("DSP_MAX_DECOMPS")) g.max_decomps = std::strtoull(s, nullptr, 10);
    return g;
  }
};

/// Full input of one problem: weights, eigenvalues, dimension vector, optional matrices.
struct ProblemInstance {
  StarQuiver quiver;
  XiTable xi;
  LatticeVector alpha;
  std::optional<MatrixTuple> matrices;

  ProblemInstance() = default;
  ProblemInstance(WeightSequence w, XiTable x, LatticeVector a, std::optional<MatrixTuple> m = std::nullopt)
      : quiver(std::move(w)), xi(std::move(x)), alpha(std::move(a)), matrices(std::move(m)) {
    validate();
  }

  std::int64_t n() const { return alpha[StarQuiver::center]; }

  void validate() const {
    xi.check(quiver);
    quiver.check(alpha);
    if (alpha[StarQuiver::center] < 1) throw InputError("n_* must be >= 1");
    if (!is_strict(quiver, alpha)) throw InputError("alpha is not strict");
    if (matrices) {
      if (tuple_dim(*matrices) != static_cast<std::size_t>(n()))
        throw InputError("matrix size does not equal n_*");
      auto recomputed = alpha_from_matrices(quiver, *matrices, xi);
      if (recomputed != alpha) {
        std::ostringstream os;
        os << "declared alpha " << alpha << " does not match rank data of the matrices " << recomputed;
        throw InputError(os.str());
      }
    }
  }
};

// Sigma_q machinery ---------------------------------------------------------------------------

/// The box under a fixed a together with the roots below a that have trivial q-character.
class SigmaContext {
 public:
  /// trivial_roots: positive roots b <= alpha with q^b = 1 (any order, no duplicates).
  SigmaContext(const Quiver& Q, LatticeVector alpha, std::vector<LatticeVector> trivial_roots,
               Guards guards = {})
      : Q_(&Q), alpha_(std::move(alpha)), box_(checked_bound(Q, alpha_), guards.max_box), guards_(guards) {
    for (auto& r : trivial_roots) {
      if (!box_.contains(r) || r.is_zero()) throw InputError("trivial root is not below alpha");
      parts_.push_back({box_.index(r), p_value(Q, r), r});
    }
  }

  /// Builds the trivial root set from q by scanning the box under alpha.
  static SigmaContext from_character(const Quiver& Q, const LatticeVector& alpha, const CharacterQ& q,
                                     Guards guards = {}) {
    if (q.size() != Q.vertex_count()) throw InputError("character has wrong number of entries");
    RootTable table(Q, checked_bound(Q, alpha), guards.max_box);
    std::vector<LatticeVector> trivial;
    for (std::size_t idx = 1; idx < table.box().volume(); ++idx) {
      if (table.kind(idx) == RootKind::NotRoot) continue;
      auto b = table.box().at(idx);
      if (q_pow(q, b).is_one()) trivial.push_back(std::move(b));
    }
    return SigmaContext(Q, alpha, std::move(trivial), guards);
  }

  const LatticeVector& alpha() const noexcept { return alpha_; }
  std::size_t trivial_root_count() const noexcept { return parts_.size(); }

  bool alpha_in_Rq() const {
    auto a = box_.index(alpha_);
    for (const auto& p : parts_)
      if (p.index == a) return true;
    return false;
  }

  /// a != 0 and a is a sum of trivial roots.
  bool in_NRq(const LatticeVector& b) {
    if (!box_.contains(b)) throw InputError("vector is outside the box under alpha");
    if (b.is_zero()) return false;
    ensure_dp();
    return reachable(box_.index(b));
  }

  /// Definition route. On failure, `witness` receives a decomposition with
  /// p(alpha) <= sum of p(parts).
  bool by_definition(Decomposition* witness = nullptr) {
    if (alpha_.is_zero() || !alpha_in_Rq()) return false;
    ensure_dp();
    const auto a = box_.index(alpha_);
    const auto pa = p_value(*Q_, alpha_);
    std::int64_t split = kImpossible;
    std::size_t split_part = kNone;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      const auto& r = parts_[k];
      if (r.index == a) continue;
      auto rest = best_[a - r.index];
      if (rest == kImpossible) continue;
      if (r.p + rest > split) split = r.p + rest, split_part = k;
    }
    if (split == kImpossible || split < pa) return true;
    if (witness) {
      witness->parts.clear();
      witness->parts.push_back(parts_[split_part].vec);
      for (auto idx = a - parts_[split_part].index; idx != 0; idx -= parts_[choice_[idx]].index)
        witness->parts.push_back(parts_[choice_[idx]].vec);
    }
    return false;
  }

  /// Pairing route.
  bool by_pairing() {
    if (alpha_.is_zero()) return false;
    if (!alpha_.is_nonnegative()) throw InputError("pairing criterion needs a nonnegative vector");
    ensure_dp();
    const auto a = box_.index(alpha_);
    if (!reachable(a)) return false;
    const std::size_t n = Q_->vertex_count();
    std::vector<std::int64_t> pair_alpha(n);
    for (std::size_t v = 0; v < n; ++v) pair_alpha[v] = sym_simple(*Q_, alpha_, v);
    LatticeVector b(n);
    for (std::size_t idx = 1; idx < a; ++idx) {
      box_.next(b);
      if (!reachable(idx) || !reachable(a - idx)) continue;
      tick();
      // (b, a - b) = (b, a) - (b, b)
      std::int64_t ba = 0;
      for (std::size_t v = 0; v < n; ++v) ba += b[v] * pair_alpha[v];
      if (ba - 2 * tits_form(*Q_, b) > -2) return false;
    }
    return true;
  }

 private:
  struct Part {
    std::size_t index;
    std::int64_t p;
    LatticeVector vec;
  };
  static constexpr std::int64_t kImpossible = std::numeric_limits<std::int64_t>::min() + 1;
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  static const LatticeVector& checked_bound(const Quiver& Q, const LatticeVector& a) {
    Q.check(a);
    if (!a.is_nonnegative()) throw InputError("Sigma_q membership is only defined for nonnegative vectors");
    return a;
  }

  void tick() {
    if (++steps_ > guards_.max_decomps)
      throw GuardExceeded("max_decomps", "decomposition search exceeded " + std::to_string(guards_.max_decomps) +
                                             " steps");
  }

  bool reachable(std::size_t idx) const { return best_[idx] != kImpossible; }

  /// Forward pass over the box in index order. best_[c] is the largest sum of p over
  /// decompositions of cell c into trivial roots (kImpossible if there is none), and
  /// choice_[c] is the last part of one such decomposition.
  void ensure_dp() {
    if (!best_.empty()) return;
    const auto V = box_.volume();
    const std::size_t n = alpha_.size();
    best_.assign(V, kImpossible);
    choice_.assign(V, kNone);
    best_[0] = 0;
    LatticeVector c(n);
    for (std::size_t idx = 0; idx < V; ++idx) {
      if (idx > 0) box_.next(c);
      if (best_[idx] == kImpossible) continue;
      for (std::size_t k = 0; k < parts_.size(); ++k) {
        const auto& r = parts_[k];
        bool fits = true;
        for (std::size_t v = 0; v < n && fits; ++v) fits = c[v] + r.vec[v] <= alpha_[v];
        if (!fits) continue;
        tick();
        auto t = idx + r.index;
        if (best_[idx] + r.p > best_[t]) best_[t] = best_[idx] + r.p, choice_[t] = k;
      }
    }
  }

  const Quiver* Q_;
  LatticeVector alpha_;
  Box box_;
  Guards guards_;
  std::vector<Part> parts_;
  std::vector<std::int64_t> best_;
  std::vector<std::size_t> choice_;
  std::uint64_t steps_ = 0;
};

/// a is a positive root with q^a = 1.
inline bool in_Rq(const Quiver& Q, const LatticeVector& a, const CharacterQ& q) {
  Q.check(a);
  if (!a.is_positive() || is_positive_root(Q, a) == RootKind::NotRoot) return false;
  return q_pow(q, a).is_one();
}

inline bool in_NRq(const Quiver& Q, const LatticeVector& a, const CharacterQ& q, Guards guards = {}) {
  auto ctx = SigmaContext::from_character(Q, a, q, guards);
  return ctx.in_NRq(a);
}

inline bool sigma_by_definition(const Quiver& Q, const LatticeVector& a, const CharacterQ& q, Guards guards = {},
                                Decomposition* witness = nullptr) {
  auto ctx = SigmaContext::from_character(Q, a, q, guards);
  return ctx.by_definition(witness);
}

inline bool sigma_by_pairing(const Quiver& Q, const LatticeVector& a, const CharacterQ& q, Guards guards = {}) {
  auto ctx = SigmaContext::from_character(Q, a, q, guards);
  return ctx.by_pairing();
}

// Verdicts --------------------------------------------------------------------------------------

namespace detail {

template <class F>
Verdict timed(F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  Verdict v = body();
  v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

/// Sigma_q decision for a vector already known to be a positive root with trivial character.
inline Verdict sigma_verdict(const Quiver& Q, const LatticeVector& alpha, const CharacterQ& q, Guards guards,
                             Verdict v) {
  try {
    auto ctx = SigmaContext::from_character(Q, alpha, q, guards);
    Decomposition d;
    bool def = ctx.by_definition(&d);
    bool pair = ctx.by_pairing();
    if (def != pair) {
      v.status = Status::Unknown;
      v.certificate = cert::PathDisagreement{def, pair};
    } else if (def) {
      v.status = Status::Solvable;
    } else {
      cert::ViolatingDecomposition c;
      c.p_alpha = p_value(Q, alpha);
      for (const auto& part : d.parts) c.p_parts.push_back(p_value(Q, part));
      c.decomposition = std::move(d);
      v.status = Status::Unsolvable;
      v.certificate = std::move(c);
    }
  } catch (const GuardExceeded& e) {
    v.status = Status::Unknown;
    v.certificate = cert::GuardHit{e.guard(), e.what()};
  } catch (const EncodingUnsupported& e) {
    v.status = Status::Unknown;
    v.certificate = cert::EncodingUnsupported{e.what()};
  }
  return v;
}

}  // namespace detail

/// Is alpha in Sigma_q? Solvable means yes. Works for any pair [q, alpha], including
/// vectors with negative entries (which are never positive roots).
inline Verdict decide_pair(const Quiver& Q, const CharacterQ& q, const LatticeVector& alpha, Guards guards = {}) {
  return detail::timed([&] {
    Q.check(alpha);
    Verdict v;
    v.alpha = alpha;
    v.p_alpha = p_value(Q, alpha);
    try {
      v.character = q_pow(q, alpha);
      if (!v.character->is_one()) {
        v.status = Status::Unsolvable;
        v.certificate = cert::CharacterNotOne{*v.character};
        return v;
      }
    } catch (const EncodingUnsupported& e) {
      v.certificate = cert::EncodingUnsupported{e.what()};
      return v;
    }
    if (!alpha.is_positive() || is_positive_root(Q, alpha) == RootKind::NotRoot) {
      v.status = Status::Unsolvable;
      v.certificate = cert::NotPositiveRoot{};
      return v;
    }
    return detail::sigma_verdict(Q, alpha, q, guards, std::move(v));
  });
}

/// Irreducible solution to A_1 ... A_k = 1 exists iff alpha is a positive root,
/// xi^[alpha] = 1 and p(alpha) > p(b) + p(c) + ... for every decomposition into
/// positive roots with trivial character.
inline Verdict decide_dsp(const ProblemInstance& inst, Guards guards = {}) {
  return detail::timed([&] {
    const auto& Q = inst.quiver;
    const auto& alpha = inst.alpha;
    Verdict v;
    v.alpha = alpha;
    v.p_alpha = p_value(Q, alpha);
    if (!is_strict(Q, alpha) || alpha[StarQuiver::center] < 1) {
      v.status = Status::Unsolvable;
      v.certificate = cert::NotStrict{};
      return v;
    }
    CharacterQ q;
    try {
      v.character = xi_char(Q, inst.xi, alpha);
      q = q_from_xi(Q, inst.xi);
    } catch (const EncodingUnsupported& e) {
      v.certificate = cert::EncodingUnsupported{e.what()};
      return v;
    }
    if (!v.character->is_one()) {
      v.status = Status::Unsolvable;
      v.certificate = cert::CharacterNotOne{*v.character};
      return v;
    }
    if (is_positive_root(Q, alpha) == RootKind::NotRoot) {
      v.status = Status::Unsolvable;
      v.certificate = cert::NotPositiveRoot{};
      return v;
    }
    return detail::sigma_verdict(Q, alpha, q, guards, std::move(v));
  });
}

}  // namespace dsp
