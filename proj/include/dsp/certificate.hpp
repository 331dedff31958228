#pragma once

// Independent re-check of verdict certificates. Uses the lattice, root test and
// character primitives only; nothing here calls into the Sigma_q search.

#include <functional>
#include <numeric>
#include <string>
#include <variant>

#include "dsp/lattice.hpp"
#include "dsp/roots.hpp"
#include "dsp/spectral.hpp"
#include "dsp/verdict.hpp"

namespace dsp {

struct CertificateCheck {
  bool ok = false;
  std::string reason;
};

/// The character a verdict refers to: xi^[b] for problem instances, q^b for bare pairs.
using CharacterFn = std::function<MValue(const LatticeVector&)>;

namespace detail {

inline CertificateCheck fail(std::string why) { return {false, std::move(why)}; }
inline CertificateCheck pass(std::string why) { return {true, std::move(why)}; }

inline bool is_root(const Quiver& Q, const LatticeVector& b) {
  return b.is_positive() && is_positive_root(Q, b) != RootKind::NotRoot;
}

}  // namespace detail

/// `instance` selects the problem-instance reading, where strictness is part of the data.
inline CertificateCheck validate_certificate(const StarQuiver& Q, const CharacterFn& character,
                                             const LatticeVector& alpha, Status status, const Certificate& c,
                                             bool instance) {
  Q.check(alpha);
  const bool strict = is_strict(Q, alpha) && alpha[StarQuiver::center] >= 1;

  if (status == Status::Unknown) return detail::pass("unknown verdict: nothing to check");

  if (status == Status::Solvable) {
    if (!std::holds_alternative<cert::None>(c)) return detail::fail("solvable verdict carries a certificate");
    if (instance && !strict) return detail::fail("alpha is not strict");
    if (!character(alpha).is_one()) return detail::fail("character of alpha is not 1");
    if (!detail::is_root(Q, alpha)) return detail::fail("alpha is not a positive root");
    return detail::pass("necessary conditions hold");
  }

  return std::visit(
      [&](const auto& x) -> CertificateCheck {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, cert::NotStrict>) {
          if (!instance) return detail::fail("strictness certificate on a bare pair");
          return strict ? detail::fail("alpha is strict") : detail::pass("alpha is not strict");
        } else if constexpr (std::is_same_v<T, cert::CharacterNotOne>) {
          auto v = character(alpha);
          if (v.is_one()) return detail::fail("character of alpha is 1");
          if (!(v == x.value)) return detail::fail("stated character " + format(x.value) + " differs from " + format(v));
          return detail::pass("character of alpha is " + format(v));
        } else if constexpr (std::is_same_v<T, cert::NotPositiveRoot>) {
          return detail::is_root(Q, alpha) ? detail::fail("alpha is a positive root")
                                           : detail::pass("alpha is not a positive root");
        } else if constexpr (std::is_same_v<T, cert::ViolatingDecomposition>) {
          const auto& parts = x.decomposition.parts;
          if (parts.size() < 2) return detail::fail("decomposition has fewer than two parts");
          if (x.p_parts.size() != parts.size()) return detail::fail("p-values do not match the parts");
          LatticeVector sum = Q.zero();
          std::int64_t total = 0;
          for (std::size_t k = 0; k < parts.size(); ++k) {
            const auto& b = parts[k];
            Q.check(b);
            if (!detail::is_root(Q, b)) return detail::fail("part " + std::to_string(k + 1) + " is not a positive root");
            if (!character(b).is_one()) return detail::fail("part " + std::to_string(k + 1) + " has nontrivial character");
            if (p_value(Q, b) != x.p_parts[k]) return detail::fail("stated p of part " + std::to_string(k + 1) + " is wrong");
            sum += b;
            total += x.p_parts[k];
          }
          if (sum != alpha) return detail::fail("parts do not sum to alpha");
          if (p_value(Q, alpha) != x.p_alpha) return detail::fail("stated p(alpha) is wrong");
          if (x.p_alpha > total) return detail::fail("p(alpha) exceeds the sum over the parts");
          return detail::pass("p(alpha) = " + std::to_string(x.p_alpha) + " <= " + std::to_string(total));
        } else {
          return detail::fail("unsolvable verdict without a checkable certificate");
        }
      },
      c);
}

inline CertificateCheck validate_certificate(const StarQuiver& Q, const XiTable& xi, const LatticeVector& alpha,
                                             Status status, const Certificate& c) {
  return validate_certificate(Q, [&](const LatticeVector& b) { return xi_char(Q, xi, b); }, alpha, status, c, true);
}

inline CertificateCheck validate_certificate(const StarQuiver& Q, const CharacterQ& q, const LatticeVector& alpha,
                                             Status status, const Certificate& c) {
  return validate_certificate(Q, [&](const LatticeVector& b) { return q_pow(q, b); }, alpha, status, c, false);
}

}  // namespace dsp
