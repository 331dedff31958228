#pragma once

// Admissible reflections on pairs [q, a], bounded orbit exploration, the F_q test and the
// recogniser for the three reduced shapes of pairs in F_q but not in Sigma_q.
//
// Convention for the action on q: u_v(q)_i = q_i * q_v^{-(e_i, e_v)}. It is pinned by
// the identity u_v(q)^{s_v(b)} = q^b for every b, which the tests check exactly.

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "dsp/errors.hpp"
#include "dsp/lattice.hpp"
#include "dsp/roots.hpp"
#include "dsp/spectral.hpp"

namespace dsp {

struct Pair {
  CharacterQ q;
  LatticeVector alpha;

  friend bool operator==(const Pair& a, const Pair& b) { return a.alpha == b.alpha && a.q == b.q; }
};

struct PairHash {
  std::size_t operator()(const Pair& p) const noexcept {
    std::size_t h = LatticeVectorHash{}(p.alpha);
    for (const auto& x : p.q) h = h * 31 + x.hash();
    return h;
  }
};

inline bool admissible(std::size_t v, const Pair& p) { return !p.q[v].is_one(); }

inline Pair reflect_pair(const Quiver& Q, std::size_t v, const Pair& p) {
  Q.check(p.alpha);
  if (p.q.size() != Q.vertex_count()) throw InputError("reflect_pair: character has wrong size");
  if (v >= Q.vertex_count()) throw InputError("reflect_pair: vertex out of range");
  if (!admissible(v, p)) throw InputError("reflection at " + Q.name(v) + " is not admissible (q_v = 1)");
  Pair out{p.q, reflect(Q, v, p.alpha)};
  for (std::size_t i = 0; i < Q.vertex_count(); ++i) {
    auto c = sym_simple(Q, Q.simple(i), v);
    if (c != 0) out.q[i] = p.q[i] * p.q[v].pow(-c);
  }
  return out;
}

struct Orbit {
  std::vector<Pair> pairs;  // breadth-first order, starting pair first
  bool closed = false;      // no admissible reflection leads outside `pairs`
};

inline constexpr std::size_t kDefaultMaxOrbit = 100'000;

/// Pairs reachable by at most `depth` admissible reflections.
inline Orbit explore_orbit(const Quiver& Q, const Pair& start, std::size_t depth,
                           std::size_t max_pairs = kDefaultMaxOrbit) {
  Orbit out;
  std::unordered_set<Pair, PairHash> seen{start};
  out.pairs.push_back(start);
  std::size_t level_begin = 0;
  for (std::size_t d = 0;; ++d) {
    std::size_t level_end = out.pairs.size();
    bool grew = false;
    for (std::size_t k = level_begin; k < level_end; ++k) {
      for (std::size_t v = 0; v < Q.vertex_count(); ++v) {
        if (!admissible(v, out.pairs[k])) continue;
        Pair next = reflect_pair(Q, v, out.pairs[k]);
        if (seen.contains(next)) continue;
        grew = true;
        if (d == depth) break;  // only probing whether the orbit is closed
        seen.insert(next);
        out.pairs.push_back(std::move(next));
        if (out.pairs.size() >= max_pairs) return out;
      }
      if (grew && d == depth) break;
    }
    if (!grew) {
      out.closed = true;
      return out;
    }
    if (d == depth) return out;
    level_begin = level_end;
  }
}

inline std::vector<Pair> orbit_explore(const Quiver& Q, const Pair& start, std::size_t depth) {
  return explore_orbit(Q, start, depth).pairs;
}

enum class Tri { Yes, No, Unknown };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

/// Semi-decision for F_q: every equivalent pair [q', a'] has (a', e_i) <= 0 at all i with q'_i = 1.
/// Yes only when the orbit closes within `depth`.
inline Tri in_Fq(const Quiver& Q, const Pair& p, std::size_t depth, std::size_t max_pairs = kDefaultMaxOrbit) {
  auto orbit = explore_orbit(Q, p, depth, max_pairs);
  for (const auto& e : orbit.pairs)
    for (std::size_t i = 0; i < Q.vertex_count(); ++i)
      if (e.q[i].is_one() && sym_simple(Q, e.alpha, i) > 0) return Tri::No;
  return orbit.closed ? Tri::Yes : Tri::Unknown;
}

// Reduced cases ---------------------------------------------------------------------------------

enum class CaseKind { None, CaseI, CaseII, CaseIII };

inline const char* to_string(CaseKind k) {
  switch (k) {
    case CaseKind::None: return "none";
    case CaseKind::CaseI: return "I";
    case CaseKind::CaseII: return "II";
    case CaseKind::CaseIII: return "III";
  }
  return "?";
}

/// Vectors are in the coordinates of the full quiver.
struct ReducedCase {
  CaseKind kind = CaseKind::None;
  std::uint64_t m = 0;                // case I: order of q^delta
  std::int64_t h = 0;                 // cases I, III
  std::optional<LatticeVector> delta;  // cases I, III
  std::optional<LatticeVector> beta;   // case II: side containing vertex_i
  std::optional<LatticeVector> gamma;  // case II: side containing vertex_j
  std::size_t vertex_i = 0;            // case II: i; case III: j (the end with a_j = 1)
  std::size_t vertex_j = 0;            // case II: j; case III: k (extending vertex)
};

namespace detail {

/// Vertices of `within` reachable from `from` without crossing the edge {from, blocked}.
inline std::vector<char> side_of_edge(const Quiver& Q, const std::vector<char>& within, std::size_t from,
                                      std::size_t blocked) {
  std::vector<char> seen(Q.vertex_count(), 0);
  std::vector<std::size_t> stack{from};
  seen[from] = 1;
  bool skipped = false;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto u : Q.neighbors(v)) {
      if (!within[u] || seen[u]) continue;
      if (v == from && u == blocked && !skipped) {
        skipped = true;  // drop exactly one copy of the connecting arrow
        continue;
      }
      seen[u] = 1;
      stack.push_back(u);
    }
  }
  return seen;
}

inline LatticeVector restrict_to(const LatticeVector& a, const std::vector<char>& mask) {
  LatticeVector out(a.size());
  for (std::size_t v = 0; v < a.size(); ++v)
    if (mask[v]) out[v] = a[v];
  return out;
}

/// Minimal imaginary root of the full subquiver on `mask`, lifted to Q, if that part is extended Dynkin.
inline std::optional<LatticeVector> part_delta(const Quiver& Q, const std::vector<char>& mask) {
  std::vector<std::size_t> verts;
  for (std::size_t v = 0; v < Q.vertex_count(); ++v)
    if (mask[v]) verts.push_back(v);
  auto sub = Q.full_subquiver(verts);
  auto d = affine_radical(sub);
  if (!d) return std::nullopt;
  LatticeVector out(Q.vertex_count());
  for (std::size_t k = 0; k < verts.size(); ++k) out[verts[k]] = (*d)[k];
  return out;
}

/// t with a = t * d, if any.
inline std::optional<std::int64_t> multiple_of(const LatticeVector& a, const LatticeVector& d) {
  std::optional<std::int64_t> t;
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (d[v] == 0) {
      if (a[v] != 0) return std::nullopt;
      continue;
    }
    if (a[v] % d[v] != 0) return std::nullopt;
    auto s = a[v] / d[v];
    if (t && *t != s) return std::nullopt;
    t = s;
  }
  return t;
}

}  // namespace detail

/// Recognises cases (I), (II), (III) on the support quiver of p.alpha with the restricted q.
/// It does not search the orbit; see find_reduced_case.
inline ReducedCase classify_case(const Quiver& Q, const Pair& p) {
  Q.check(p.alpha);
  ReducedCase out;
  const auto& a = p.alpha;
  if (!a.is_positive() || !support_connected(Q, a)) return out;
  std::vector<char> in_support(Q.vertex_count(), 0);
  for (auto v : support(a)) in_support[v] = 1;

  // (I): the support is extended Dynkin and a = h m delta with m = order of q^delta.
  if (auto delta = detail::part_delta(Q, in_support)) {
    auto t = detail::multiple_of(a, *delta);
    auto m = order_of(q_pow(p.q, *delta));
    if (t && m && *t % static_cast<std::int64_t>(*m) == 0 && *t / static_cast<std::int64_t>(*m) >= 2) {
      out.kind = CaseKind::CaseI;
      out.m = *m;
      out.h = *t / static_cast<std::int64_t>(*m);
      out.delta = *delta;
      return out;
    }
  }

  // Single arrows whose removal disconnects the support.
  for (const auto& arr : Q.arrows()) {
    auto i = arr.tail, j = arr.head;
    if (!in_support[i] || !in_support[j]) continue;
    auto side_i = detail::side_of_edge(Q, in_support, i, j);
    if (side_i[j]) continue;  // not a bridge
    auto side_j = detail::side_of_edge(Q, in_support, j, i);

    // (II)
    if (a[i] == 1 && a[j] == 1) {
      auto beta = detail::restrict_to(a, side_i);
      auto gamma = detail::restrict_to(a, side_j);
      if (q_pow(p.q, beta).is_one() && q_pow(p.q, gamma).is_one()) {
        out.kind = CaseKind::CaseII;
        out.beta = beta;
        out.gamma = gamma;
        out.vertex_i = i;
        out.vertex_j = j;
        return out;
      }
    }
    // (III), with either end playing the role of j.
    for (int flip = 0; flip < 2; ++flip) {
      auto jj = flip ? j : i;
      auto kk = flip ? i : j;
      const auto& part = flip ? side_i : side_j;
      if (a[jj] != 1) continue;
      auto delta = detail::part_delta(Q, part);
      if (!delta || (*delta)[kk] != 1) continue;
      auto t = detail::multiple_of(detail::restrict_to(a, part), *delta);
      if (!t || *t < 2 || !q_pow(p.q, *delta).is_one()) continue;
      out.kind = CaseKind::CaseIII;
      out.h = *t;
      out.delta = *delta;
      out.vertex_i = jj;
      out.vertex_j = kk;
      return out;
    }
  }
  return out;
}

struct ReducedCaseHit {
  Pair pair;
  ReducedCase reduced;
};

/// First pair (breadth-first) in the bounded orbit that matches a reduced case.
inline std::optional<ReducedCaseHit> find_reduced_case(const Quiver& Q, const Pair& start, std::size_t depth) {
  for (const auto& e : explore_orbit(Q, start, depth).pairs) {
    auto c = classify_case(Q, e);
    if (c.kind != CaseKind::None) return ReducedCaseHit{e, std::move(c)};
  }
  return std::nullopt;
}

}  // namespace dsp
