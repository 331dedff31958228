#pragma once

// Verdicts and the certificates attached to them.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsp/errors.hpp"
#include "dsp/lattice.hpp"
#include "dsp/mvalue.hpp"

namespace dsp {

struct Decomposition {
  std::vector<LatticeVector> parts;

  LatticeVector sum() const {
    if (parts.empty()) throw InputError("empty decomposition");
    LatticeVector s(parts.front().size());
    for (const auto& p : parts) s += p;
    return s;
  }
};

enum class Status { Solvable, Unsolvable, Unknown };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Solvable: return "solvable";
    case Status::Unsolvable: return "unsolvable";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

namespace cert {
struct None {};
struct NotPositiveRoot {};
struct NotStrict {};
struct CharacterNotOne {
  MValue value;
};
struct ViolatingDecomposition {
  Decomposition decomposition;
  std::int64_t p_alpha = 0;
  std::vector<std::int64_t> p_parts;
};
struct EncodingUnsupported {
  std::string reason;
};
struct GuardHit {
  std::string guard;
  std::string reason;
};
/// The two Sigma_q routes gave different answers.
struct PathDisagreement {
  bool by_definition = false;
  bool by_pairing = false;
};
}  // namespace cert

using Certificate = std::variant<cert::None, cert::NotPositiveRoot, cert::NotStrict, cert::CharacterNotOne,
                                 cert::ViolatingDecomposition, cert::EncodingUnsupported, cert::GuardHit,
                                 cert::PathDisagreement>;

struct Verdict {
  Status status = Status::Unknown;
  Certificate certificate = cert::None{};
  LatticeVector alpha;
  std::optional<std::int64_t> p_alpha;
  std::optional<MValue> character;  // xi^[alpha] for instances, q^alpha for pairs
  double elapsed_ms = 0;
};

}  // namespace dsp
