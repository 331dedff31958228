#pragma once

// JSON problem documents and verdict documents.
//
// Problem document (format 1):
//
//   {
//     "format": 1,
//     "mode": "cyclo",                      // or "sym"
//     "weights": [2, 2, 2],
//     "generators": ["a", "b"],             // sym mode only
//     "relations": [[1, -1]],               // sym mode only, rows declared equal to 1
//     "xi": [["2", "3"], ["5", "7"], ["1/11", "11/210"]],
//     "alpha": {"*": 2, "1,1": 1, "2,1": 1, "3,1": 1},   // or "from_matrices"
//     "matrices": [ [[1, 0], [0, "1/2"]], ... ]          // optional
//   }
//
// Missing alpha coordinates are zero. Matrix entries are integers or "p/q" strings (exact),
// or floats and [re, im] pairs (floating). A document may give "q" (a map vertex -> value)
// instead of "xi"; it then describes a bare pair [q, alpha] rather than a problem instance.

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dsp/errors.hpp"
#include "dsp/lattice.hpp"
#include "dsp/matrices.hpp"
#include "dsp/mvalue.hpp"
#include "dsp/reflection.hpp"
#include "dsp/spectral.hpp"
#include "dsp/verdict.hpp"
#include "dsp/decider.hpp"

namespace dsp::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

struct Document {
  StarQuiver quiver;
  ValueMode mode = ValueMode::Cyclo;
  std::shared_ptr<const SymDomain> domain;  // sym mode
  std::optional<XiTable> xi;                // absent for pair documents
  CharacterQ q;
  LatticeVector alpha;
  std::optional<MatrixTuple> matrices;
  bool alpha_from_matrices = false;

  bool is_pair() const noexcept { return !xi.has_value(); }

  ProblemInstance instance() const {
    if (!xi) throw InputError("document describes a pair [q, alpha], not a problem instance");
    ProblemInstance inst;
    inst.quiver = quiver;
    inst.xi = *xi;
    inst.alpha = alpha;
    inst.matrices = matrices;
    return inst;
  }
  Pair pair() const { return Pair{q, alpha}; }
};

namespace detail {

/// (line, column) of every string value (not key) in document order.
inline std::vector<std::pair<std::size_t, std::size_t>> string_value_positions(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size();) {
    char ch = text[i];
    if (ch != '"') {
      if (ch == '\n') ++line, col = 1;
      else ++col;
      ++i;
      continue;
    }
    auto start = std::make_pair(line, col);
    ++i, ++col;
    while (i < text.size() && text[i] != '"') {
      if (text[i] == '\\') ++i, ++col;
      if (i < text.size() && text[i] == '\n') ++line, col = 0;
      ++i, ++col;
    }
    ++i, ++col;  // closing quote
    std::size_t j = i;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j >= text.size() || text[j] != ':') out.push_back(start);
  }
  return out;
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return {line, col};
}

}  // namespace detail

/// Parsed JSON text plus what is needed to point at offending string values.
class Reader {
 public:
  explicit Reader(std::string_view text) {
    try {
      root_ = Json::parse(text);
    } catch (const Json::parse_error& e) {
      auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
      std::string what = e.what();
      if (auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
      throw SyntaxError("invalid JSON: " + what, line, col);
    }
    positions_ = detail::string_value_positions(text);
    std::size_t next = 0;
    index(root_, next);
  }

  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  const Json& root() const noexcept { return root_; }

  /// Re-raises a value-grammar error with its position in the document.
  [[noreturn]] void relocate(const Json& node, const std::string& path, const SyntaxError& e) const {
    auto it = ordinal_.find(&node);
    if (it != ordinal_.end() && it->second < positions_.size()) {
      auto [line, col] = positions_[it->second];
      throw SyntaxError(path + ": " + e.message(), line, col + e.column());
    }
    throw SyntaxError(path + ": " + e.message(), 1, 1);
  }

 private:
  void index(const Json& j, std::size_t& next) {
    if (j.is_string()) {
      ordinal_[&j] = next++;
    } else if (j.is_array() || j.is_object()) {
      for (const auto& x : j) index(x, next);
    }
  }

  Json root_;
  std::vector<std::pair<std::size_t, std::size_t>> positions_;
  std::unordered_map<const Json*, std::size_t> ordinal_;
};

namespace detail {

[[noreturn]] inline void semantic(const std::string& path, const std::string& what) {
  throw SemanticError(path + ": " + what);
}

inline const Json& member(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) semantic(path, std::string("missing field \"") + key + "\"");
  return *it;
}

inline std::int64_t as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) semantic(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) semantic(path, "expected an array");
  return j;
}

inline std::string vertex_key(const StarQuiver& Q, std::size_t v) {
  if (v == StarQuiver::center) return "*";
  const auto& n = Q.name(v);  // "[i,j]"
  return n.substr(1, n.size() - 2);
}

inline std::size_t vertex_from_key(const StarQuiver& Q, std::string key, const std::string& path) {
  if (key.size() >= 2 && key.front() == '[' && key.back() == ']') key = key.substr(1, key.size() - 2);
  if (key == "*") return StarQuiver::center;
  auto comma = key.find(',');
  if (comma == std::string::npos) semantic(path, "vertex key '" + key + "' is neither \"*\" nor \"i,j\"");
  try {
    std::size_t a = 0, b = 0;
    auto i = std::stoul(key.substr(0, comma), &a);
    auto j = std::stoul(key.substr(comma + 1), &b);
    if (a != comma || b != key.size() - comma - 1) throw std::invalid_argument(key);
    return Q.vertex(i, j);
  } catch (const InputError&) {
    semantic(path, "vertex " + key + " does not exist for these weights");
  } catch (const std::exception&) {
    semantic(path, "vertex key '" + key + "' is neither \"*\" nor \"i,j\"");
  }
}

inline MValue parse_value(const Reader& r, const Json& node, const std::string& path, ValueMode mode,
                          const std::shared_ptr<const SymDomain>& domain) {
  if (!node.is_string()) semantic(path, "expected a value string");
  const auto& text = node.get_ref<const std::string&>();
  try {
    return mode == ValueMode::Cyclo ? parse_cyclo(text) : parse_sym(text, domain);
  } catch (const SyntaxError& e) {
    r.relocate(node, path, e);
  } catch (const SemanticError& e) {
    semantic(path, e.what());
  } catch (const InputError& e) {
    semantic(path, e.what());
  }
}

inline cpp_rational parse_exact_entry(const std::string& s, const std::string& path) {
  auto slash = s.find('/');
  try {
    cpp_int num(s.substr(0, slash));
    cpp_int den = slash == std::string::npos ? cpp_int(1) : cpp_int(s.substr(slash + 1));
    if (den == 0) semantic(path, "zero denominator");
    return cpp_rational(num, den);
  } catch (const SemanticError&) {
    throw;
  } catch (const std::exception&) {
    semantic(path, "matrix entry '" + s + "' is not an integer or p/q");
  }
}

inline MatrixTuple parse_matrices(const Json& j, const std::string& path) {
  as_array(j, path);
  bool floating = false;
  for (const auto& m : j)
    for (const auto& row : as_array(m, path))
      for (const auto& x : as_array(row, path))
        if (x.is_number_float() || x.is_array()) floating = true;
  std::size_t n = 0;
  std::vector<ExactMatrix> exact;
  std::vector<ComplexMatrix> fl;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto mp = path + "[" + std::to_string(i) + "]";
    const auto& m = j[i];
    if (i == 0) n = m.size();
    if (m.size() != n || n == 0) semantic(mp, "matrices must be square, nonempty and of equal size");
    ExactMatrix e(n);
    ComplexMatrix c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      if (m[r].size() != n) semantic(mp, "row " + std::to_string(r) + " has the wrong length");
      for (std::size_t s = 0; s < n; ++s) {
        const auto& x = m[r][s];
        auto ep = mp + "[" + std::to_string(r) + "][" + std::to_string(s) + "]";
        auto R = static_cast<Eigen::Index>(r), S = static_cast<Eigen::Index>(s);
        if (x.is_number_integer()) {
          e(r, s) = cpp_rational(x.get<std::int64_t>());
          c(R, S) = static_cast<double>(x.get<std::int64_t>());
        } else if (x.is_number_float()) {
          c(R, S) = x.get<double>();
        } else if (x.is_string()) {
          auto q = parse_exact_entry(x.get<std::string>(), ep);
          e(r, s) = q;
          c(R, S) = static_cast<double>(q);
        } else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
          c(R, S) = std::complex<double>(x[0].get<double>(), x[1].get<double>());
        } else {
          semantic(ep, "matrix entry must be an integer, \"p/q\", a float or [re, im]");
        }
      }
    }
    exact.push_back(std::move(e));
    fl.push_back(std::move(c));
  }
  if (floating) return fl;
  return exact;
}

inline Json matrices_to_json(const MatrixTuple& m) {
  Json out = Json::array();
  if (const auto* exact = std::get_if<std::vector<ExactMatrix>>(&m)) {
    for (const auto& A : *exact) {
      Json rows = Json::array();
      for (std::size_t r = 0; r < A.size(); ++r) {
        Json row = Json::array();
        for (std::size_t s = 0; s < A.size(); ++s) {
          const auto& x = A(r, s);
          if (boost::multiprecision::denominator(x) == 1 && abs(boost::multiprecision::numerator(x)) < cpp_int(INT64_MAX))
            row.push_back(static_cast<std::int64_t>(boost::multiprecision::numerator(x)));
          else
            row.push_back(format_rational(x));
        }
        rows.push_back(std::move(row));
      }
      out.push_back(std::move(rows));
    }
  } else {
    for (const auto& A : std::get<std::vector<ComplexMatrix>>(m)) {
      Json rows = Json::array();
      for (Eigen::Index r = 0; r < A.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index s = 0; s < A.cols(); ++s) row.push_back(Json::array({A(r, s).real(), A(r, s).imag()}));
        rows.push_back(std::move(row));
      }
      out.push_back(std::move(rows));
    }
  }
  return out;
}

}  // namespace detail

inline LatticeVector parse_alpha_map(const StarQuiver& Q, const Json& j, const std::string& path) {
  if (!j.is_object()) detail::semantic(path, "expected a map from vertices to integers");
  LatticeVector a = Q.zero();
  std::vector<char> seen(Q.vertex_count(), 0);
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto v = detail::vertex_from_key(Q, it.key(), path);
    if (seen[v]) detail::semantic(path, "vertex " + it.key() + " given twice");
    seen[v] = 1;
    a[v] = detail::as_int(it.value(), path + "." + it.key());
  }
  return a;
}

inline Json alpha_to_json(const StarQuiver& Q, const LatticeVector& a) {
  Json out = Json::object();
  for (std::size_t v = 0; v < Q.vertex_count(); ++v) out[detail::vertex_key(Q, v)] = a[v];
  return out;
}

/// Parses a problem (or pair) document found at `node`.
inline Document parse_document(const Reader& r, const Json& node, const std::string& path = "$") {
  using detail::member;
  using detail::semantic;
  if (!node.is_object()) semantic(path, "document must be a JSON object");
  if (detail::as_int(member(node, "format", path), path + ".format") != kFormatVersion)
    semantic(path + ".format", "unsupported format version (expected 1)");

  Document doc;
  if (auto it = node.find("mode"); it != node.end()) {
    if (*it == "cyclo") doc.mode = ValueMode::Cyclo;
    else if (*it == "sym") doc.mode = ValueMode::Sym;
    else semantic(path + ".mode", "mode must be \"cyclo\" or \"sym\"");
  }

  std::vector<int> w;
  const auto& wj = detail::as_array(member(node, "weights", path), path + ".weights");
  for (std::size_t i = 0; i < wj.size(); ++i) {
    auto x = detail::as_int(wj[i], path + ".weights[" + std::to_string(i) + "]");
    if (x < 1 || x > 1'000'000) semantic(path + ".weights[" + std::to_string(i) + "]", "weights must be >= 1");
    w.push_back(static_cast<int>(x));
  }
  if (w.empty()) semantic(path + ".weights", "at least one weight is required");
  doc.quiver = StarQuiver(WeightSequence(w));
  const auto& Q = doc.quiver;

  if (doc.mode == ValueMode::Sym) {
    auto domain = std::make_shared<SymDomain>();
    const auto& gj = detail::as_array(member(node, "generators", path), path + ".generators");
    for (std::size_t g = 0; g < gj.size(); ++g) {
      auto gp = path + ".generators[" + std::to_string(g) + "]";
      if (!gj[g].is_string()) semantic(gp, "generator names must be strings");
      auto name = gj[g].get<std::string>();
      bool ok = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
      for (char ch : name) ok = ok && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_');
      if (!ok) semantic(gp, "invalid generator name '" + name + "'");
      for (const auto& prev : domain->generators)
        if (prev == name) semantic(gp, "generator '" + name + "' declared twice");
      domain->generators.push_back(name);
    }
    std::vector<std::vector<std::int64_t>> rows;
    if (auto it = node.find("relations"); it != node.end()) {
      for (std::size_t k = 0; k < detail::as_array(*it, path + ".relations").size(); ++k) {
        auto rp = path + ".relations[" + std::to_string(k) + "]";
        const auto& row = detail::as_array((*it)[k], rp);
        if (row.size() != domain->generators.size()) semantic(rp, "relation length differs from generator count");
        std::vector<std::int64_t> v;
        for (const auto& x : row) v.push_back(detail::as_int(x, rp));
        rows.push_back(std::move(v));
      }
    }
    try {
      domain->relations = RelationLattice(domain->generators.size(), rows);
    } catch (const InputError& e) {
      semantic(path + ".relations", e.what());
    }
    doc.domain = std::move(domain);
  } else if (node.contains("generators") || node.contains("relations")) {
    semantic(path, "generators/relations are only allowed in sym mode");
  }

  const bool has_xi = node.contains("xi"), has_q = node.contains("q");
  if (has_xi == has_q) semantic(path, "exactly one of \"xi\" and \"q\" must be given");
  try {
    if (has_xi) {
      const auto& xj = detail::as_array(node["xi"], path + ".xi");
      if (xj.size() != w.size())
        semantic(path + ".xi", "has " + std::to_string(xj.size()) + " arms, weights have " + std::to_string(w.size()));
      std::vector<std::vector<MValue>> rows;
      for (std::size_t i = 0; i < xj.size(); ++i) {
        auto ap = path + ".xi[" + std::to_string(i) + "]";
        const auto& arm = detail::as_array(xj[i], ap);
        if (arm.size() != static_cast<std::size_t>(w[i]))
          semantic(ap, "arm " + std::to_string(i + 1) + " lists " + std::to_string(arm.size()) +
                           " eigenvalues, weight is " + std::to_string(w[i]));
        std::vector<MValue> row;
        for (std::size_t j = 0; j < arm.size(); ++j)
          row.push_back(detail::parse_value(r, arm[j], ap + "[" + std::to_string(j) + "]", doc.mode, doc.domain));
        rows.push_back(std::move(row));
      }
      doc.xi = XiTable(std::move(rows));
      doc.q = q_from_xi(Q, *doc.xi);
    } else {
      const auto& qj = node["q"];
      if (!qj.is_object()) semantic(path + ".q", "expected a map from vertices to values");
      std::vector<std::optional<MValue>> q(Q.vertex_count());
      for (auto it = qj.begin(); it != qj.end(); ++it) {
        auto v = detail::vertex_from_key(Q, it.key(), path + ".q");
        if (q[v]) semantic(path + ".q", "vertex " + it.key() + " given twice");
        q[v] = detail::parse_value(r, it.value(), path + ".q." + it.key(), doc.mode, doc.domain);
      }
      std::vector<MValue> qs;
      for (std::size_t v = 0; v < q.size(); ++v) {
        if (!q[v]) semantic(path + ".q", "no value for vertex " + detail::vertex_key(Q, v));
        qs.push_back(*q[v]);
      }
      doc.q = CharacterQ(std::move(qs));
    }
  } catch (const ModeMismatch& e) {
    semantic(path, e.what());
  }

  if (auto it = node.find("matrices"); it != node.end()) {
    if (!has_xi) semantic(path + ".matrices", "matrices need an eigenvalue table");
    doc.matrices = detail::parse_matrices(*it, path + ".matrices");
  }

  const auto& aj = member(node, "alpha", path);
  try {
    if (aj.is_string()) {
      if (aj != "from_matrices") semantic(path + ".alpha", "expected a map or \"from_matrices\"");
      if (!doc.matrices) semantic(path + ".alpha", "\"from_matrices\" needs a \"matrices\" field");
      doc.alpha = alpha_from_matrices(Q, *doc.matrices, *doc.xi);
      doc.alpha_from_matrices = true;
    } else {
      doc.alpha = parse_alpha_map(Q, aj, path + ".alpha");
    }
    if (has_xi) doc.instance().validate();
  } catch (const SemanticError&) {
    throw;
  } catch (const InputError& e) {
    semantic(path, e.what());
  }
  return doc;
}

inline Document parse_document(std::string_view text) {
  Reader r(text);
  return parse_document(r, r.root());
}

inline ProblemInstance parse_instance(std::string_view text) { return parse_document(text).instance(); }

inline Json document_to_json(const Document& doc) {
  const auto& Q = doc.quiver;
  Json out = Json::object();
  out["format"] = kFormatVersion;
  out["mode"] = doc.mode == ValueMode::Cyclo ? "cyclo" : "sym";
  Json w = Json::array();
  for (int x : Q.weights()) w.push_back(x);
  out["weights"] = std::move(w);
  if (doc.mode == ValueMode::Sym) {
    out["generators"] = doc.domain->generators;
    out["relations"] = doc.domain->relations.hnf_rows();
  }
  if (doc.xi) {
    Json xi = Json::array();
    for (const auto& row : doc.xi->rows()) {
      Json arm = Json::array();
      for (const auto& x : row) arm.push_back(format(x));
      xi.push_back(std::move(arm));
    }
    out["xi"] = std::move(xi);
  } else {
    Json q = Json::object();
    for (std::size_t v = 0; v < Q.vertex_count(); ++v) q[detail::vertex_key(Q, v)] = format(doc.q[v]);
    out["q"] = std::move(q);
  }
  out["alpha"] = alpha_to_json(Q, doc.alpha);
  if (doc.matrices) out["matrices"] = detail::matrices_to_json(*doc.matrices);
  return out;
}

inline std::string print_document(const Document& doc) { return document_to_json(doc).dump(2); }

// Verdict documents ----------------------------------------------------------------------------

inline Json certificate_to_json(const StarQuiver& Q, const Certificate& c) {
  return std::visit(
      [&](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, cert::None>) {
          return {{"type", "none"}};
        } else if constexpr (std::is_same_v<T, cert::NotPositiveRoot>) {
          return {{"type", "not_positive_root"}};
        } else if constexpr (std::is_same_v<T, cert::NotStrict>) {
          return {{"type", "not_strict"}};
        } else if constexpr (std::is_same_v<T, cert::CharacterNotOne>) {
          return {{"type", "character_not_one"}, {"value", format(x.value)}};
        } else if constexpr (std::is_same_v<T, cert::ViolatingDecomposition>) {
          Json parts = Json::array();
          for (const auto& p : x.decomposition.parts) parts.push_back(alpha_to_json(Q, p));
          return {{"type", "violating_decomposition"}, {"parts", parts}, {"p_alpha", x.p_alpha}, {"p_parts", x.p_parts}};
        } else if constexpr (std::is_same_v<T, cert::EncodingUnsupported>) {
          return {{"type", "encoding_unsupported"}, {"reason", x.reason}};
        } else if constexpr (std::is_same_v<T, cert::GuardHit>) {
          return {{"type", "guard_hit"}, {"guard", x.guard}, {"reason", x.reason}};
        } else {
          return {{"type", "path_disagreement"}, {"by_definition", x.by_definition}, {"by_pairing", x.by_pairing}};
        }
      },
      c);
}

inline Certificate certificate_from_json(const Reader& r, const Document& doc, const Json& j,
                                         const std::string& path) {
  using detail::semantic;
  if (!j.is_object()) semantic(path, "certificate must be an object");
  auto type = detail::member(j, "type", path);
  if (!type.is_string()) semantic(path + ".type", "expected a string");
  auto t = type.get<std::string>();
  if (t == "none") return cert::None{};
  if (t == "not_positive_root") return cert::NotPositiveRoot{};
  if (t == "not_strict") return cert::NotStrict{};
  if (t == "character_not_one")
    return cert::CharacterNotOne{detail::parse_value(r, detail::member(j, "value", path), path + ".value", doc.mode, doc.domain)};
  if (t == "violating_decomposition") {
    cert::ViolatingDecomposition c;
    const auto& parts = detail::as_array(detail::member(j, "parts", path), path + ".parts");
    for (std::size_t k = 0; k < parts.size(); ++k)
      c.decomposition.parts.push_back(parse_alpha_map(doc.quiver, parts[k], path + ".parts[" + std::to_string(k) + "]"));
    c.p_alpha = detail::as_int(detail::member(j, "p_alpha", path), path + ".p_alpha");
    const auto& pp = detail::as_array(detail::member(j, "p_parts", path), path + ".p_parts");
    for (const auto& x : pp) c.p_parts.push_back(detail::as_int(x, path + ".p_parts"));
    return c;
  }
  auto str = [&](const char* key) {
    const auto& x = detail::member(j, key, path);
    if (!x.is_string()) semantic(path + "." + key, "expected a string");
    return x.get<std::string>();
  };
  if (t == "encoding_unsupported") return cert::EncodingUnsupported{str("reason")};
  if (t == "guard_hit") return cert::GuardHit{str("guard"), str("reason")};
  if (t == "path_disagreement") {
    const auto& a = detail::member(j, "by_definition", path);
    const auto& b = detail::member(j, "by_pairing", path);
    if (!a.is_boolean() || !b.is_boolean()) semantic(path, "expected booleans");
    return cert::PathDisagreement{a.get<bool>(), b.get<bool>()};
  }
  semantic(path + ".type", "unknown certificate type '" + t + "'");
}

inline Status status_from_string(const std::string& s, const std::string& path) {
  if (s == "solvable") return Status::Solvable;
  if (s == "unsolvable") return Status::Unsolvable;
  if (s == "unknown") return Status::Unknown;
  detail::semantic(path, "unknown status '" + s + "'");
}

struct VerdictDocument {
  Document document;
  Verdict verdict;
  Guards guards;
  std::vector<std::string> guards_hit;
  std::optional<std::uint64_t> seed;
};

inline Json verdict_to_json(const Document& doc, const Verdict& v, const Guards& guards,
                            std::optional<std::uint64_t> seed = std::nullopt) {
  const auto& Q = doc.quiver;
  Json out = Json::object();
  out["format"] = kFormatVersion;
  out["kind"] = "verdict";
  out["instance"] = document_to_json(doc);
  out["status"] = to_string(v.status);
  out["certificate"] = certificate_to_json(Q, v.certificate);
  out["alpha"] = alpha_to_json(Q, v.alpha);
  if (v.p_alpha) out["p_of_alpha"] = *v.p_alpha;
  if (v.character) out[doc.is_pair() ? "q_of_alpha" : "xi_char_of_alpha"] = format(*v.character);
  out["timing_ms"] = v.elapsed_ms;
  out["guards"] = {{"max_box", guards.max_box}, {"max_decomps", guards.max_decomps}};
  Json hit = Json::array();
  if (const auto* g = std::get_if<cert::GuardHit>(&v.certificate)) hit.push_back(g->guard);
  out["guards_hit"] = std::move(hit);
  if (seed) out["seed"] = *seed;
  return out;
}

inline VerdictDocument parse_verdict(std::string_view text) {
  using detail::member;
  using detail::semantic;
  Reader r(text);
  const auto& j = r.root();
  if (!j.is_object()) semantic("$", "verdict document must be a JSON object");
  if (detail::as_int(member(j, "format", "$"), "$.format") != kFormatVersion)
    semantic("$.format", "unsupported format version (expected 1)");
  if (member(j, "kind", "$") != "verdict") semantic("$.kind", "expected \"verdict\"");
  VerdictDocument out;
  out.document = parse_document(r, member(j, "instance", "$"), "$.instance");
  const auto& s = member(j, "status", "$");
  if (!s.is_string()) semantic("$.status", "expected a string");
  out.verdict.status = status_from_string(s.get<std::string>(), "$.status");
  out.verdict.certificate = certificate_from_json(r, out.document, member(j, "certificate", "$"), "$.certificate");
  out.verdict.alpha = parse_alpha_map(out.document.quiver, member(j, "alpha", "$"), "$.alpha");
  if (auto it = j.find("p_of_alpha"); it != j.end()) out.verdict.p_alpha = detail::as_int(*it, "$.p_of_alpha");
  for (const char* key : {"xi_char_of_alpha", "q_of_alpha"})
    if (auto it = j.find(key); it != j.end())
      out.verdict.character = detail::parse_value(r, *it, std::string("$.") + key, out.document.mode, out.document.domain);
  if (auto it = j.find("timing_ms"); it != j.end() && it->is_number()) out.verdict.elapsed_ms = it->get<double>();
  if (auto it = j.find("guards"); it != j.end() && it->is_object()) {
    if (it->contains("max_box")) out.guards.max_box = (*it)["max_box"].get<std::uint64_t>();
    if (it->contains("max_decomps")) out.guards.max_decomps = (*it)["max_decomps"].get<std::uint64_t>();
  }
  if (auto it = j.find("guards_hit"); it != j.end() && it->is_array())
    for (const auto& g : *it)
      if (g.is_string()) out.guards_hit.push_back(g.get<std::string>());
  if (auto it = j.find("seed"); it != j.end() && it->is_number_unsigned()) out.seed = it->get<std::uint64_t>();
  return out;
}

}  // namespace dsp::io
