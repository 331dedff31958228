#pragma once

// Command-line front end: decide, roots, reflect, classify, oracle, validate-cert.
//
// Exit codes: 0 solvable (or success), 1 unsolvable (or invalid certificate), 2 unknown,
// 3 input error, 4 oracle conflict.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "dsp/certificate.hpp"
#include "dsp/decider.hpp"
#include "dsp/io.hpp"
#include "dsp/numeric_oracle.hpp"
#include "dsp/reflection.hpp"
#include "dsp/roots.hpp"

namespace dsp::cli {

enum ExitCode : int { kSolvable = 0, kUnsolvable = 1, kUnknown = 2, kInputError = 3, kConflict = 4 };

inline int exit_code(Status s) {
  switch (s) {
    case Status::Solvable: return kSolvable;
    case Status::Unsolvable: return kUnsolvable;
    case Status::Unknown: return kUnknown;
  }
  return kUnknown;
}

inline std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

namespace detail {

using io::Json;

inline Verdict decide(const io::Document& doc, const Guards& g) {
  return doc.is_pair() ? decide_pair(doc.quiver, doc.q, doc.alpha, g) : decide_dsp(doc.instance(), g);
}

inline MValue character(const io::Document& doc, const LatticeVector& b) {
  return doc.is_pair() ? q_pow(doc.q, b) : xi_char(doc.quiver, *doc.xi, b);
}

inline Json pair_to_json(const io::Document& base, const Pair& p) {
  io::Document doc = base;
  doc.xi.reset();
  doc.matrices.reset();
  doc.q = p.q;
  doc.alpha = p.alpha;
  return io::document_to_json(doc);
}

inline int cmd_decide(const io::Document& doc, const Guards& g, std::ostream& out) {
  auto v = decide(doc, g);
  out << io::verdict_to_json(doc, v, g).dump(2) << '\n';
  return exit_code(v.status);
}

inline int cmd_roots(const io::Document& doc, const Guards& g, std::ostream& out) {
  const auto& Q = doc.quiver;
  if (!doc.alpha.is_nonnegative()) throw InputError("roots: alpha must be nonnegative");
  Json roots = Json::array();
  std::size_t trivial = 0;
  RootTable table(Q, doc.alpha, g.max_box);
  for (std::size_t idx = 1; idx < table.box().volume(); ++idx) {
    auto kind = table.kind(idx);
    if (kind == RootKind::NotRoot) continue;
    auto b = table.box().at(idx);
    auto c = character(doc, b);
    trivial += c.is_one();
    roots.push_back({{"alpha", io::alpha_to_json(Q, b)},
                     {"kind", to_string(kind)},
                     {"p", p_value(Q, b)},
                     {"character", format(c)}});
  }
  Json o = {{"format", io::kFormatVersion}, {"kind", "roots"}, {"count", roots.size()},
            {"trivial_character_count", trivial}, {"roots", roots}};
  out << o.dump(2) << '\n';
  return 0;
}

inline int cmd_reflect(const io::Document& doc, const std::vector<std::string>& vertices, std::ostream& out) {
  const auto& Q = doc.quiver;
  Pair p = doc.pair();
  Json steps = Json::array();
  for (const auto& name : vertices) {
    std::size_t v = io::detail::vertex_from_key(Q, name, "--vertex");
    p = reflect_pair(Q, v, p);
    steps.push_back(io::detail::vertex_key(Q, v));
  }
  Json o = {{"format", io::kFormatVersion},
            {"kind", "pair"},
            {"reflections", steps},
            {"pair", pair_to_json(doc, p)},
            {"q_of_alpha", format(q_pow(p.q, p.alpha))},
            {"p_of_alpha", p_value(Q, p.alpha)}};
  out << o.dump(2) << '\n';
  return 0;
}

inline int cmd_classify(const io::Document& doc, std::size_t depth, std::ostream& out) {
  const auto& Q = doc.quiver;
  auto cls = classify(Q);
  Json quiver = {{"kind", to_string(cls.kind)}};
  if (cls.delta) {
    quiver["delta"] = io::alpha_to_json(Q, *cls.delta);
    Json ext = Json::array();
    for (auto v : cls.extending_vertices) ext.push_back(io::detail::vertex_key(Q, v));
    quiver["extending_vertices"] = ext;
  }
  Json o = {{"format", io::kFormatVersion}, {"kind", "classification"}, {"quiver", quiver}, {"depth", depth}};
  const auto& a = doc.alpha;
  o["alpha_root_kind"] = a.is_positive() ? to_string(is_positive_root(Q, a)) : to_string(RootKind::NotRoot);
  auto orbit = explore_orbit(Q, doc.pair(), depth);
  o["orbit_size"] = orbit.pairs.size();
  o["orbit_closed"] = orbit.closed;
  o["in_Fq"] = to_string(in_Fq(Q, doc.pair(), depth));
  Json rc = {{"kind", "none"}};
  if (auto hit = find_reduced_case(Q, doc.pair(), depth)) {
    const auto& r = hit->reduced;
    rc = {{"kind", to_string(r.kind)}, {"pair", pair_to_json(doc, hit->pair)}};
    if (r.kind == CaseKind::CaseI) rc["m"] = r.m;
    if (r.kind == CaseKind::CaseI || r.kind == CaseKind::CaseIII) {
      rc["h"] = r.h;
      rc["delta"] = io::alpha_to_json(Q, *r.delta);
    }
    if (r.kind == CaseKind::CaseII) {
      rc["beta"] = io::alpha_to_json(Q, *r.beta);
      rc["gamma"] = io::alpha_to_json(Q, *r.gamma);
      rc["i"] = io::detail::vertex_key(Q, r.vertex_i);
      rc["j"] = io::detail::vertex_key(Q, r.vertex_j);
    }
    if (r.kind == CaseKind::CaseIII) {
      rc["j"] = io::detail::vertex_key(Q, r.vertex_i);
      rc["k"] = io::detail::vertex_key(Q, r.vertex_j);
    }
  }
  o["reduced_case"] = rc;
  out << o.dump(2) << '\n';
  return 0;
}

inline Json candidate_json(const numeric::FoundCandidate& c) {
  Json mats = Json::array();
  for (const auto& A : c.A) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index s = 0; s < A.cols(); ++s) row.push_back(Json::array({A(r, s).real(), A(r, s).imag()}));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  return {{"restart", c.restart},
          {"residual", c.residual},
          {"word_rank", c.burnside.word_rank},
          {"min_singular_ratio", c.burnside.min_ratio},
          {"irreducibility", to_string(c.burnside.verdict)},
          {"matrices", mats}};
}

inline int cmd_oracle(const io::Document& doc, const Guards& g, const numeric::SearchOptions& opt, std::ostream& out,
                      std::ostream& err) {
  auto rep = numeric::cross_validate(doc.instance(), opt, g);
  Json o = io::verdict_to_json(doc, rep.verdict, g, opt.seed);
  o["kind"] = "oracle";
  Json orc = {{"agreement", to_string(rep.agreement)},
              {"restarts_used", rep.oracle.restarts_used},
              {"best_residual", std::isfinite(rep.oracle.best_residual) ? Json(rep.oracle.best_residual) : Json()},
              {"irreducible", rep.oracle.irreducible()},
              {"word_rank", rep.oracle.word_rank()},
              {"iters", opt.iters},
              {"tol", opt.tol},
              {"maxlen", opt.maxlen}};
  if (rep.oracle.best) orc["candidate"] = candidate_json(*rep.oracle.best);
  o["oracle"] = orc;
  out << o.dump(2) << '\n';
  if (rep.agreement == numeric::Agreement::Conflict) {
    err << "CONFLICT: irreducible numerical solution for an instance decided unsolvable\n";
    return kConflict;
  }
  return exit_code(rep.verdict.status);
}

inline int cmd_validate(const std::string& text, std::ostream& out) {
  auto vd = io::parse_verdict(text);
  const auto& doc = vd.document;
  if (vd.verdict.alpha != doc.alpha) throw SemanticError("$.alpha: differs from the embedded instance");
  CertificateCheck check = doc.is_pair()
                               ? validate_certificate(doc.quiver, doc.q, doc.alpha, vd.verdict.status, vd.verdict.certificate)
                               : validate_certificate(doc.quiver, *doc.xi, doc.alpha, vd.verdict.status, vd.verdict.certificate);
  if (check.ok && vd.verdict.p_alpha && *vd.verdict.p_alpha != p_value(doc.quiver, doc.alpha))
    check = {false, "p_of_alpha is wrong"};
  if (check.ok && vd.verdict.character && !(*vd.verdict.character == character(doc, doc.alpha)))
    check = {false, "stated character of alpha is wrong"};
  Json o = {{"format", io::kFormatVersion},
            {"kind", "certificate_check"},
            {"status", to_string(vd.verdict.status)},
            {"valid", check.ok},
            {"reason", check.reason}};
  out << o.dump(2) << '\n';
  return check.ok ? 0 : kUnsolvable;
}

}  // namespace detail

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Deligne-Simpson solvability via root systems of star quivers", "dsp"};
  app.require_subcommand(1);
  app.fallthrough();

  Guards guards = Guards::from_environment();
  app.add_option("--max-box", guards.max_box, "largest box volume scanned");
  app.add_option("--max-decomps", guards.max_decomps, "cap on decomposition search steps");

  std::string file;
  auto* decide = app.add_subcommand("decide", "decide solvability and print a verdict document");
  auto* roots = app.add_subcommand("roots", "list the positive roots below alpha");
  auto* reflect = app.add_subcommand("reflect", "apply admissible reflections to [q, alpha]");
  auto* classify_cmd = app.add_subcommand("classify", "quiver type, F_q test and reduced cases");
  auto* oracle = app.add_subcommand("oracle", "numerical search cross-checked against the exact verdict");
  auto* validate = app.add_subcommand("validate-cert", "re-check the certificate in a verdict document");
  for (auto* s : {decide, roots, reflect, classify_cmd, oracle, validate})
    s->add_option("file", file, "input document ('-' for stdin)")->required();

  std::vector<std::string> vertices;
  reflect->add_option("--vertex", vertices, "vertex (\"*\" or \"i,j\"); repeat for a sequence")->required();
  std::size_t depth = 5;
  classify_cmd->add_option("--depth", depth, "reflection depth for orbit exploration");
  numeric::SearchOptions opt;
  oracle->add_option("--restarts", opt.restarts);
  oracle->add_option("--iters", opt.iters);
  oracle->add_option("--tol", opt.tol);
  oracle->add_option("--seed", opt.seed);
  oracle->add_option("--maxlen", opt.maxlen, "word length for the irreducibility test (0: n^2)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    auto text = read_input(file);
    if (validate->parsed()) return detail::cmd_validate(text, out);
    auto doc = io::parse_document(text);
    if (decide->parsed()) return detail::cmd_decide(doc, guards, out);
    if (roots->parsed()) return detail::cmd_roots(doc, guards, out);
    if (reflect->parsed()) return detail::cmd_reflect(doc, vertices, out);
    if (classify_cmd->parsed()) return detail::cmd_classify(doc, depth, out);
    if (oracle->parsed()) return detail::cmd_oracle(doc, guards, opt, out, err);
  } catch (const SyntaxError& e) {
    err << "syntax error: " << e.what() << '\n';
    return kInputError;
  } catch (const SemanticError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInputError;
  } catch (const GuardExceeded& e) {
    err << "guard " << e.guard() << " exceeded: " << e.what() << '\n';
    return kUnknown;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}

}  // namespace dsp::cli
