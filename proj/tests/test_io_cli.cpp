#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dsp/certificate.hpp"
#include "dsp/cli.hpp"
#include "dsp/io.hpp"

using namespace dsp;

namespace {

std::string corpus(const std::string& name) { return std::string(DSP_CORPUS_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

/// Writes text to a temporary file and returns its path.
std::string temp_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("dsp_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST(Parse, SyntaxErrorHasPosition) {
  try {
    io::parse_document(slurp(corpus("bad/syntax.json")));
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_GE(e.column(), 1u);
  }
}

TEST(Parse, BadValuePointsIntoTheString) {
  try {
    io::parse_document(slurp(corpus("bad/bad_value.json")));
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 4u);
    // The value "3*zeta(1/" starts after column 20 on its line.
    EXPECT_GT(e.column(), 20u);
    EXPECT_NE(e.message().find("$.xi[0][1]"), std::string::npos) << e.message();
  }
}

TEST(Parse, SemanticErrors) {
  EXPECT_THROW(io::parse_document(slurp(corpus("bad/short_arm.json"))), SemanticError);
  EXPECT_THROW(io::parse_document(slurp(corpus("bad/zero_value.json"))), SemanticError);
  EXPECT_THROW(io::parse_document(slurp(corpus("bad/not_strict.json"))), SemanticError);
  EXPECT_THROW(io::parse_document(R"({"format": 2, "weights": [1], "xi": [["1"]], "alpha": {"*": 1}})"), SemanticError);
  EXPECT_THROW(io::parse_document(R"({"format": 1, "weights": [1], "alpha": {"*": 1}})"), SemanticError);
  try {
    io::parse_document(slurp(corpus("bad/short_arm.json")));
  } catch (const SemanticError& e) {
    EXPECT_NE(std::string(e.what()).find("$.xi[0]"), std::string::npos) << e.what();
  }
}

TEST(Parse, RoundTrip) {
  for (const char* name : {"n1_solvable.json", "case1_two_delta.json", "hypergeometric.json", "hypergeometric_sym.json",
                           "character_not_one.json", "not_a_root.json", "diagonal_matrices.json",
                           "e6_delta_generic.json", "pair_case1.json"}) {
    auto doc = io::parse_document(slurp(corpus(name)));
    auto printed = io::print_document(doc);
    auto again = io::parse_document(printed);
    EXPECT_EQ(io::print_document(again), printed) << name;
    EXPECT_EQ(again.alpha, doc.alpha) << name;
    EXPECT_EQ(again.q, doc.q) << name;
  }
}

TEST(Parse, AlphaFromMatrices) {
  auto doc = io::parse_document(slurp(corpus("diagonal_matrices.json")));
  EXPECT_TRUE(doc.alpha_from_matrices);
  EXPECT_EQ(doc.alpha, (LatticeVector{2, 1, 1}));

  // An explicit alpha that disagrees with the matrices is rejected.
  auto text = slurp(corpus("diagonal_matrices.json"));
  text.replace(text.find("\"from_matrices\""), 15, R"({"*": 2, "1,1": 1, "2,1": 0})");
  EXPECT_THROW(io::parse_document(text), SemanticError);
}

TEST(Parse, PairDocument) {
  auto doc = io::parse_document(slurp(corpus("pair_case1.json")));
  EXPECT_TRUE(doc.is_pair());
  EXPECT_THROW(doc.instance(), InputError);
  EXPECT_TRUE(doc.q[0].is_one());
}

TEST(Verdict, RoundTripAndRevalidate) {
  for (const char* name : {"case1_two_delta.json", "character_not_one.json", "not_a_root.json", "hypergeometric.json"}) {
    auto doc = io::parse_document(slurp(corpus(name)));
    auto v = decide_dsp(doc.instance());
    auto text = io::verdict_to_json(doc, v, Guards{}).dump(2);
    auto back = io::parse_verdict(text);
    EXPECT_EQ(back.verdict.status, v.status) << name;
    EXPECT_EQ(io::certificate_to_json(doc.quiver, back.verdict.certificate), io::certificate_to_json(doc.quiver, v.certificate)) << name;
    EXPECT_EQ(back.verdict.alpha, v.alpha) << name;
    auto check = validate_certificate(back.document.quiver, *back.document.xi, back.document.alpha,
                                      back.verdict.status, back.verdict.certificate);
    EXPECT_TRUE(check.ok) << name << ": " << check.reason;
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"decide", corpus("n1_solvable.json")}).code, cli::kSolvable);
  EXPECT_EQ(run({"decide", corpus("hypergeometric.json")}).code, cli::kSolvable);
  EXPECT_EQ(run({"decide", corpus("case1_two_delta.json")}).code, cli::kUnsolvable);
  EXPECT_EQ(run({"decide", corpus("not_a_root.json")}).code, cli::kUnsolvable);
  EXPECT_EQ(run({"--max-box", "10", "decide", corpus("case1_two_delta.json")}).code, cli::kUnknown);
  EXPECT_EQ(run({"decide", corpus("bad/syntax.json")}).code, cli::kInputError);
  EXPECT_EQ(run({"decide", corpus("no_such_file.json")}).code, cli::kInputError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kInputError);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DecideThenValidate) {
  auto r = run({"decide", corpus("case1_two_delta.json")});
  ASSERT_EQ(r.code, cli::kUnsolvable);
  auto path = temp_file("verdict.json", r.out);
  auto v = run({"validate-cert", path});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  EXPECT_NE(v.out.find("\"valid\": true"), std::string::npos);

  // Dropping a part of the decomposition breaks the certificate.
  auto j = io::Json::parse(r.out);
  j["certificate"]["parts"].erase(0);
  auto bad = temp_file("verdict_bad.json", j.dump(2));
  EXPECT_EQ(run({"validate-cert", bad}).code, cli::kUnsolvable);
}

TEST(Cli, ReflectAndClassify) {
  auto r = run({"reflect", corpus("pair_case1.json"), "--vertex", "*"});
  // q_* = 1 makes * inadmissible.
  EXPECT_EQ(r.code, cli::kInputError);

  auto c = run({"classify", corpus("case1_two_delta.json")});
  EXPECT_EQ(c.code, 0) << c.err;
  auto j = io::Json::parse(c.out);
  EXPECT_EQ(j["quiver"]["kind"], "extended_dynkin");

  auto roots = run({"roots", corpus("hypergeometric.json")});
  EXPECT_EQ(roots.code, 0);
  EXPECT_EQ(io::Json::parse(roots.out)["roots"].size(), 12u);
}

TEST(Cli, OracleOnHypergeometric) {
  auto r = run({"oracle", corpus("hypergeometric.json"), "--restarts", "20", "--seed", "3"});
  EXPECT_EQ(r.code, cli::kSolvable) << r.err;
  auto j = io::Json::parse(r.out);
  EXPECT_EQ(j["oracle"]["agreement"], "exact_solvable+found");
}
