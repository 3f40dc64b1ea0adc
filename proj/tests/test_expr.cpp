#include <catch2/catch_amalgamated.hpp>

#include "mwl/expr.hpp"
#include "mwl/gallery.hpp"

#include "dsl_sources.hpp"
#include "oracles.hpp"

using namespace mwl;
using Catch::Approx;

namespace {
AstPtr must_parse(const std::string& src) {
  ParseResult r = parse(src);
  REQUIRE(std::holds_alternative<AstPtr>(r));
  return std::get<AstPtr>(r);
}
}  // namespace

TEST_CASE("cos(u1)*cos(u2) parses to Mul of calls", "[expr]") {
  AstPtr a = must_parse("cos(u1)*cos(u2)");
  REQUIRE(a->kind == NodeKind::Binary);
  CHECK(a->bop == BinaryOp::Mul);
  REQUIRE(a->children[0]->kind == NodeKind::Call);
  CHECK(a->children[0]->name == "cos");
  CHECK(a->children[0]->children[0]->kind == NodeKind::Variable);
  CHECK(a->children[0]->children[0]->var_index == 1);
  CHECK(a->children[1]->children[0]->var_index == 2);
}

TEST_CASE("unary minus binds looser than ^", "[expr]") {
  AstPtr a = must_parse("u1 + -u2^2");
  REQUIRE(a->kind == NodeKind::Binary);
  CHECK(a->bop == BinaryOp::Add);
  const AstPtr& rhs = a->children[1];
  REQUIRE(rhs->kind == NodeKind::Unary);
  REQUIRE(rhs->children[0]->kind == NodeKind::Binary);
  CHECK(rhs->children[0]->bop == BinaryOp::Pow);
  Vec p(2);
  p << 0.0, 3.0;
  CHECK(eval_value(a, p) == Approx(-9.0));
}

TEST_CASE("^ is right-associative", "[expr]") {
  AstPtr a = must_parse("2^3^2");
  Vec p(1);
  p << 0.0;
  CHECK(eval_value(a, p) == Approx(512.0));
}

TEST_CASE("unterminated call reports the offset of the missing paren",
          "[expr]") {
  ParseResult r = parse("sin(u1");
  REQUIRE(std::holds_alternative<ParseError>(r));
  const ParseError& e = std::get<ParseError>(r);
  CHECK(e.offset == 6);  // one past 'u1', where ')' was expected
  CHECK(e.expected == "')'");
  CHECK(e.offset <= std::string("sin(u1").size());
}

TEST_CASE("garbage after a full expression is an error", "[expr]") {
  ParseResult r = parse("u1 + 1 7");
  REQUIRE(std::holds_alternative<ParseError>(r));
  CHECK(std::get<ParseError>(r).expected == "end of input");
}

TEST_CASE("number forms", "[expr]") {
  Vec p(1);
  p << 0.0;
  CHECK(eval_value(must_parse("1.5e-3"), p) == Approx(1.5e-3));
  CHECK(eval_value(must_parse("2E+2"), p) == Approx(200.0));
  CHECK(eval_value(must_parse(".5"), p) == Approx(0.5));
  CHECK(eval_value(must_parse("pi"), p) == Approx(M_PI));
  CHECK(eval_value(must_parse("e"), p) == Approx(M_E));
  CHECK(std::holds_alternative<ParseError>(parse("0x12")));
}

TEST_CASE("validate rejects out-of-range variables", "[expr]") {
  auto issues = validate(must_parse("u3"), 2);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].message == "u3 exceeds chart dimension 2");
}

TEST_CASE("validate rejects bad arity and unknown names", "[expr]") {
  auto arity = validate(must_parse("sin(u1,u2)"), 3);
  REQUIRE(arity.size() == 1);
  CHECK(arity[0].message.find("expects 1 argument") != std::string::npos);

  CHECK(validate(must_parse("cos(u1)*u2"), 2).empty());
  CHECK_FALSE(validate(must_parse("foo(u1)"), 2).empty());
  CHECK_FALSE(validate(must_parse("bogus + 1"), 2).empty());
  CHECK(validate(must_parse("pow(u1, 2)"), 1).empty());
}

TEST_CASE("eval_jet basics", "[expr]") {
  Vec p(2);
  p << 2.0, 5.0;
  Jet j = eval_jet(must_parse("u1*u2"), p);
  CHECK(j.value == Approx(10.0));
  CHECK(j.grad[0] == Approx(5.0));
  CHECK(j.grad[1] == Approx(2.0));
  CHECK(j.hess(0, 1) == Approx(1.0));

  Vec q(1);
  q << 4.0;
  Jet s = eval_jet(must_parse("sqrt(u1)"), q);
  CHECK(s.value == Approx(2.0));
  CHECK(s.grad[0] == Approx(0.25));
  CHECK(s.hess(0, 0) == Approx(-1.0 / 32.0));

  Vec z(1);
  z << 0.0;
  CHECK_THROWS_AS(eval_jet(must_parse("log(u1)"), z), EvalError);
}

TEST_CASE("evaluation errors carry the offending sub-expression", "[expr]") {
  Vec z(1);
  z << -1.0;
  const std::string src = "u1 + sqrt(u1)";
  try {
    eval_jet(must_parse(src), z, src);
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find("sqrt(u1)") != std::string::npos);
  }
}

TEST_CASE("pretty-print round-trips all gallery DSL sources", "[expr]") {
  for (const auto& entry : testdsl::gallery_dsl_sources()) {
    for (const auto& src : entry.components) {
      AstPtr a = must_parse(src);
      AstPtr b = must_parse(pretty_print(a));
      CHECK(structurally_equal(a, b));
    }
  }
}

TEST_CASE("DSL evaluation equals the hand-coded gallery jets", "[expr][gallery]") {
  std::mt19937_64 rng(2024);
  struct Pair {
    std::string dsl_name;
    Immersion im;
  };
  std::vector<Pair> pairs;
  pairs.push_back({"veronese_s4", gallery_get("veronese_s4")});
  pairs.push_back({"clifford_equilateral", gallery_get("clifford")});
  pairs.push_back(
      {"clifford_s3",
       gallery_get("clifford", {{"r", "0.7071067811865476,0.7071067811865476"},
                                {"theta", "0,1.5707963267948966"}})});
  pairs.push_back({"plane", gallery_get("plane")});
  pairs.push_back({"hopf_veronese_2", gallery_get("hopf_veronese")});
  pairs.push_back({"cone_clifford_equilateral",
                   gallery_get("cone_of", {{"base", "clifford"}})});

  auto sources = testdsl::gallery_dsl_sources();
  for (const auto& pr : pairs) {
    const auto it = std::find_if(
        sources.begin(), sources.end(),
        [&](const testdsl::DslImmersion& d) { return d.name == pr.dsl_name; });
    REQUIRE(it != sources.end());
    Immersion dsl = make_dsl_immersion(it->chart_dim, it->ambient,
                                       it->components);
    for (int k = 0; k < 20; ++k) {
      Vec u = oracle::random_point_in(pr.im.sample_region.lo,
                                      pr.im.sample_region.hi, rng);
      JetVec a = dsl.jets(u);
      JetVec b = pr.im.jets(u);
      REQUIRE(a.size() == b.size());
      for (size_t c = 0; c < a.size(); ++c) {
        CHECK(a[c].value == Approx(b[c].value).margin(1e-12));
        CHECK((a[c].grad - b[c].grad).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((a[c].hess - b[c].hess).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}
