#include <doctest.h>

#include "support.hpp"
#include "vecscope/error.hpp"
#include "vecscope/expr.hpp"

using namespace vecscope;
using K = Expr::Kind;

namespace {

Expr w(const char* t) { return Expr::word(t); }

std::size_t parse_offset(std::string_view text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected ParseError for " << text);
  return 0;
}

// Random grammar-valid tree. Tokens avoid the operator characters; phrases
// carry inner spaces.
Expr random_expr(testing::Gen& g, int depth) {
  static const char* kWords[] = {"king", "man", "woman", "a_b", "x1", "über", "c#x", "q.e"};
  if (depth == 0 || g.coin(0.3)) {
    if (g.coin(0.2)) return Expr::phrase(std::string(kWords[g.index(0, 7)]) + " " + kWords[g.index(0, 7)]);
    return Expr::word(kWords[g.index(0, 7)]);
  }
  static const K kOps[] = {K::kAdd, K::kSub, K::kReject};
  return Expr::binary(kOps[g.index(0, 2)], random_expr(g, depth - 1), random_expr(g, depth - 1));
}

// Same tree printed with minimal parentheses, so the parser has to apply
// precedence and associativity itself.
int prec(const Expr& e) {
  switch (e.kind()) {
    case K::kReject: return 1;
    case K::kAdd:
    case K::kSub: return 2;
    default: return 3;
  }
}

std::string minimal(const Expr& e) {
  if (e.kind() == K::kWord) return e.text();
  if (e.kind() == K::kPhrase) return "\"" + e.text() + "\"";
  const int p = prec(e);
  std::string l = minimal(e.lhs());
  std::string r = minimal(e.rhs());
  if (prec(e.lhs()) < p) l = "(" + l + ")";
  if (prec(e.rhs()) <= p) r = "(" + r + ")";
  const char* op = e.kind() == K::kAdd ? " + " : e.kind() == K::kSub ? " - " : " | ";
  return l + op + r;
}

}  // namespace

TEST_CASE("parse examples") {
  CHECK(parse("king - man + woman") ==
        Expr::binary(K::kAdd, Expr::binary(K::kSub, w("king"), w("man")), w("woman")));
  CHECK(parse("man | (queen - king)") ==
        Expr::binary(K::kReject, w("man"), Expr::binary(K::kSub, w("queen"), w("king"))));
  // '|' binds loosest
  CHECK(parse("a | b - c") == parse("a | (b - c)"));
  CHECK(parse("a | b | c") == parse("(a | b) | c"));
  CHECK(parse("a-b") == Expr::binary(K::kSub, w("a"), w("b")));
  CHECK(parse("\"new york\" - city") ==
        Expr::binary(K::kSub, Expr::phrase("new york"), w("city")));
  CHECK(parse("  ((king))  ") == w("king"));
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK(parse_offset("king -") == 6);
  CHECK(parse_offset("") == 0);
  CHECK(parse_offset("   ") == 3);
  CHECK(parse_offset("(king") == 5);
  CHECK_THROWS_WITH(parse("(king"), doctest::Contains("'(' at offset 0"));
  CHECK(parse_offset("king)") == 4);
  CHECK(parse_offset("()") == 1);
  CHECK(parse_offset("\"open") == 0);
  CHECK(parse_offset("\"\"") == 0);
  CHECK(parse_offset("king queen") == 5);
  CHECK(parse_offset("+ king") == 0);
  CHECK(parse_offset("a | | b") == 4);
}

TEST_CASE("render is fully parenthesised") {
  CHECK(render(parse("king - man + woman")) == "((king - man) + woman)");
  CHECK(render(parse("man | (queen - king)")) == "(man | (queen - king))");
  CHECK(render(parse("\"new york\"")) == "\"new york\"");
}

TEST_CASE("property: parser round trip on random trees") {
  testing::Gen gen(3);
  for (int i = 0; i < 2000; ++i) {
    const Expr tree = random_expr(gen, static_cast<int>(gen.index(0, 5)));
    const std::string full = render(tree);
    CHECK_MESSAGE(parse(full) == tree, full);
    CHECK_MESSAGE(parse(minimal(tree)) == tree, minimal(tree));
    CHECK(parse(render(parse(full))) == parse(full));
  }
}

TEST_CASE("leaf tokens") {
  CHECK(leaf_tokens(parse("king - man + king")) == std::vector<std::string>{"king", "man"});
  CHECK(leaf_tokens(parse("\"new york\" | york")) == std::vector<std::string>{"new", "york"});
}

TEST_CASE("evaluate examples") {
  auto toy = testing::toy_store();
  auto diff = evaluate(parse("queen - king"), toy);
  CHECK(diff.name() == "(queen - king)");
  CHECK(diff.derivation() == std::optional<std::string>("(queen - king)"));
  CHECK(testing::all_close(diff.vector(), {0.0, 0.57}, 1e-12));

  auto orth = evaluate(parse("man | (queen - king)"), toy);
  CHECK(orth.name() == "(man | (queen - king))");
  CHECK(testing::all_close(orth.vector(), {0.5, 0.0}, 1e-12));

  CHECK(evaluate(parse("king - man + woman"), toy).name() == "((king - man) + woman)");
  CHECK_THROWS_AS(evaluate(parse("man | (man - man)"), toy), ZeroAxisError);
  try {
    evaluate(parse("emperor - man + tsar"), toy);
    FAIL("expected OovError");
  } catch (const OovError& e) {
    CHECK(e.missing() == std::vector<std::string>{"emperor", "tsar"});
  }
  auto phrase = evaluate(parse("\"man woman\" - man"), toy);
  CHECK(testing::all_close(phrase.vector(), {0.5, 0.6}, 1e-15));
}

TEST_CASE("property: derivations reparse to the same vector") {
  testing::Gen gen(5);
  auto store = VectorStore("s", 3,
                           {"king", "man", "woman", "a_b", "x1", "über", "c#x", "q.e"},
                           std::vector<double>{1, 2, 3, -1, 0.5, 2, 0.3, 0.3, 0.1, 4, 1, 1,
                                               0.2, -2, 1, 7, 7, 0, 1, 0, 1, -3, 0.5, 0.25});
  int evaluated = 0;
  for (int i = 0; i < 500; ++i) {
    const Expr tree = random_expr(gen, 4);
    try {
      const Embedding e = evaluate(tree, store);
      const Embedding again = evaluate(parse(e.expression()), store);
      for (std::size_t d = 0; d < e.dim(); ++d) CHECK(testing::close(again.vector()[d], e.vector()[d], 1e-12));
      ++evaluated;
    } catch (const ZeroAxisError&) {
    }
  }
  CHECK(evaluated > 300);
}

TEST_CASE("reject and projection coefficient") {
  auto toy = testing::toy_store();
  const Embedding man = lookup(toy, "man"), woman = lookup(toy, "woman");
  const Embedding qk = evaluate(parse("queen - king"), toy);
  auto r = reject(man, qk);
  CHECK(r.name() == "(man | (queen - king))");
  CHECK(testing::all_close(r.vector(), {0.5, 0.0}, 1e-12));

  auto self = reject(man, man);
  CHECK(testing::all_close(self.vector(), {0.0, 0.0}, 1e-15));

  const Embedding a("a", {2.0, 0.0}), b("b", {0.0, 3.0});
  CHECK(reject(a, b).vector() == a.vector());
  CHECK(projection_coefficient(a, b) == 0.0);
  CHECK(projection_coefficient(man, man) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(projection_coefficient(man, woman) == doctest::Approx(0.31 / 0.61).epsilon(1e-14));

  const Embedding zero("z", {0.0, 0.0});
  CHECK_THROWS_AS(reject(a, zero), ZeroAxisError);
  CHECK_THROWS_AS(projection_coefficient(a, zero), ZeroAxisError);
  CHECK_THROWS_AS(reject(a, Embedding("c", {1.0, 2.0, 3.0})), DimensionError);
}

TEST_CASE("property: rejection identities") {
  testing::Gen gen(13);
  for (int i = 0; i < 300; ++i) {
    const std::size_t dim = gen.index(2, 64);
    const Embedding a("a", gen.vector(dim)), b("b", gen.vector(dim));
    const auto r = reject(a, b);
    const double na = norm(a.vector().span()), nb = norm(b.vector().span());
    CHECK(std::fabs(dot(r.vector().span(), b.vector().span())) <= 1e-9 * na * nb);
    const auto rr = reject(r, b);
    const double c = projection_coefficient(a, b);
    for (std::size_t d = 0; d < dim; ++d) {
      CHECK(testing::close(rr.vector()[d], r.vector()[d], 1e-9));
      CHECK(testing::close(r.vector()[d] + c * b.vector()[d], a.vector()[d], 1e-12 * std::max(1.0, na)));
    }
  }
}

TEST_CASE("set_apply") {
  auto toy = testing::toy_store();
  auto set = get_set(toy, std::vector<std::string>{"man", "woman"});
  auto axis = evaluate(parse("man - woman"), toy);
  auto rejected = set_apply(set, SetOp::kReject, axis);
  CHECK(rejected[0].name() == "(man | (man - woman))");
  for (const auto& e : rejected) CHECK(std::fabs(dot(e.vector().span(), axis.vector().span())) < 1e-12);

  auto man = lookup(toy, "man");
  auto self = set_apply(get_set(toy, std::vector<std::string>{"man"}), SetOp::kSub, man);
  CHECK(self[0].vector() == Vector{0.0, 0.0});

  auto there = set_apply(set_apply(set, SetOp::kAdd, axis), SetOp::kSub, axis);
  for (std::size_t i = 0; i < set.size(); ++i) {
    CHECK(testing::all_close(there[i].vector(), set[i].vector().components(), 1e-12));
  }
  CHECK_THROWS_AS(set_apply(set, SetOp::kReject, Embedding("z", {0.0, 0.0})), ZeroAxisError);
  CHECK_THROWS_AS(set_apply(set, SetOp::kAdd, Embedding("z", {0.0, 0.0, 1.0})), DimensionError);
}

TEST_CASE("average") {
  auto toy = testing::toy_store();
  auto avg = average(get_set(toy, std::vector<std::string>{"man", "woman"}));
  CHECK(avg.name() == "average(2)");
  CHECK(testing::all_close(avg.vector(), {0.5, 0.35}, 1e-15));
  auto one = average(get_set(toy, std::vector<std::string>{"king"}));
  CHECK(one.vector() == lookup(toy, "king").vector());
  CHECK(one.name() == "average(1)");
  CHECK_THROWS_AS(average(EmbeddingSet{}), InvalidArgument);
}

TEST_CASE("property: + and - commute and associate on unit-scale vectors") {
  testing::Gen gen(17);
  for (int i = 0; i < 200; ++i) {
    const std::size_t dim = gen.index(1, 20);
    Vector a = Vector::zeros(dim), b = a, c = a;
    for (std::size_t d = 0; d < dim; ++d) {
      a[d] = gen.uniform(-1, 1);
      b[d] = gen.uniform(-1, 1);
      c[d] = gen.uniform(-1, 1);
    }
    CHECK((a + b) == (b + a));
    const Vector l = (a + b) + c, r = a + (b + c);
    const Vector s1 = (a - b) + c, s2 = a + (c - b);
    for (std::size_t d = 0; d < dim; ++d) {
      CHECK(testing::close(l[d], r[d], 1e-12));
      CHECK(testing::close(s1[d], s2[d], 1e-12));
    }
  }
}
