#include <doctest.h>

#include "oracles.hpp"

using namespace ltlnav;
using namespace ltlnav::ltl;

namespace {

Formula a() { return make_atom("a"); }
Formula b() { return make_atom("b"); }

// Every word over {a, b} of length <= n.
std::vector<Word> all_words(int n) {
  std::vector<Word> out{{}};
  const std::vector<Letter> letters{{}, {"a"}, {"b"}, {"a", "b"}};
  std::size_t begin = 0;
  for (int len = 1; len <= n; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (const Letter& l : letters) {
        Word w = out[i];
        w.push_back(l);
        out.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return out;
}

}  // namespace

TEST_CASE("prefix parsing") {
  CHECK(parse_prefix("& a b") == make_and(a(), b()));
  CHECK(parse_prefix("p") == make_atom("p"));
  CHECK(parse_prefix("F & object_1 X object_2") ==
        make_eventually(make_and(make_atom("object_1"), make_next(make_atom("object_2")))));
  CHECK(parse_prefix("  =>  a   ! b ") == make_imply(a(), make_not(b())));
  CHECK(parse_prefix("U true false") == make_until(make_true(), make_false()));
  CHECK(parse_prefix("R a N b") == make_release(a(), make_weak_next(b())));
}

TEST_CASE("infix parsing and precedence") {
  CHECK(parse_infix("(a) & (b)") == make_and(a(), b()));
  CHECK(parse_infix("F(a) & G(!(b))") == make_and(make_eventually(a()), make_always(make_not(b()))));
  CHECK(parse_infix("a") == a());
  CHECK(parse_infix("a | b & c") == make_or(a(), make_and(b(), make_atom("c"))));
  CHECK(parse_infix("a => b => c") == make_imply(a(), make_imply(b(), make_atom("c"))));
  CHECK(parse_infix("a U b U c") == make_until(make_until(a(), b()), make_atom("c")));
  CHECK(parse_infix("!a U b") == make_until(make_not(a()), b()));
  CHECK(parse_infix("F a & b") == make_and(make_eventually(a()), b()));
}

TEST_CASE("printing") {
  CHECK(to_prefix(make_and(a(), b())) == "& a b");
  CHECK(to_infix(make_and(a(), b())) == "(a) & (b)");
  CHECK(to_prefix(make_eventually(a())) == "F a");
  CHECK(to_prefix(make_true()) == "true");
}

TEST_CASE("parse errors carry a kind and an offset") {
  auto kind_of = [](auto fn) {
    try {
      fn();
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("no error");
    return ParseError::Kind::UnexpectedToken;
  };
  CHECK(kind_of([] { parse_prefix("& a"); }) == ParseError::Kind::MissingOperand);
  CHECK(kind_of([] { parse_prefix(""); }) == ParseError::Kind::MissingOperand);
  CHECK(kind_of([] { parse_prefix("a b"); }) == ParseError::Kind::TrailingInput);
  CHECK(kind_of([] { parse_infix("(a & b"); }) == ParseError::Kind::UnbalancedParens);
  CHECK(kind_of([] { parse_infix("a & b)"); }) == ParseError::Kind::UnbalancedParens);
  CHECK(kind_of([] { parse_infix("a & "); }) == ParseError::Kind::MissingOperand);
  CHECK(kind_of([] { parse_infix("a $ b"); }) == ParseError::Kind::UnexpectedToken);
  try {
    parse_prefix("& a b c");
  } catch (const ParseError& e) {
    CHECK(e.position() == 6);
  }
}

TEST_CASE("proposition names") {
  CHECK(is_valid_proposition("object_12"));
  CHECK(is_valid_proposition("teddy_bear"));
  CHECK_FALSE(is_valid_proposition(""));
  CHECK_FALSE(is_valid_proposition("F"));
  CHECK_FALSE(is_valid_proposition("true"));
  CHECK_FALSE(is_valid_proposition("1abc"));
  CHECK_FALSE(is_valid_proposition("a b"));
}

TEST_CASE("round trip of random formulas in both syntaxes") {
  oracle::FormulaGen gen(11, {"a", "b", "object_3"});
  for (int i = 0; i < 2000; ++i) {
    const Formula f = gen(5);
    CHECK(parse_prefix(to_prefix(f)) == f);
    CHECK(parse_infix(to_infix(f)) == f);
  }
}

TEST_CASE("negation normal form") {
  CHECK(nnf(make_not(make_and(a(), b()))) == make_or(make_not(a()), make_not(b())));
  CHECK(nnf(make_not(make_eventually(a()))) == make_always(make_not(a())));
  CHECK(nnf(make_imply(a(), b())) == make_or(make_not(a()), b()));
  CHECK(nnf(make_not(make_next(a()))) == make_weak_next(make_not(a())));

  const auto words = all_words(4);
  oracle::FormulaGen gen(12, {"a", "b"});
  for (int i = 0; i < 300; ++i) {
    const Formula f = gen(4);
    const Formula g = nnf(f);
    // only atoms are negated, no implications
    std::function<bool(const Formula&)> ok = [&](const Formula& h) {
      if (h.op() == Op::Imply) return false;
      if (h.op() == Op::Not) return h.lhs().op() == Op::Atom;
      if (h.op() == Op::Atom || h.op() == Op::True || h.op() == Op::False) return true;
      return ok(h.lhs()) && (is_unary(h.op()) || ok(h.rhs()));
    };
    CHECK(ok(g));
    for (const Word& w : words) REQUIRE(oracle::holds(f, w) == oracle::holds(g, w));
  }
}

TEST_CASE("syntactic co-safety") {
  CHECK(is_syntactically_cosafe(make_eventually(make_and(a(), make_eventually(b())))));
  CHECK_FALSE(is_syntactically_cosafe(make_always(make_not(a()))));
  CHECK(is_syntactically_cosafe(make_until(make_not(a()), b())));
  CHECK(is_syntactically_cosafe(make_not(make_always(a()))));
  CHECK_FALSE(is_syntactically_cosafe(make_not(make_eventually(a()))));
}

TEST_CASE("finite-trace semantics") {
  CHECK(eval_finite(make_eventually(b()), {{"a"}, {"b"}}));
  CHECK_FALSE(eval_finite(make_always(make_not(a())), {{"a"}}));
  CHECK(eval_finite(make_until(a(), b()), {{"a"}, {"a"}, {"b"}}));
  CHECK_FALSE(eval_finite(make_next(a()), {{"a"}}));
  CHECK(eval_finite(make_weak_next(a()), {{"a"}}));

  // empty word
  CHECK(holds_on_empty(make_true()));
  CHECK(holds_on_empty(make_always(a())));
  CHECK(holds_on_empty(make_release(a(), b())));
  CHECK(holds_on_empty(make_weak_next(a())));
  CHECK(holds_on_empty(make_not(a())));
  CHECK_FALSE(holds_on_empty(a()));
  CHECK_FALSE(holds_on_empty(make_eventually(a())));
  CHECK_FALSE(holds_on_empty(make_until(a(), b())));
  CHECK_FALSE(holds_on_empty(make_next(a())));
}

TEST_CASE("eval_finite and the bitmask evaluator agree with the reference semantics") {
  const auto words = all_words(4);
  oracle::FormulaGen gen(13, {"a", "b"});
  for (int i = 0; i < 400; ++i) {
    const Formula f = gen(4);
    const FiniteEvaluator fast(f, {"a", "b"});
    for (const Word& w : words) {
      const bool want = oracle::holds(f, w);
      INFO(to_prefix(f), " on word of length ", w.size());
      REQUIRE(eval_finite(f, w) == want);
      std::vector<std::uint32_t> masks;
      for (const Letter& l : w) masks.push_back((l.count("a") ? 1u : 0u) | (l.count("b") ? 2u : 0u));
      REQUIRE(fast(masks) == want);
      REQUIRE(fast(w) == want);
    }
  }
}

TEST_CASE("atomic propositions and renaming") {
  CHECK(atomic_props(make_and(b(), a())) == std::vector<std::string>{"a", "b"});
  CHECK(atomic_props(make_true()).empty());
  CHECK(atomic_props(make_eventually(make_or(a(), a()))) == std::vector<std::string>{"a"});
  const Formula renamed = rename_props(make_until(a(), b()), [](const std::string& p) {
    return p == "a" ? std::string("chair") : std::string();
  });
  CHECK(renamed == make_until(make_atom("chair"), b()));
}

TEST_CASE("structural identity") {
  CHECK(make_and(a(), b()) == parse_prefix("& a b"));
  CHECK_FALSE(make_and(a(), b()) == make_and(b(), a()));
  CHECK(make_and(a(), b()).hash() == parse_prefix("& a b").hash());
  CHECK(make_and(a(), make_not(b())).size() == 4);
  CHECK(Formula() == make_true());
}
