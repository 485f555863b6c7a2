#include <doctest.h>

#include "oracles.hpp"

using namespace ltlnav;
using namespace ltlnav::ltl;

namespace {

Formula a() { return make_atom("a"); }
Formula b() { return make_atom("b"); }

const std::vector<Letter> kAB{{}, {"a"}, {"b"}, {"a", "b"}};

void words_upto(int n, const std::function<void(const Word&)>& fn) {
  Word w;
  std::function<void()> rec = [&] {
    fn(w);
    if (static_cast<int>(w.size()) == n) return;
    for (const Letter& l : kAB) {
      w.push_back(l);
      rec();
      w.pop_back();
    }
  };
  rec();
}

}  // namespace

TEST_CASE("progression examples") {
  CHECK(progress(a(), {"a"}) == make_true());
  CHECK(progress(make_eventually(a()), {}) == make_eventually(a()));
  CHECK(progress(make_until(a(), b()), {"a"}) == make_until(a(), b()));
  CHECK(progress(make_until(a(), b()), {"b"}) == make_true());
  CHECK(progress(make_until(a(), b()), {}) == make_false());
  CHECK_THROWS_AS(progress(make_not(make_eventually(a())), {}), std::invalid_argument);
}

TEST_CASE("progression preserves meaning on every short suffix") {
  oracle::FormulaGen gen(21, {"a", "b"});
  for (int i = 0; i < 200; ++i) {
    const Formula f = normalize(gen(4));
    for (const Letter& l : kAB) {
      const Formula r = progress(f, l);
      words_upto(4, [&](const Word& w) {
        Word lw{l};
        lw.insert(lw.end(), w.begin(), w.end());
        REQUIRE(oracle::holds(f, lw) == oracle::holds(r, w));
      });
    }
  }
}

TEST_CASE("normalization is meaning-preserving and idempotent") {
  oracle::FormulaGen gen(22, {"a", "b"});
  for (int i = 0; i < 200; ++i) {
    const Formula f = gen(4);
    const Formula n = normalize(f);
    CHECK(normalize(n) == n);
    words_upto(4, [&](const Word& w) { REQUIRE(oracle::holds(f, w) == oracle::holds(n, w)); });
  }
  // order and duplicates do not matter
  CHECK(normalize(make_and(a(), b())) == normalize(make_and(b(), make_and(a(), a()))));
  CHECK(normalize(make_and(a(), make_not(a()))) == make_false());
}

TEST_CASE("small automata") {
  const TaskAutomaton fa = compile(make_eventually(a()), {{}, {"a"}});
  CHECK(fa.num_states() == 2);
  CHECK_FALSE(fa.is_accepting(TaskAutomaton::kInitial));
  const StateId done = fa.step(TaskAutomaton::kInitial, Letter{"a"});
  CHECK(fa.is_accepting(done));
  CHECK(fa.step(done, Letter{}) == done);
  CHECK(fa.step(TaskAutomaton::kInitial, Letter{}) == TaskAutomaton::kInitial);

  const TaskAutomaton t = compile(make_true(), {{}, {"a"}});
  CHECK(t.num_states() == 1);
  CHECK(t.is_accepting(0));

  const TaskAutomaton ga = compile(make_always(make_not(a())), {{}, {"a"}});
  CHECK(ga.is_accepting(0));
  CHECK(ga.step(0, Letter{}) == 0);
  const StateId sink = ga.step(0, Letter{"a"});
  CHECK(sink != 0);
  CHECK_FALSE(ga.is_accepting(sink));
  CHECK(ga.step(sink, Letter{}) == sink);
  CHECK(ga.step(sink, Letter{"a"}) == sink);
}

TEST_CASE("acceptance of words") {
  const TaskAutomaton fa = compile(make_eventually(a()));
  CHECK(accepts(fa, Word{{}, {"a"}}));
  CHECK_FALSE(accepts(fa, Word{}));
  CHECK(accepts(compile(make_always(make_not(a()))), Word{{}}));
}

TEST_CASE("automaton agrees with the semantics over random formulas") {
  oracle::FormulaGen gen(23, {"a", "b"});
  for (int i = 0; i < 150; ++i) {
    const Formula f = gen(4);
    const TaskAutomaton aut = compile(f, kAB);
    words_upto(5, [&](const Word& w) { REQUIRE(accepts(aut, w) == oracle::holds(f, w)); });
  }
}

TEST_CASE("letters outside the formula are projected away") {
  const TaskAutomaton fa = compile(make_eventually(a()), {{"a", "chair"}, {"chair"}});
  CHECK(fa.propositions() == std::vector<std::string>{"a"});
  CHECK(fa.num_letters() == 2);
  CHECK(fa.letter_id(Letter{"chair"}) == fa.letter_id(Letter{}));
  CHECK(fa.project(Letter{"a", "chair"}) == Letter{"a"});
  const TaskAutomaton only_empty = compile(make_eventually(a()), std::vector<Letter>{});
  CHECK_FALSE(only_empty.has_letter(Letter{"a"}));
  CHECK_THROWS_AS(only_empty.letter_id(Letter{"a"}), std::out_of_range);
}

TEST_CASE("bitmask letter order") {
  const TaskAutomaton aut = compile(make_and(make_eventually(a()), make_eventually(b())));
  REQUIRE(aut.num_letters() == 4);
  CHECK(aut.letter(0) == Letter{});
  CHECK(aut.letter(1) == Letter{"a"});
  CHECK(aut.letter(2) == Letter{"b"});
  CHECK(aut.letter(3) == Letter{"a", "b"});
  CHECK(all_letters({"x", "y", "z"}).size() == 8);
}

TEST_CASE("lazy builder matches the frozen table") {
  const Formula f = parse_prefix("& U ! b a F b");
  AutomatonBuilder builder(f);
  const StateId q1 = builder.next(0, {"a"});
  const TaskAutomaton frozen = builder.freeze(kAB);
  CHECK(frozen.step(0, Letter{"a"}) == q1);
  CHECK(builder.next(0, {"a"}) == q1);
}

TEST_CASE("state cap") {
  // X X X ... a needs one state per pending step
  Formula f = a();
  for (int i = 0; i < 10; ++i) f = make_next(f);
  CHECK_THROWS_AS(compile(f, 5), StateExplosion);
  CHECK(compile(f).num_states() >= 11);
}

TEST_CASE("every state has exactly one successor per letter") {
  const TaskAutomaton aut = compile(parse_prefix("& F & a F b G ! | a b"), kAB);
  for (StateId q = 0; q < aut.num_states(); ++q) {
    for (LetterId l = 0; l < aut.num_letters(); ++l) CHECK(aut.step(q, l) < aut.num_states());
  }
}

TEST_CASE("dot output") {
  const std::string dot = to_dot(compile(make_eventually(a())));
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("doublecircle") != std::string::npos);
  CHECK(dot.find("{a}") != std::string::npos);
}
