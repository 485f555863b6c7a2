#include "ltlnav/ltl.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace ltlnav::ltl {

struct Formula::Node {
  Op op;
  std::string name;
  Formula lhs;
  Formula rhs;
  std::size_t hash = 0;
  std::size_t size = 1;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const std::size_t kTrueHash = mix(0, static_cast<std::size_t>(Op::True));

}  // namespace

Formula make_node(Op op, std::string name, Formula lhs, Formula rhs) {
  auto node = std::make_shared<Formula::Node>();
  node->op = op;
  node->name = std::move(name);
  std::size_t h = mix(0, static_cast<std::size_t>(op));
  if (op == Op::Atom) h = mix(h, std::hash<std::string>{}(node->name));
  if (is_unary(op) || is_binary(op)) {
    h = mix(h, lhs.hash());
    node->size += lhs.size();
  }
  if (is_binary(op)) {
    h = mix(h, rhs.hash());
    node->size += rhs.size();
  }
  node->hash = h;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return Formula(std::move(node));
}

// A null node is the constant true.
Formula::Formula() = default;

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

namespace {
const Formula kTrueFormula;
const std::string kNoName;
}  // namespace

Op Formula::op() const { return node_ ? node_->op : Op::True; }
const std::string& Formula::name() const { return node_ ? node_->name : kNoName; }
const Formula& Formula::lhs() const { return node_ ? node_->lhs : kTrueFormula; }
const Formula& Formula::rhs() const { return node_ ? node_->rhs : kTrueFormula; }
std::size_t Formula::hash() const { return node_ ? node_->hash : kTrueHash; }
std::size_t Formula::size() const { return node_ ? node_->size : 1; }

int Formula::compare(const Formula& other) const {
  if (node_ == other.node_) return 0;
  if (op() != other.op()) return op() < other.op() ? -1 : 1;
  if (op() == Op::Atom) {
    const int c = name().compare(other.name());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  if (is_unary(op())) return lhs().compare(other.lhs());
  if (is_binary(op())) {
    if (int c = lhs().compare(other.lhs()); c != 0) return c;
    return rhs().compare(other.rhs());
  }
  return 0;
}

bool is_unary(Op op) {
  switch (op) {
    case Op::Not:
    case Op::Next:
    case Op::WeakNext:
    case Op::Eventually:
    case Op::Always:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  switch (op) {
    case Op::And:
    case Op::Or:
    case Op::Imply:
    case Op::Until:
    case Op::Release:
      return true;
    default:
      return false;
  }
}

Formula make_true() { return Formula{}; }
Formula make_false() {
  static const Formula f = make_node(Op::False, {}, Formula{}, Formula{});
  return f;
}
Formula make_atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty proposition name");
  return make_node(Op::Atom, std::move(name), Formula{}, Formula{});
}
Formula make_unary(Op op, Formula f) {
  if (!is_unary(op)) throw std::invalid_argument("not a unary operator");
  return make_node(op, {}, std::move(f), Formula{});
}
Formula make_binary(Op op, Formula a, Formula b) {
  if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
  return make_node(op, {}, std::move(a), std::move(b));
}
Formula make_not(Formula f) { return make_unary(Op::Not, std::move(f)); }
Formula make_next(Formula f) { return make_unary(Op::Next, std::move(f)); }
Formula make_weak_next(Formula f) { return make_unary(Op::WeakNext, std::move(f)); }
Formula make_eventually(Formula f) { return make_unary(Op::Eventually, std::move(f)); }
Formula make_always(Formula f) { return make_unary(Op::Always, std::move(f)); }
Formula make_and(Formula a, Formula b) { return make_binary(Op::And, std::move(a), std::move(b)); }
Formula make_or(Formula a, Formula b) { return make_binary(Op::Or, std::move(a), std::move(b)); }
Formula make_imply(Formula a, Formula b) { return make_binary(Op::Imply, std::move(a), std::move(b)); }
Formula make_until(Formula a, Formula b) { return make_binary(Op::Until, std::move(a), std::move(b)); }
Formula make_release(Formula a, Formula b) { return make_binary(Op::Release, std::move(a), std::move(b)); }

// ---------------------------------------------------------------------------
// Normal forms

namespace {

Formula nnf_impl(const Formula& f, bool negated) {
  switch (f.op()) {
    case Op::True:
      return negated ? make_false() : f;
    case Op::False:
      return negated ? make_true() : f;
    case Op::Atom:
      return negated ? make_not(f) : f;
    case Op::Not:
      return nnf_impl(f.lhs(), !negated);
    case Op::And:
      return make_binary(negated ? Op::Or : Op::And, nnf_impl(f.lhs(), negated),
                         nnf_impl(f.rhs(), negated));
    case Op::Or:
      return make_binary(negated ? Op::And : Op::Or, nnf_impl(f.lhs(), negated),
                         nnf_impl(f.rhs(), negated));
    case Op::Imply:
      // a => b  ==  !a | b
      return make_binary(negated ? Op::And : Op::Or, nnf_impl(f.lhs(), !negated),
                         nnf_impl(f.rhs(), negated));
    case Op::Next:
      return make_unary(negated ? Op::WeakNext : Op::Next, nnf_impl(f.lhs(), negated));
    case Op::WeakNext:
      return make_unary(negated ? Op::Next : Op::WeakNext, nnf_impl(f.lhs(), negated));
    case Op::Eventually:
      return make_unary(negated ? Op::Always : Op::Eventually, nnf_impl(f.lhs(), negated));
    case Op::Always:
      return make_unary(negated ? Op::Eventually : Op::Always, nnf_impl(f.lhs(), negated));
    case Op::Until:
      return make_binary(negated ? Op::Release : Op::Until, nnf_impl(f.lhs(), negated),
                         nnf_impl(f.rhs(), negated));
    case Op::Release:
      return make_binary(negated ? Op::Until : Op::Release, nnf_impl(f.lhs(), negated),
                         nnf_impl(f.rhs(), negated));
  }
  return f;
}

bool contains_non_cosafe(const Formula& f) {
  if (f.op() == Op::Always || f.op() == Op::Release) return true;
  if (is_unary(f.op())) return contains_non_cosafe(f.lhs());
  if (is_binary(f.op())) return contains_non_cosafe(f.lhs()) || contains_non_cosafe(f.rhs());
  return false;
}

void collect_props(const Formula& f, std::vector<std::string>& out) {
  if (f.op() == Op::Atom) {
    out.push_back(f.name());
    return;
  }
  if (is_unary(f.op()) || is_binary(f.op())) collect_props(f.lhs(), out);
  if (is_binary(f.op())) collect_props(f.rhs(), out);
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_impl(f, false); }

bool is_syntactically_cosafe(const Formula& f) { return !contains_non_cosafe(nnf(f)); }

std::vector<std::string> atomic_props(const Formula& f) {
  std::vector<std::string> out;
  collect_props(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Finite-trace semantics

FiniteEvaluator::FiniteEvaluator(const Formula& f) : FiniteEvaluator(f, atomic_props(f)) {}

FiniteEvaluator::FiniteEvaluator(const Formula& f, std::vector<std::string> props)
    : props_(std::move(props)) {
  if (props_.size() > 32) throw std::invalid_argument("at most 32 propositions per evaluator");
  std::unordered_map<const void*, int> seen;
  std::function<int(const Formula&)> visit = [&](const Formula& g) -> int {
    if (auto it = seen.find(g.id()); it != seen.end()) return it->second;
    Step step{g.op()};
    if (is_unary(g.op()) || is_binary(g.op())) step.lhs = visit(g.lhs());
    if (is_binary(g.op())) step.rhs = visit(g.rhs());
    if (g.op() == Op::Atom) {
      auto it = std::find(props_.begin(), props_.end(), g.name());
      step.prop = it == props_.end() ? -1 : static_cast<int>(it - props_.begin());
    }
    steps_.push_back(step);
    const int index = static_cast<int>(steps_.size()) - 1;
    seen.emplace(g.id(), index);
    return index;
  };
  visit(f);
}

bool FiniteEvaluator::operator()(std::span<const std::uint32_t> word) const {
  // Table row k holds the truth value of step k at positions 0..n, where
  // position n is the empty suffix.
  const std::size_t n = word.size();
  const std::size_t stride = n + 1;
  scratch_.assign(steps_.size() * stride, 0);
  auto at = [&](int k, std::size_t i) -> std::uint8_t& { return scratch_[k * stride + i]; };

  for (std::size_t k = 0; k < steps_.size(); ++k) {
    const Step& s = steps_[k];
    const int self = static_cast<int>(k);
    for (std::size_t ii = stride; ii-- > 0;) {
      const bool last = ii == n;
      bool v = false;
      switch (s.op) {
        case Op::True:
          v = true;
          break;
        case Op::False:
          v = false;
          break;
        case Op::Atom:
          v = !last && s.prop >= 0 && ((word[ii] >> s.prop) & 1U);
          break;
        case Op::Not:
          v = !at(s.lhs, ii);
          break;
        case Op::And:
          v = at(s.lhs, ii) && at(s.rhs, ii);
          break;
        case Op::Or:
          v = at(s.lhs, ii) || at(s.rhs, ii);
          break;
        case Op::Imply:
          v = !at(s.lhs, ii) || at(s.rhs, ii);
          break;
        case Op::Next:
          v = ii + 1 < n && at(s.lhs, ii + 1);
          break;
        case Op::WeakNext:
          v = ii + 1 >= n || at(s.lhs, ii + 1);
          break;
        // Temporal operators range over positions strictly inside the word.
        case Op::Eventually:
          v = !last && (at(s.lhs, ii) || at(self, ii + 1));
          break;
        case Op::Always:
          v = last || (at(s.lhs, ii) && at(self, ii + 1));
          break;
        case Op::Until:
          v = !last && (at(s.rhs, ii) || (at(s.lhs, ii) && at(self, ii + 1)));
          break;
        case Op::Release:
          v = last || (at(s.rhs, ii) && (at(s.lhs, ii) || at(self, ii + 1)));
          break;
      }
      at(self, ii) = v;
    }
  }
  return at(static_cast<int>(steps_.size()) - 1, 0) != 0;
}

bool FiniteEvaluator::operator()(const Word& word) const {
  std::vector<std::uint32_t> masks(word.size(), 0);
  for (std::size_t i = 0; i < word.size(); ++i) {
    for (std::size_t p = 0; p < props_.size(); ++p) {
      if (word[i].count(props_[p])) masks[i] |= 1U << p;
    }
  }
  return (*this)(std::span<const std::uint32_t>(masks));
}

bool eval_finite(const Formula& f, const Word& w) { return FiniteEvaluator(f)(w); }

bool holds_on_empty(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::Always:
    case Op::Release:
    case Op::WeakNext:
      return true;
    case Op::False:
    case Op::Atom:
    case Op::Next:
    case Op::Eventually:
    case Op::Until:
      return false;
    case Op::Not:
      return !holds_on_empty(f.lhs());
    case Op::And:
      return holds_on_empty(f.lhs()) && holds_on_empty(f.rhs());
    case Op::Or:
      return holds_on_empty(f.lhs()) || holds_on_empty(f.rhs());
    case Op::Imply:
      return !holds_on_empty(f.lhs()) || holds_on_empty(f.rhs());
  }
  return false;
}

}  // namespace ltlnav::ltl
