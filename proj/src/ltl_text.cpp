#include <cctype>
#include <optional>

#include "ltlnav/ltl.hpp"

namespace ltlnav::ltl {

namespace {

struct Token {
  std::string text;
  std::size_t pos = 0;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::optional<Op> unary_keyword(std::string_view t) {
  if (t == "!") return Op::Not;
  if (t == "X") return Op::Next;
  if (t == "N") return Op::WeakNext;
  if (t == "F") return Op::Eventually;
  if (t == "G") return Op::Always;
  return std::nullopt;
}

std::optional<Op> binary_keyword(std::string_view t) {
  if (t == "&") return Op::And;
  if (t == "|") return Op::Or;
  if (t == "=>") return Op::Imply;
  if (t == "U") return Op::Until;
  if (t == "R") return Op::Release;
  return std::nullopt;
}

const char* op_token(Op op) {
  switch (op) {
    case Op::True:
      return "true";
    case Op::False:
      return "false";
    case Op::Atom:
      return "";
    case Op::Not:
      return "!";
    case Op::And:
      return "&";
    case Op::Or:
      return "|";
    case Op::Imply:
      return "=>";
    case Op::Next:
      return "X";
    case Op::WeakNext:
      return "N";
    case Op::Until:
      return "U";
    case Op::Release:
      return "R";
    case Op::Eventually:
      return "F";
    case Op::Always:
      return "G";
  }
  return "?";
}

std::string describe(const Token& t) { return "'" + t.text + "' at offset " + std::to_string(t.pos); }

// ---------------------------------------------------------------------------
// Prefix

class PrefixParser {
 public:
  explicit PrefixParser(std::string_view text) : text_(text) {
    std::size_t i = 0;
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      tokens_.push_back({std::string(text.substr(i, j - i)), i});
      i = j;
    }
  }

  Formula parse() {
    if (tokens_.empty()) throw ParseError(ParseError::Kind::MissingOperand, 0, "empty formula");
    Formula f = parse_one();
    if (next_ < tokens_.size()) {
      throw ParseError(ParseError::Kind::TrailingInput, tokens_[next_].pos,
                       "trailing input " + describe(tokens_[next_]));
    }
    return f;
  }

 private:
  Formula parse_one() {
    if (next_ >= tokens_.size()) {
      throw ParseError(ParseError::Kind::MissingOperand, text_.size(),
                       "operator is missing an operand at end of input");
    }
    const Token& t = tokens_[next_++];
    if (auto op = unary_keyword(t.text)) return make_unary(*op, parse_one());
    if (auto op = binary_keyword(t.text)) {
      Formula a = parse_one();
      Formula b = parse_one();
      return make_binary(*op, std::move(a), std::move(b));
    }
    if (t.text == "true") return make_true();
    if (t.text == "false") return make_false();
    if (is_valid_proposition(t.text)) return make_atom(t.text);
    throw ParseError(ParseError::Kind::UnexpectedToken, t.pos, "unexpected token " + describe(t));
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t next_ = 0;
};

void write_prefix(const Formula& f, std::string& out) {
  if (!out.empty()) out += ' ';
  if (f.op() == Op::Atom) {
    out += f.name();
    return;
  }
  out += op_token(f.op());
  if (is_unary(f.op()) || is_binary(f.op())) write_prefix(f.lhs(), out);
  if (is_binary(f.op())) write_prefix(f.rhs(), out);
}

// ---------------------------------------------------------------------------
// Infix

class InfixParser {
 public:
  explicit InfixParser(std::string_view text) : text_(text) {
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (is_ident_start(c)) {
        std::size_t j = i;
        while (j < text.size() && is_ident_char(text[j])) ++j;
        tokens_.push_back({std::string(text.substr(i, j - i)), i});
        i = j;
      } else if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
        tokens_.push_back({"=>", i});
        i += 2;
      } else if (c == '(' || c == ')' || c == '!' || c == '&' || c == '|') {
        tokens_.push_back({std::string(1, c), i});
        ++i;
      } else {
        throw ParseError(ParseError::Kind::UnexpectedToken, i,
                         std::string("unexpected character '") + c + "' at offset " + std::to_string(i));
      }
    }
  }

  Formula parse() {
    if (tokens_.empty()) throw ParseError(ParseError::Kind::MissingOperand, 0, "empty formula");
    Formula f = parse_imply();
    if (const Token* t = peek()) {
      if (t->text == ")") {
        throw ParseError(ParseError::Kind::UnbalancedParens, t->pos, "unmatched ')' at offset " + std::to_string(t->pos));
      }
      throw ParseError(ParseError::Kind::TrailingInput, t->pos, "trailing input " + describe(*t));
    }
    return f;
  }

 private:
  const Token* peek() const { return next_ < tokens_.size() ? &tokens_[next_] : nullptr; }
  bool accept(std::string_view text) {
    if (const Token* t = peek(); t && t->text == text) {
      ++next_;
      return true;
    }
    return false;
  }

  Formula parse_imply() {
    Formula lhs = parse_or();
    if (accept("=>")) return make_imply(std::move(lhs), parse_imply());
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|")) f = make_or(std::move(f), parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_until();
    while (accept("&")) f = make_and(std::move(f), parse_until());
    return f;
  }

  Formula parse_until() {
    Formula f = parse_unary();
    for (;;) {
      if (accept("U")) {
        f = make_until(std::move(f), parse_unary());
      } else if (accept("R")) {
        f = make_release(std::move(f), parse_unary());
      } else {
        return f;
      }
    }
  }

  Formula parse_unary() {
    const Token* t = peek();
    if (!t) {
      throw ParseError(ParseError::Kind::MissingOperand, text_.size(), "operand expected at end of input");
    }
    if (auto op = unary_keyword(t->text)) {
      ++next_;
      return make_unary(*op, parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = tokens_[next_];
    if (t.text == "(") {
      ++next_;
      Formula f = parse_imply();
      if (!accept(")")) {
        throw ParseError(ParseError::Kind::UnbalancedParens, t.pos,
                         "'(' at offset " + std::to_string(t.pos) + " is never closed");
      }
      return f;
    }
    if (t.text == ")") {
      throw ParseError(ParseError::Kind::UnbalancedParens, t.pos, "unexpected ')' at offset " + std::to_string(t.pos));
    }
    ++next_;
    if (t.text == "true") return make_true();
    if (t.text == "false") return make_false();
    if (is_valid_proposition(t.text)) return make_atom(t.text);
    throw ParseError(ParseError::Kind::UnexpectedToken, t.pos, "unexpected token " + describe(t));
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t next_ = 0;
};

void write_infix(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      out += op_token(f.op());
      return;
    case Op::Atom:
      out += f.name();
      return;
    default:
      break;
  }
  if (is_unary(f.op())) {
    out += op_token(f.op());
    out += '(';
    write_infix(f.lhs(), out);
    out += ')';
    return;
  }
  out += '(';
  write_infix(f.lhs(), out);
  out += ") ";
  out += op_token(f.op());
  out += " (";
  write_infix(f.rhs(), out);
  out += ')';
}

}  // namespace

ParseError::ParseError(Kind kind, std::size_t position, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), position_(position) {}

const char* to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::UnexpectedToken:
      return "UnexpectedToken";
    case ParseError::Kind::MissingOperand:
      return "MissingOperand";
    case ParseError::Kind::TrailingInput:
      return "TrailingInput";
    case ParseError::Kind::UnbalancedParens:
      return "UnbalancedParens";
  }
  return "ParseError";
}

bool is_valid_proposition(std::string_view name) {
  if (name.empty() || !is_ident_start(name.front())) return false;
  for (char c : name) {
    if (!is_ident_char(c)) return false;
  }
  if (name == "true" || name == "false") return false;
  if (name.size() == 1 && (unary_keyword(name) || binary_keyword(name))) return false;
  return true;
}

Formula parse_prefix(std::string_view text) { return PrefixParser(text).parse(); }
Formula parse_infix(std::string_view text) { return InfixParser(text).parse(); }

std::string to_prefix(const Formula& f) {
  std::string out;
  write_prefix(f, out);
  return out;
}

std::string to_infix(const Formula& f) {
  std::string out;
  write_infix(f, out);
  return out;
}

Formula parse(std::string_view text, TextFormat format) {
  return format == TextFormat::Prefix ? parse_prefix(text) : parse_infix(text);
}

std::string to_text(const Formula& f, TextFormat format) {
  return format == TextFormat::Prefix ? to_prefix(f) : to_infix(f);
}

}  // namespace ltlnav::ltl
