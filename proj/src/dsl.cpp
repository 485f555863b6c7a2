#include "ltlnav/dsl.hpp"

#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace ltlnav {

DslError::DslError(Kind kind, int line, int column, const std::string& message)
    : std::runtime_error(message), kind_(kind), line_(line), column_(column) {}

const char* to_string(DslError::Kind kind) {
  switch (kind) {
    case DslError::Kind::UnknownFunction:
      return "UnknownFunction";
    case DslError::Kind::UndefinedVariable:
      return "UndefinedVariable";
    case DslError::Kind::ArityError:
      return "ArityError";
    case DslError::Kind::NonStringApArgument:
      return "NonStringApArgument";
    case DslError::Kind::MissingReturn:
      return "MissingReturn";
    case DslError::Kind::SyntaxError:
      return "SyntaxError";
    case DslError::Kind::UnknownObject:
      return "UnknownObject";
  }
  return "DslError";
}

const std::map<std::string, int, std::less<>>& dsl_functions() {
  static const std::map<std::string, int, std::less<>> table{
      {"ap", 1},          {"ltl_and", 2},    {"ltl_or", 2},     {"ltl_not", 1},  {"ltl_until", 2},
      {"ltl_eventually", 1}, {"ltl_always", 1}, {"ltl_imply", 2}, {"ltl_next", 1},
  };
  return table;
}

namespace {

enum class Tok { Name, String, LParen, RParen, Comma, Equals, Colon, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
  bool line_start = false;  // first token of a logical line
};

[[noreturn]] void syntax_error(int line, int column, const std::string& what) {
  throw DslError(DslError::Kind::SyntaxError, line, column,
                 "SyntaxError at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

std::string strip_fences(std::string_view code) {
  const auto open = code.find("```");
  if (open == std::string_view::npos) return std::string(code);
  auto body_start = code.find('\n', open);
  if (body_start == std::string_view::npos) return {};
  ++body_start;
  const auto close = code.find("```", body_start);
  return std::string(code.substr(body_start, close == std::string_view::npos ? std::string_view::npos : close - body_start));
}

// Top-level import lines may use syntax the lexer does not know; blank
// them out but keep the line count.
std::string drop_imports(const std::string& src) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= src.size()) {
    auto end = src.find('\n', pos);
    if (end == std::string::npos) end = src.size();
    const std::string_view line(src.data() + pos, end - pos);
    if (!line.starts_with("import ") && !line.starts_with("from ")) out += line;
    if (end < src.size()) out += '\n';
    pos = end + 1;
  }
  return out;
}

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run(std::vector<std::string>& comments) {
    std::vector<Token> out;
    int depth = 0;
    bool at_line_start = true;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        if (depth == 0 && !out.empty() && out.back().kind != Tok::Newline) out.push_back({Tok::Newline, "", line_, col_});
        advance();
        at_line_start = true;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      if (c == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') {
        advance();
        advance();
        continue;
      }
      if (c == '#') {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        comments.push_back(src_.substr(start, pos_ - start));
        continue;
      }
      Token t{Tok::End, "", line_, col_};
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
        t.kind = Tok::Name;
        t.text = src_.substr(start, pos_ - start);
      } else if (c == '"' || c == '\'') {
        t.kind = Tok::String;
        t.text = read_string();
      } else if (c == '(' || c == ')' || c == ',' || c == '=' || c == ':') {
        t.kind = c == '(' ? Tok::LParen : c == ')' ? Tok::RParen : c == ',' ? Tok::Comma : c == '=' ? Tok::Equals : Tok::Colon;
        t.text = std::string(1, c);
        if (c == '(') ++depth;
        if (c == ')') {
          if (depth == 0) syntax_error(line_, col_, "unmatched ')'");
          --depth;
        }
        if (c == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') syntax_error(line_, col_, "comparisons are not supported");
        advance();
      } else {
        syntax_error(line_, col_, std::string("unexpected character '") + c + "'");
      }
      t.line_start = at_line_start && depth == (t.kind == Tok::LParen ? 1 : 0);
      at_line_start = false;
      out.push_back(std::move(t));
    }
    if (depth != 0) syntax_error(line_, col_, "'(' was never closed");
    if (!out.empty() && out.back().kind != Tok::Newline) out.push_back({Tok::Newline, "", line_, col_});
    out.push_back({Tok::End, "", line_, col_});
    return out;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string read_string() {
    const int line = line_;
    const int col = col_;
    const char quote = src_[pos_];
    const bool triple = src_.compare(pos_, 3, std::string(3, quote)) == 0;
    const std::size_t width = triple ? 3 : 1;
    for (std::size_t i = 0; i < width; ++i) advance();
    std::string value;
    for (;;) {
      if (pos_ >= src_.size()) syntax_error(line, col, "unterminated string literal");
      const char c = src_[pos_];
      if (triple ? src_.compare(pos_, 3, std::string(3, quote)) == 0 : c == quote) {
        for (std::size_t i = 0; i < width; ++i) advance();
        return value;
      }
      if (!triple && c == '\n') syntax_error(line, col, "unterminated string literal");
      if (c == '\\' && pos_ + 1 < src_.size()) {
        advance();
        const char e = src_[pos_];
        value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        advance();
        continue;
      }
      value += c;
      advance();
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, DslProgram& program) : toks_(std::move(tokens)), program_(program) {}

  void run() {
    skip_newlines();
    while (peek().kind == Tok::Name && (peek().text == "from" || peek().text == "import")) {
      while (peek().kind != Tok::Newline && peek().kind != Tok::End) ++next_;
      skip_newlines();
    }
    const Token& def = expect_name("def");
    const int def_column = def.column;
    program_.name = expect(Tok::Name, "function name").text;
    expect(Tok::LParen, "'('");
    if (peek().kind != Tok::RParen) syntax_error(peek().line, peek().column, "the function must not take parameters");
    expect(Tok::RParen, "')'");
    expect(Tok::Colon, "':'");
    expect(Tok::Newline, "end of line after ':'");

    bool first = true;
    bool returned = false;
    while (peek().kind != Tok::End) {
      const Token& head = peek();
      if (head.column <= def_column) {
        if (first) syntax_error(head.line, head.column, "expected an indented block after the function definition");
        syntax_error(head.line, head.column, "unexpected code after the end of the function");
      }
      if (returned) syntax_error(head.line, head.column, "statement after return");
      if (first && head.kind == Tok::String) {
        program_.docstring = head.text;
        ++next_;
        expect(Tok::Newline, "end of line after the docstring");
        first = false;
        continue;
      }
      first = false;
      statement(returned);
    }
    if (!returned) {
      throw DslError(DslError::Kind::MissingReturn, 0, 0, "MissingReturn: the function has no return statement");
    }
  }

 private:
  const Token& peek() const { return toks_[next_]; }

  const Token& expect(Tok kind, const char* what) {
    const Token& t = toks_[next_];
    if (t.kind != kind) syntax_error(t.line, t.column, std::string("expected ") + what + describe(t));
    ++next_;
    return t;
  }

  const Token& expect_name(const char* name) {
    const Token& t = toks_[next_];
    if (t.kind != Tok::Name || t.text != name) syntax_error(t.line, t.column, std::string("expected '") + name + "'" + describe(t));
    ++next_;
    return t;
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::Newline:
        return ", found end of line";
      case Tok::End:
        return ", found end of input";
      case Tok::String:
        return ", found a string literal";
      default:
        return ", found '" + t.text + "'";
    }
  }

  void skip_newlines() {
    while (peek().kind == Tok::Newline) ++next_;
  }

  void statement(bool& returned) {
    const Token& head = peek();
    if (head.kind != Tok::Name) syntax_error(head.line, head.column, "expected an assignment or return statement" + describe(head));
    DslStatement st;
    st.line = head.line;
    if (head.text == "return") {
      ++next_;
      st.kind = DslStatement::Kind::Return;
      if (peek().kind == Tok::Newline) syntax_error(head.line, head.column, "return needs a value");
      st.value = expression();
      returned = true;
    } else {
      if (is_keyword(head.text)) syntax_error(head.line, head.column, "'" + head.text + "' statements are not supported");
      ++next_;
      if (peek().kind != Tok::Equals) {
        syntax_error(peek().line, peek().column, "expected '=' after '" + head.text + "'" + describe(peek()));
      }
      ++next_;
      if (dsl_functions().count(head.text)) {
        syntax_error(head.line, head.column, "cannot assign to the library function '" + head.text + "'");
      }
      st.kind = DslStatement::Kind::Assign;
      st.target = head.text;
      st.value = expression();
    }
    if (st.value.kind == DslExpr::Kind::String) {
      syntax_error(head.line, head.column, "a bare string is not a formula; wrap it in ap()");
    }
    expect(Tok::Newline, "end of line");
    check_defined(st.value, st.line);
    if (st.kind == DslStatement::Kind::Assign) defined_.insert(st.target);
    program_.statements.push_back(std::move(st));
  }

  static bool is_keyword(const std::string& s) {
    static const std::set<std::string> kw{"if", "else", "elif", "for", "while", "def", "lambda", "import", "from",
                                          "class", "with", "try", "except", "pass", "print", "global", "del", "yield"};
    return kw.count(s) != 0;
  }

  DslExpr expression() {
    const Token& t = peek();
    if (t.kind == Tok::String) {
      ++next_;
      return {DslExpr::Kind::String, t.text, {}};
    }
    if (t.kind != Tok::Name) syntax_error(t.line, t.column, "expected an expression" + describe(t));
    ++next_;
    if (peek().kind != Tok::LParen) return {DslExpr::Kind::Variable, t.text, {}};

    ++next_;
    DslExpr call{DslExpr::Kind::Call, t.text, {}};
    if (peek().kind != Tok::RParen) {
      for (;;) {
        if (peek().kind == Tok::Name && toks_[next_ + 1].kind == Tok::Equals) {
          syntax_error(peek().line, peek().column, "keyword arguments are not supported");
        }
        call.args.push_back(expression());
        if (peek().kind == Tok::Comma) {
          ++next_;
          if (peek().kind == Tok::RParen) break;
          continue;
        }
        break;
      }
    }
    expect(Tok::RParen, "')' or ','");

    const auto& table = dsl_functions();
    auto it = table.find(call.text);
    if (it == table.end()) {
      throw DslError(DslError::Kind::UnknownFunction, t.line, t.column,
                     "UnknownFunction: '" + call.text + "' is not an available function");
    }
    const int got = static_cast<int>(call.args.size());
    if (got != it->second) {
      throw DslError(DslError::Kind::ArityError, t.line, t.column,
                     "ArityError: " + call.text + "() takes " + std::to_string(it->second) + " argument" +
                         (it->second == 1 ? "" : "s") + " but " + std::to_string(got) + (got == 1 ? " was" : " were") +
                         " given");
    }
    if (call.text == "ap") {
      const DslExpr& arg = call.args[0];
      if (arg.kind != DslExpr::Kind::String) {
        throw DslError(DslError::Kind::NonStringApArgument, t.line, t.column,
                       "NonStringApArgument: ap() takes a string literal naming an object");
      }
      if (!ltl::is_valid_proposition(arg.text)) {
        throw DslError(DslError::Kind::NonStringApArgument, t.line, t.column,
                       "NonStringApArgument: '" + arg.text + "' is not a valid object id");
      }
    } else {
      for (const DslExpr& arg : call.args) {
        if (arg.kind == DslExpr::Kind::String) {
          syntax_error(t.line, t.column, call.text + "() takes formulas; wrap \"" + arg.text + "\" in ap()");
        }
      }
    }
    return call;
  }

  void check_defined(const DslExpr& e, int line) {
    if (e.kind == DslExpr::Kind::Variable && !defined_.count(e.text)) {
      throw DslError(DslError::Kind::UndefinedVariable, line, 0,
                     "UndefinedVariable: '" + e.text + "' is used before it is defined");
    }
    if (e.kind == DslExpr::Kind::Call && e.text != "ap") {
      for (const DslExpr& a : e.args) check_defined(a, line);
    }
  }

  std::vector<Token> toks_;
  std::size_t next_ = 0;
  DslProgram& program_;
  std::set<std::string> defined_;
};

ltl::Formula eval_expr(const DslExpr& e, const std::map<std::string, ltl::Formula>& env) {
  switch (e.kind) {
    case DslExpr::Kind::Variable:
      return env.at(e.text);
    case DslExpr::Kind::String:
      return ltl::make_atom(e.text);
    case DslExpr::Kind::Call:
      break;
  }
  const std::string& fn = e.text;
  if (fn == "ap") return ltl::make_atom(e.args.at(0).text);
  auto arg = [&](std::size_t i) { return eval_expr(e.args.at(i), env); };
  if (fn == "ltl_not") return ltl::make_not(arg(0));
  if (fn == "ltl_eventually") return ltl::make_eventually(arg(0));
  if (fn == "ltl_always") return ltl::make_always(arg(0));
  if (fn == "ltl_next") return ltl::make_next(arg(0));
  if (fn == "ltl_and") return ltl::make_and(arg(0), arg(1));
  if (fn == "ltl_or") return ltl::make_or(arg(0), arg(1));
  if (fn == "ltl_until") return ltl::make_until(arg(0), arg(1));
  if (fn == "ltl_imply") return ltl::make_imply(arg(0), arg(1));
  throw std::logic_error("unvalidated call to " + fn);
}

}  // namespace

DslProgram parse_dsl(std::string_view code) {
  DslProgram program;
  const std::string source = drop_imports(strip_fences(code));
  std::vector<Token> tokens = Lexer(source).run(program.comments);
  Parser(std::move(tokens), program).run();
  return program;
}

ltl::Formula eval_dsl(const DslProgram& program) {
  std::map<std::string, ltl::Formula> env;
  for (const DslStatement& st : program.statements) {
    ltl::Formula value = eval_expr(st.value, env);
    if (st.kind == DslStatement::Kind::Return) return value;
    env.insert_or_assign(st.target, std::move(value));
  }
  throw std::logic_error("program has no return statement");
}

std::string formula_to_dsl(const ltl::Formula& f, const std::string& function_name) {
  std::ostringstream out;
  out << "def " << function_name << "():\n";
  int counter = 0;
  std::function<std::string(const ltl::Formula&)> emit = [&](const ltl::Formula& g) -> std::string {
    using ltl::Op;
    std::string call;
    switch (g.op()) {
      case Op::Atom:
        call = "ap(\"" + g.name() + "\")";
        break;
      case Op::Not:
        call = "ltl_not(" + emit(g.lhs()) + ")";
        break;
      case Op::Eventually:
        call = "ltl_eventually(" + emit(g.lhs()) + ")";
        break;
      case Op::Always:
        call = "ltl_always(" + emit(g.lhs()) + ")";
        break;
      case Op::Next:
        call = "ltl_next(" + emit(g.lhs()) + ")";
        break;
      case Op::And:
      case Op::Or:
      case Op::Until:
      case Op::Imply: {
        const std::string a = emit(g.lhs());
        const std::string b = emit(g.rhs());
        const char* name = g.op() == Op::And ? "ltl_and" : g.op() == Op::Or ? "ltl_or" : g.op() == Op::Until ? "ltl_until" : "ltl_imply";
        call = std::string(name) + "(" + a + ", " + b + ")";
        break;
      }
      default:
        throw std::invalid_argument("formula uses an operator the code library does not provide");
    }
    const std::string var = "c" + std::to_string(++counter);
    out << "    " << var << " = " << call << "\n";
    return var;
  };
  const std::string result = emit(f);
  out << "    return " << result << "\n";
  return out.str();
}

}  // namespace ltlnav
