#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ltlnav/ltl.hpp"

namespace ltlnav {

/// Error raised for generated code outside the accepted grammar. what()
/// is a short single-line message meant to be shown to the model verbatim.
class DslError : public std::runtime_error {
 public:
  enum class Kind { UnknownFunction, UndefinedVariable, ArityError, NonStringApArgument, MissingReturn, SyntaxError,
                    UnknownObject };
  DslError(Kind kind, int line, int column, const std::string& message);
  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

const char* to_string(DslError::Kind kind);

struct DslExpr {
  enum class Kind { Variable, String, Call };
  Kind kind = Kind::Variable;
  std::string text;  // variable name, string value or callee
  std::vector<DslExpr> args;
};

struct DslStatement {
  enum class Kind { Assign, Return };
  Kind kind = Kind::Assign;
  std::string target;  // empty for Return
  DslExpr value;
  int line = 0;
};

/// A single function definition: assignments of whitelisted calls and one
/// final return. Comments and the docstring are kept but have no effect.
struct DslProgram {
  std::string name;
  std::string docstring;
  std::vector<std::string> comments;
  std::vector<DslStatement> statements;
};

/// Callable name -> arity.
const std::map<std::string, int, std::less<>>& dsl_functions();

/// Parses a Python-style function in the closed formula-building grammar.
/// Surrounding markdown code fences and leading import lines are ignored.
DslProgram parse_dsl(std::string_view code);

/// Runs a parsed program. Cannot fail for a program parse_dsl accepted.
ltl::Formula eval_dsl(const DslProgram& program);

/// Python source for a formula using the same callables.
std::string formula_to_dsl(const ltl::Formula& f, const std::string& function_name = "question");

}  // namespace ltlnav
