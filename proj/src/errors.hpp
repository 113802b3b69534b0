#pragma once
#include <stdexcept>
#include <string>

namespace rewlab {

enum class ErrorKind { Parse, Usage, Eval, Budget, Arity };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : Error(ErrorKind::Parse, std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& m) : Error(ErrorKind::Usage, m) {}
};
struct EvalError : Error {
  explicit EvalError(const std::string& m) : Error(ErrorKind::Eval, m) {}
};
struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& m) : Error(ErrorKind::Budget, m) {}
};

}  // namespace rewlab
