#pragma once

#include <stdexcept>
#include <string>

namespace multigiant {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed spec or sequence input (file or in-memory construction).
class ParseError : public Error {
public:
  ParseError(std::string field, std::string message, int line = 0)
      : Error(format(field, message, line)), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  /// 1-based line of a syntax error, 0 when the error is structural.
  int line() const noexcept { return line_; }

private:
  static std::string format(const std::string& field, const std::string& message, int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + message;
  }

  std::string field_;
  int line_;
};

class RepairInfeasible : public Error {
public:
  using Error::Error;
};

class NotIrreducible : public Error {
public:
  using Error::Error;
};

class NoConvergence : public Error {
public:
  using Error::Error;
};

class NotBipartite : public Error {
public:
  using Error::Error;
};

/// Degree sequence cannot be matched (clone-count asymmetry or odd same-part clone count).
class InvalidSequence : public Error {
public:
  using Error::Error;
};

class MaxAttemptsExceeded : public Error {
public:
  MaxAttemptsExceeded(int attempts, int accepted)
      : Error("no simple graph after " + std::to_string(attempts) +
              " attempts (acceptance rate " + std::to_string(accepted) + "/" +
              std::to_string(attempts) + ")"),
        attempts_(attempts), accepted_(accepted) {}

  int attempts() const noexcept { return attempts_; }
  double acceptance_rate() const noexcept {
    return attempts_ == 0 ? 0.0 : static_cast<double>(accepted_) / attempts_;
  }

private:
  int attempts_;
  int accepted_;
};

class InconsistentState : public Error {
public:
  using Error::Error;
};

class IllegalEvent : public Error {
public:
  using Error::Error;
};

} // namespace multigiant
