#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace varmath {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Malformed surface syntax (spec strings, expressions, numerals).
/// Carries the character offset of the offending token within the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Expression evaluation failure: unbound variable or a domain violation
/// (division by zero, sqrt of a negative, non-finite result, ...).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A corpus file that failed to load. Collects one line per failing record
/// so a single pass reports every broken template.
class CorpusError : public Error {
 public:
  CorpusError(const std::string& message, std::vector<std::string> failures)
      : Error(join(message, failures)), failures_(std::move(failures)) {}

  const std::vector<std::string>& failures() const { return failures_; }

 private:
  static std::string join(const std::string& message,
                          const std::vector<std::string>& failures) {
    std::string out = message;
    for (const auto& f : failures) {
      out += "\n  - " + f;
    }
    return out;
  }

  std::vector<std::string> failures_;
};

/// Instantiation failure (empty joint feasible set, domain error while
/// resolving a variable or the answer). Names the template and variant.
class InstantiationError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (bad generation parameters, unknown client,
/// mismatched corpus, ...). Raised before any work is attempted.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure: unreadable input, unwritable output path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Transport-level failure talking to a remote endpoint. Retried by the
/// harness; surfaces as an error tag on the affected record once the retry
/// budget is exhausted.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// A record set that does not form a complete variants x generations grid
/// for some template. The message names the first gap.
class RaggedRecordsError : public Error {
 public:
  using Error::Error;
};

}  // namespace varmath
