#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnli {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message);

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// One failed validation rule. `subject` names the offending entry
// (lexeme, template id, ...), `rule` is a stable machine-readable name.
struct Issue {
  std::string subject;
  std::string rule;
  std::string detail;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const { return issues_; }
  bool has_rule(const std::string& rule) const;

 private:
  std::vector<Issue> issues_;
};

class MissingFormError : public Error {
 public:
  using Error::Error;
};

// Several templates explain the same premise/hypothesis pair differently.
class AmbiguityError : public Error {
 public:
  explicit AmbiguityError(std::vector<std::string> template_ids);

  const std::vector<std::string>& template_ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

// Predictions whose example ids have no gold counterpart.
class JoinError : public Error {
 public:
  explicit JoinError(std::vector<std::string> unmatched_ids);

  const std::vector<std::string>& unmatched_ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

}  // namespace tnli
