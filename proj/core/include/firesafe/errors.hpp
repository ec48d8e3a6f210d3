// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace firesafe {

/// Base class for everything this library throws.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration document is not well-formed (bad JSON, wrong top-level shape).
class syntax_error : public error {
 public:
  using error::error;
};

/// A field value violates a configuration invariant. Carries the field path,
/// e.g. "timing.resend_delay" or "input_map.3".
class validation_error : public error {
 public:
  validation_error(std::string path, const std::string& what)
      : error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Strict schema: the document contains a field we do not know.
class unknown_field : public error {
 public:
  explicit unknown_field(std::string name)
      : error("unknown field: " + name), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Phone number fails the international-format rule.
class invalid_phone : public error {
 public:
  using error::error;
};

/// Template references a placeholder absent from the render context.
class missing_placeholder : public error {
 public:
  explicit missing_placeholder(std::string name)
      : error("missing placeholder: " + name), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// SMS body exceeds the 160-character text-mode limit.
class body_too_long : public error {
 public:
  using error::error;
};

/// SMS body contains a byte outside the 7-bit-safe subset.
class illegal_character : public error {
 public:
  illegal_character(std::size_t position, const std::string& what)
      : error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Byte-stream link to the modem failed (closed, unreachable, dead peer).
class link_error : public error {
 public:
  using error::error;
};

/// Scenario document is malformed or violates scenario invariants.
class scenario_error : public error {
 public:
  using error::error;
};

/// Attempt to schedule an event before the current virtual clock.
class scheduling_in_past : public error {
 public:
  using error::error;
};

/// A state invariant was broken mid-run. Test hook, not a recoverable state.
class invariant_violation : public error {
 public:
  using error::error;
};

/// Incident CSV is malformed. Carries the 1-based offending line.
class csv_error : public error {
 public:
  csv_error(std::size_t line, const std::string& what)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Two incident records share one category.
class duplicate_category : public error {
 public:
  using error::error;
};

/// Transcript JSONL is malformed. Carries the 1-based offending line.
class malformed_transcript : public error {
 public:
  malformed_transcript(std::size_t line, const std::string& what)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace firesafe
