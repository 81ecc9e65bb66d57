#pragma once

#include <stdexcept>
#include <string>

namespace agentopt {

// Invalid argument to a library call (dimension mismatch, bad config, ...).
class ArgumentError : public std::runtime_error {
 public:
  explicit ArgumentError(const std::string& what) : std::runtime_error(what) {}
};

// Text did not match the expected grammar. Carries the offending input and,
// where it is known, a 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string raw = {}, int line = -1)
      : std::runtime_error(what), raw_text(std::move(raw)), line(line) {}

  std::string raw_text;
  int line;
};

// Right grammar, wrong number of values.
class ArityError : public ParseError {
 public:
  ArityError(const std::string& what, std::string raw = {})
      : ParseError(what, std::move(raw)) {}
};

// Agent endpoint could not be reached or answered with an error status.
class TransportError : public std::runtime_error {
 public:
  explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

// Replay fixture exhausted or out of sync with the prompts being sent.
class ReplayError : public std::runtime_error {
 public:
  explicit ReplayError(const std::string& what) : std::runtime_error(what) {}
};

// File could not be read, written or understood.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace agentopt
