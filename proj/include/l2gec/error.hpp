#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace l2gec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based; 0 when the position is unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ArpaParseError : public ParseError {
 public:
  using ParseError::ParseError;
};

class M2ParseError : public ParseError {
 public:
  using ParseError::ParseError;
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus contains no sentences") {}
};

class DegenerateCounts : public Error {
 public:
  using Error::Error;
};

class UnknownLemma : public Error {
 public:
  using Error::Error;
};

class EmptyCode : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class MissingArtifact : public Error {
 public:
  MissingArtifact(std::string stage, const std::string& artifact)
      : Error("stage '" + stage + "' needs " + artifact + ", which is not loaded"),
        stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace l2gec
