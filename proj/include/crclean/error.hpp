#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crclean {

/// Root of every error raised by the library. Callers that only need a
/// diagnostic can catch this; callers that recover catch the leaf types.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// corpus

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, std::string reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(std::move(reason)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class DuplicateId : public Error {
 public:
  explicit DuplicateId(std::string id) : Error("duplicate id: " + id), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class DiffSyntax : public Error {
 public:
  DiffSyntax(std::size_t line, std::string reason)
      : Error("diff line " + std::to_string(line) + ": " + reason), line_(line), reason_(std::move(reason)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

// prompting

class UnparsableResponse : public Error {
 public:
  explicit UnparsableResponse(std::string raw)
      : Error("no label token in response"), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

class AmbiguousResponse : public Error {
 public:
  explicit AmbiguousResponse(std::string raw)
      : Error("response names both labels"), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

// gateway

class TransportError : public Error {
 public:
  TransportError(std::string what, int status, bool retryable)
      : Error(std::move(what)), status_(status), retryable_(retryable) {}
  /// HTTP status, or 0 when the connection itself failed.
  int status() const noexcept { return status_; }
  bool retryable() const noexcept { return retryable_; }

 private:
  int status_;
  bool retryable_;
};

class CheckpointCorrupt : public Error {
 public:
  CheckpointCorrupt(const std::string& path, const std::string& reason)
      : Error("checkpoint " + path + " is corrupt: " + reason), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// cleaning

class MissingPrediction : public Error {
 public:
  explicit MissingPrediction(std::string id) : Error("no prediction for id " + id), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class TargetTooLarge : public Error {
 public:
  using Error::Error;
};

class EmptyPredictedValid : public Error {
 public:
  EmptyPredictedValid() : Error("no instance was predicted valid") {}
};

// metrics

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : Error("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class DegenerateMarginals : public Error {
 public:
  DegenerateMarginals() : Error("expected agreement is 1 but observed agreement is not") {}
};

class AllZeroDifferences : public Error {
 public:
  AllZeroDifferences() : Error("all paired differences are zero") {}
};

// bleu

class IdMismatch : public Error {
 public:
  using Error::Error;
};

// topics

class TooFewPoints : public Error {
 public:
  TooFewPoints(std::size_t n, std::size_t k)
      : Error("cannot form " + std::to_string(k) + " clusters from " + std::to_string(n) + " points") {}
};

class MissingAnnotation : public Error {
 public:
  explicit MissingAnnotation(std::size_t cluster)
      : Error("cluster " + std::to_string(cluster) + " has unannotated representatives"), cluster_(cluster) {}
  std::size_t cluster() const noexcept { return cluster_; }

 private:
  std::size_t cluster_;
};

// cli

class ResumeCorrupt : public Error {
 public:
  using Error::Error;
};

}  // namespace crclean
