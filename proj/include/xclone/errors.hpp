#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xclone {

// Broad failure class; the CLI maps these onto process exit codes.
enum class ErrorKind {
  kValidation,  // malformed input files, bad records
  kData,        // well-formed input that cannot satisfy the request
  kUsage,       // bad arguments or configuration
  kProvider,    // remote model endpoint failures
  kInterrupted, // SIGINT between work items
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// ---- corpus ----

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line_no, const std::string& reason)
      : Error(ErrorKind::kValidation,
              "malformed record at line " + std::to_string(line_no) + ": " + reason),
        line_no_(line_no) {}
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::size_t line_no_;
};

class DuplicateProblemId : public Error {
 public:
  explicit DuplicateProblemId(const std::string& id)
      : Error(ErrorKind::kValidation, "duplicate problem_id '" + id + "'") {}
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error(ErrorKind::kValidation, "corpus contains no valid problems") {}
};

class UnknownLanguage : public Error {
 public:
  explicit UnknownLanguage(const std::string& lang)
      : Error(ErrorKind::kValidation, "no keyword table registered for language '" + lang + "'") {}
};

class NoSamples : public Error {
 public:
  explicit NoSamples(const std::string& id)
      : Error(ErrorKind::kData, "problem '" + id + "' has no samples") {}
};

// ---- numerics ----

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error(ErrorKind::kData, "dimension mismatch: expected " + std::to_string(expected) +
                                    ", got " + std::to_string(got)) {}
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error(ErrorKind::kData, "zero vector has no direction") {}
};

class DegenerateData : public Error {
 public:
  explicit DegenerateData(const std::string& why) : Error(ErrorKind::kData, why) {}
};

class NonFinite : public Error {
 public:
  NonFinite() : Error(ErrorKind::kData, "non-finite feature value") {}
};

// ---- pairing ----

class InsufficientProblems : public Error {
 public:
  explicit InsufficientProblems(const std::string& why) : Error(ErrorKind::kData, why) {}
};

class ImbalancedBenchmark : public Error {
 public:
  ImbalancedBenchmark(std::size_t clones, std::size_t non_clones)
      : Error(ErrorKind::kData, "benchmark is imbalanced: " + std::to_string(clones) +
                                    " clone vs " + std::to_string(non_clones) + " non_clone pairs") {}
};

// ---- providers ----

class ProviderError : public Error {
 public:
  ProviderError(int status, const std::string& excerpt)
      : Error(ErrorKind::kProvider,
              "provider error (status " + std::to_string(status) + "): " + excerpt),
        status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class AuthError : public ProviderError {
 public:
  explicit AuthError(const std::string& why) : ProviderError(401, why) {}
};

class RateLimited : public ProviderError {
 public:
  explicit RateLimited(int attempts)
      : ProviderError(429, "still rate limited after " + std::to_string(attempts) + " attempts") {}
};

class EmptyResponse : public ProviderError {
 public:
  EmptyResponse() : ProviderError(200, "provider returned empty content") {}
};

// ---- prompts ----

class MissingPrior : public Error {
 public:
  MissingPrior() : Error(ErrorKind::kUsage, "step-2 render requires step-1 outputs") {}
};

class WrongStep : public Error {
 public:
  explicit WrongStep(const std::string& why) : Error(ErrorKind::kUsage, why) {}
};

// ---- detectors / eval ----

class MissingEmbedding : public Error {
 public:
  explicit MissingEmbedding(const std::string& pair_id)
      : Error(ErrorKind::kData, "no embedding available for pair '" + pair_id + "'") {}
};

class MissingGroundTruth : public Error {
 public:
  explicit MissingGroundTruth(const std::string& pair_id)
      : Error(ErrorKind::kData, "no ground truth for pair '" + pair_id + "'") {}
};

class EmptyGrid : public Error {
 public:
  EmptyGrid() : Error(ErrorKind::kUsage, "threshold grid is empty") {}
};

class TooFewPerClass : public Error {
 public:
  TooFewPerClass(std::size_t have, std::size_t k)
      : Error(ErrorKind::kData, "class has " + std::to_string(have) + " members, fewer than k=" +
                                    std::to_string(k)) {}
};

class Interrupted : public Error {
 public:
  Interrupted() : Error(ErrorKind::kInterrupted, "interrupted") {}
};

// ---- testkit ----

class RejectionOverflow : public Error {
 public:
  explicit RejectionOverflow(const std::string& why) : Error(ErrorKind::kData, why) {}
};

}  // namespace xclone
