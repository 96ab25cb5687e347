#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wmcs {

// Base of every error raised by the library. Subclasses fall into two
// families: statistical degeneracies (the data cannot support the request)
// and usage errors (the request itself is malformed).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StatisticalError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class ParameterDomainError : public UsageError {
 public:
  using UsageError::UsageError;
};

class NotAvailableError : public UsageError {
 public:
  using UsageError::UsageError;
};

class DomainError : public UsageError {
 public:
  using UsageError::UsageError;
};

class DimensionError : public UsageError {
 public:
  using UsageError::UsageError;
};

class ParseError : public UsageError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : UsageError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : UsageError(what) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

class InsufficientDataError : public StatisticalError {
 public:
  using StatisticalError::StatisticalError;
};

// Thrown when no optimizer start reached a finite objective. Carries the best
// point seen (possibly empty when nothing was ever finite).
class NonConvergenceError : public StatisticalError {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> best)
      : StatisticalError(what), best_(std::move(best)) {}
  const std::vector<double>& best_so_far() const { return best_; }

 private:
  std::vector<double> best_;
};

class DegenerateVarianceError : public StatisticalError {
 public:
  using StatisticalError::StatisticalError;
};

class DegenerateMixtureError : public StatisticalError {
 public:
  using StatisticalError::StatisticalError;
};

class QuadratureError : public StatisticalError {
 public:
  using StatisticalError::StatisticalError;
};

}  // namespace wmcs
