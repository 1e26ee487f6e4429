#pragma once

#include <stdexcept>
#include <string>

namespace spinenav {

/// Error categories drive the CLI exit code: validation/I-O problems exit
/// with 1, numerical failures (rank-deficient data, lost correspondences,
/// degenerate geometry) exit with 2.
enum class ErrorKind {
  InsufficientData,
  DegenerateMotion,
  SingularMatrix,
  NoPath,
  AmbiguousPath,
  CollinearPoints,
  NoCorrespondences,
  InvalidPlan,
  InvalidParams,
  NameMismatch,
  IoError,
  ParseError,
};

const char* to_string(ErrorKind kind);

/// True for errors caused by the numerical content of otherwise well-formed
/// inputs, as opposed to malformed inputs or I/O failures.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return is_numerical(kind_) ? 2 : 1; }

 private:
  ErrorKind kind_;
};

struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& m) : Error(ErrorKind::InsufficientData, m) {}
};
struct DegenerateMotionError : Error {
  explicit DegenerateMotionError(const std::string& m) : Error(ErrorKind::DegenerateMotion, m) {}
};
struct SingularMatrixError : Error {
  explicit SingularMatrixError(const std::string& m) : Error(ErrorKind::SingularMatrix, m) {}
};
struct NoPathError : Error {
  explicit NoPathError(const std::string& m) : Error(ErrorKind::NoPath, m) {}
};
struct AmbiguousPathError : Error {
  explicit AmbiguousPathError(const std::string& m) : Error(ErrorKind::AmbiguousPath, m) {}
};
struct CollinearPointsError : Error {
  explicit CollinearPointsError(const std::string& m) : Error(ErrorKind::CollinearPoints, m) {}
};
struct NoCorrespondencesError : Error {
  explicit NoCorrespondencesError(const std::string& m) : Error(ErrorKind::NoCorrespondences, m) {}
};
struct InvalidPlanError : Error {
  explicit InvalidPlanError(const std::string& m) : Error(ErrorKind::InvalidPlan, m) {}
};
struct InvalidParamsError : Error {
  explicit InvalidParamsError(const std::string& m) : Error(ErrorKind::InvalidParams, m) {}
};
struct NameMismatchError : Error {
  explicit NameMismatchError(const std::string& m) : Error(ErrorKind::NameMismatch, m) {}
};
struct IoFailure : Error {
  explicit IoFailure(const std::string& m) : Error(ErrorKind::IoError, m) {}
};
struct ParseFailure : Error {
  explicit ParseFailure(const std::string& m) : Error(ErrorKind::ParseError, m) {}
};

}  // namespace spinenav
