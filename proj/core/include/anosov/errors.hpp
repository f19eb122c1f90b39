#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An eigensolve, factorization, or iteration produced unusable output.
class NumericalFailure : public Error {
public:
  explicit NumericalFailure(const std::string& msg) : Error("numerical failure: " + msg) {}
};

/// A matrix failed the SPD / unit-determinant / unimodularity checks.
class DegenerateElement : public Error {
public:
  explicit DegenerateElement(const std::string& msg) : Error("degenerate element: " + msg) {}
};

/// Two points are too close to define a direction or flag.
class DegenerateSegment : public Error {
public:
  explicit DegenerateSegment(const std::string& msg) : Error("degenerate segment: " + msg) {}
};

/// Cone specs passed where strict nesting was required.
class NotNested : public Error {
public:
  explicit NotNested(const std::string& msg) : Error("cones not nested: " + msg) {}
};

/// A segment lacked the eigenvalue gap needed at a pattern dimension.
class NotRegular : public Error {
public:
  NotRegular(int dim, const std::string& msg)
      : Error("not regular at dimension " + std::to_string(dim) + ": " + msg), dim_(dim) {}
  [[nodiscard]] int dim() const noexcept { return dim_; }

private:
  int dim_;
};

/// Face patterns (or pattern-bound data) disagree.
class PatternMismatch : public Error {
public:
  explicit PatternMismatch(const std::string& msg) : Error("pattern mismatch: " + msg) {}
};

/// A flag pair that had to be transverse is not.
class NotAntipodal : public Error {
public:
  NotAntipodal(int i, int j, const std::string& msg)
      : Error("flags not antipodal (" + std::to_string(i) + ", " + std::to_string(j) + "): " + msg),
        i_(i), j_(j) {}
  [[nodiscard]] int first_index() const noexcept { return i_; }
  [[nodiscard]] int second_index() const noexcept { return j_; }

private:
  int i_;
  int j_;
};

/// An iterative solver hit its iteration cap before reaching tolerance.
class NoConvergence : public Error {
public:
  NoConvergence(int iterations, const std::string& msg)
      : Error("no convergence after " + std::to_string(iterations) + " iterations: " + msg),
        iterations_(iterations) {}
  [[nodiscard]] int iterations() const noexcept { return iterations_; }

private:
  int iterations_;
};

/// A point that had to lie on a parallel set does not.
class NotOnParallelSet : public Error {
public:
  explicit NotOnParallelSet(const std::string& msg) : Error("not on parallel set: " + msg) {}
};

/// Replacement patch endpoints do not match the host path.
class EndpointMismatch : public Error {
public:
  explicit EndpointMismatch(const std::string& msg) : Error("endpoint mismatch: " + msg) {}
};

/// A parameter interval is out of range or inverted.
class RangeError : public Error {
public:
  explicit RangeError(const std::string& msg) : Error("range error: " + msg) {}
};

/// An element lacks the eigenvalue-modulus gaps needed for powering.
class NotProximal : public Error {
public:
  NotProximal(int index, const std::string& msg)
      : Error("element " + std::to_string(index) + " not proximal: " + msg), index_(index) {}
  [[nodiscard]] int index() const noexcept { return index_; }

private:
  int index_;
};

/// Configuration file is missing, malformed, or inconsistent.
class ConfigError : public Error {
public:
  ConfigError(const std::string& path, const std::string& msg)
      : Error("config error in " + path + ": " + msg), path_(path) {}
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

/// A cone radius or gap parameter is outside its admissible interval.
class InvalidGap : public Error {
public:
  explicit InvalidGap(const std::string& msg) : Error("invalid gap: " + msg) {}
};

}  // namespace anosov
