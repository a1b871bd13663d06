#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tomokin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: invalid axis, zero frame, malformed spec.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double measured)
      : Error(what), measured_(measured) {}
  double measured() const { return measured_; }

 private:
  double measured_;
};

class AccuracyError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class InconsistencyError : public Error {
 public:
  InconsistencyError(const std::string& what, double spread)
      : Error(what), spread_(spread) {}
  double spread() const { return spread_; }

 private:
  double spread_;
};

class CapabilityError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class InversionQualityError : public Error {
 public:
  InversionQualityError(const std::string& what, double imag_residue,
                        double min_value)
      : Error(what), imag_residue_(imag_residue), min_value_(min_value) {}
  double imag_residue() const { return imag_residue_; }
  double min_value() const { return min_value_; }

 private:
  double imag_residue_;
  double min_value_;
};

class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, double fraction_lost)
      : Error(what), fraction_lost_(fraction_lost) {}
  double fraction_lost() const { return fraction_lost_; }

 private:
  double fraction_lost_;
};

class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class BoxSizeError : public Error {
 public:
  BoxSizeError(const std::string& what, double magnitude)
      : Error(what), magnitude_(magnitude) {}
  double magnitude() const { return magnitude_; }

 private:
  double magnitude_;
};

}  // namespace tomokin
