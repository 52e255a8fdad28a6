#pragma once

#include <stdexcept>
#include <string>

namespace dslit {

// Base for every error raised by the library. The CLI maps ConfigError to
// exit code 2 and everything else derived from Error to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a formula (nonpositive frequency, negative rate).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Target value outside what a model can reach.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

// Coherence times that no physical qubit can have (T2* > 2 T1).
class PhysicalityError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

class DispersiveRegimeError : public Error {
 public:
  DispersiveRegimeError(const std::string& what, int mode_index)
      : Error(what), mode_index_(mode_index) {}
  int mode_index() const { return mode_index_; }

 private:
  int mode_index_;
};

// Fock-space truncation too small for the states being resolved.
class CutoffError : public Error {
 public:
  using Error::Error;
};

class RankDeficiencyError : public Error {
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

}  // namespace dslit
