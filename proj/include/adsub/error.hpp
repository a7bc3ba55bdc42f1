#pragma once

#include <stdexcept>
#include <string>

namespace adsub {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conditioning on evidence that no realization with positive mass supports.
class ZeroProbabilityEvidence : public Error {
 public:
  using Error::Error;
};

// Exact enumeration requested on a support larger than the enumeration cap.
class ExactModeUnavailable : public Error {
 public:
  using Error::Error;
};

// Oracle or checker invoked beyond its hard size caps.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

// A policy proposed an infeasible or already-selected item.
class PolicyViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace adsub
