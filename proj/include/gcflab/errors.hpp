#pragma once

#include <stdexcept>
#include <string>

namespace gcflab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter point outside the open domain, or FD stencil leaving it.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// |Phi_u x Phi_v| below the immersion threshold.
class NonImmersive : public Error {
 public:
  using Error::Error;
};

/// Frame quantities requested at a point with kappa1 ~ kappa2.
class UmbilicPoint : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class NoPositiveRoot : public Error {
 public:
  using Error::Error;
};

// symbolic engine
class DivisionByZeroPoly : public Error {
 public:
  using Error::Error;
};

class MissingImage : public Error {
 public:
  using Error::Error;
};

class NotDivisible : public Error {
 public:
  using Error::Error;
};

class UnknownCase : public Error {
 public:
  using Error::Error;
};

// profile shooting
class ParallelCurvatureZero : public Error {
 public:
  using Error::Error;
};

class StiffnessFailure : public Error {
 public:
  using Error::Error;
};

class EventLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace gcflab
