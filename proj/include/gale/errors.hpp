#pragma once

#include <stdexcept>
#include <string>

namespace gale {

// Base of every error thrown by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidValues : public Error {
 public:
  using Error::Error;
};

class InvalidWeights : public Error {
 public:
  using Error::Error;
};

class InvalidDensity : public Error {
 public:
  using Error::Error;
};

class InvalidInterval : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class NotSparse : public Error {
 public:
  using Error::Error;
};

// A solver invariant that a valid (KKM / Sperner) instance guarantees did not hold.
class InvariantBroken : public Error {
 public:
  using Error::Error;
};

class NoPanchromaticCell : public Error {
 public:
  using Error::Error;
};

class MissingWitnesses : public Error {
 public:
  using Error::Error;
};

class TooManySubsets : public Error {
 public:
  using Error::Error;
};

class NoSuchReduction : public Error {
 public:
  using Error::Error;
};

class NotRenderable : public Error {
 public:
  using Error::Error;
};

// Malformed instance or solution file; the message names the offending field.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace gale
