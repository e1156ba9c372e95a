#pragma once

#include <stdexcept>
#include <string>

namespace inkwarp {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class DecodeError : public Error {
public:
  using Error::Error;
};

/// A transform or elastic spec violates its invariants, or its text form
/// failed to parse.
class InvalidSpec : public Error {
public:
  using Error::Error;
};

class NonSquareInput : public Error {
public:
  using Error::Error;
};

class InvalidSigma : public Error {
public:
  using Error::Error;
};

/// Augmentation plan or its originals are unusable.
class PlanError : public Error {
public:
  using Error::Error;
};

class MissingStage : public Error {
public:
  using Error::Error;
};

class EmptyAfterCuration : public Error {
public:
  using Error::Error;
};

/// Accept/reject lists cannot be applied to the manifest.
class CurationError : public Error {
public:
  using Error::Error;
};

class UnknownId : public CurationError {
public:
  using CurationError::CurationError;
};

/// The same id appears in both the accept and the reject list.
class CurationConflict : public CurationError {
public:
  using CurationError::CurationError;
};

class SpawnError : public Error {
public:
  using Error::Error;
};

class Timeout : public Error {
public:
  using Error::Error;
};

/// A stage command ran but left no usable canonical image behind.
class BadOutput : public Error {
public:
  using Error::Error;
};

} // namespace inkwarp
