#pragma once

#include <stdexcept>
#include <string>

namespace cvnn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spec violates its validity rules (non-positive dimension, bad layer list, ...).
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

/// A caller contract violation (dimension mismatch, bad flag value, non-finite loss).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Requested operation is undefined for the architecture (C-RBF / FC-RBF have no
/// deep form).
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

/// Filesystem problem: missing table file, unwritable output path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Multiplication-ledger corruption: counter overflow, negative diff cell.
class LedgerError : public Error {
 public:
  using Error::Error;
};

/// Metered kernel misuse: no active phase, division by zero.
class KernelError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvnn
