#pragma once

#include <stdexcept>
#include <string>

namespace deflectstats {

// Error taxonomy mirrored by the CLI exit codes: parse/validation/io
// problems map to exit code 2, numerical failures to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text: bad header, truncated row, non-numeric cell.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A domain invariant or precondition was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical routine failed: non-convergence, rank deficiency,
// ill-conditioning.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace deflectstats
