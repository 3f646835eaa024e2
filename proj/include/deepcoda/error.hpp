#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deepcoda {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or data that violate an operation's preconditions.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A non-finite value appeared in an intermediate computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

class TrainingDiverged : public NumericError {
 public:
  explicit TrainingDiverged(std::size_t epoch)
      : NumericError("training diverged: non-finite loss at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

class UnsupportedHead : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InsufficientSamples : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class StratificationError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

}  // namespace deepcoda
