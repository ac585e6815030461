#ifndef TEEFHE_ERRORS_H_
#define TEEFHE_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace teefhe {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands or parameters violate a documented invariant.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A component was asked to do something its configuration cannot support.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class DeserializationError : public Error {
 public:
  DeserializationError(std::size_t offset, const std::string& what)
      : Error("deserialization failed at offset " + std::to_string(offset) +
              ": " + what),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Calls arrived in an order the protocol does not allow.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class BudgetExhaustedError : public Error {
 public:
  using Error::Error;
};

}  // namespace teefhe

#endif  // TEEFHE_ERRORS_H_
