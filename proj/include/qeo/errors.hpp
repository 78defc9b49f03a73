#ifndef QEO_ERRORS_HPP
#define QEO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qeo {

// Malformed input: wrong shape, non-Hermitian, non-unit, bad degree.
class StructuralError : public std::invalid_argument {
 public:
  explicit StructuralError(const std::string& what) : std::invalid_argument(what) {}
};

// An algorithm failed to converge or lost too much precision.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Text input (polynomials, matrices, tables) could not be parsed.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qeo

#endif  // QEO_ERRORS_HPP
