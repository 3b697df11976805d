#pragma once

#include <stdexcept>
#include <string>

namespace nilhecke {

// Error taxonomy shared by all modules.  Each condition that callers may
// want to distinguish gets its own type; everything derives from Error so
// coarse handlers still work.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotAUnit : Error {
  explicit NotAUnit(const std::string& m = "element is not a unit") : Error(m) {}
};
struct NotInvertible : Error {
  explicit NotInvertible(const std::string& m = "matrix is not invertible") : Error(m) {}
};
struct PrecisionExhausted : Error {
  explicit PrecisionExhausted(const std::string& m = "working precision exhausted") : Error(m) {}
};
struct PrecisionDivergence : Error {
  explicit PrecisionDivergence(const std::string& m = "result changed under precision increase")
      : Error(m) {}
};
struct UnsupportedGenus : Error {
  explicit UnsupportedGenus(const std::string& m = "backend genus not supported") : Error(m) {}
};
struct WindowTooSmall : Error {
  explicit WindowTooSmall(const std::string& m = "dominating divisor too small") : Error(m) {}
};
struct WindowTooLarge : Error {
  explicit WindowTooLarge(const std::string& m = "window exceeds resource guard") : Error(m) {}
};
struct OutOfWindow : Error {
  explicit OutOfWindow(const std::string& m = "bundle class outside window") : Error(m) {}
};
struct InteriorEmpty : Error {
  explicit InteriorEmpty(const std::string& m = "window interior is empty") : Error(m) {}
};
struct WindowInsufficient : Error {
  explicit WindowInsufficient(const std::string& m = "dimension not stable under window growth")
      : Error(m) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& m = "dimension mismatch") : Error(m) {}
};
struct CharacteristicTwo : Error {
  explicit CharacteristicTwo(const std::string& m = "operation requires odd characteristic")
      : Error(m) {}
};
struct AlphaIsSquare : Error {
  explicit AlphaIsSquare(const std::string& m = "alpha is a square") : Error(m) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(m) {}
};

}  // namespace nilhecke
