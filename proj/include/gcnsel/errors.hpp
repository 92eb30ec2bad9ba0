#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gcnsel {

// Malformed or inconsistent input data (files, dataset counts).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation produced non-finite values or failed a numerical self-check.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense eigendecomposition refused because the matrix exceeds the configured cap.
class SpectrumCapExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Runs fn, prefixing the message of any escaping library error with the
// pipeline stage name while keeping its category.
template <typename Fn>
decltype(auto) with_stage(std::string_view stage, Fn&& fn) {
  const std::string prefix = std::string(stage) + ": ";
  try {
    return fn();
  } catch (const SpectrumCapExceeded& e) {
    throw SpectrumCapExceeded(prefix + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  }
}

}  // namespace gcnsel
