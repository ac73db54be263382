#pragma once

#include <stdexcept>
#include <string>

namespace plate {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class MeshError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

/// Which structural assumption on the approximated source data is violated
/// when the unsmoothed (Q = id) estimator is requested.
enum class DataAssumption {
  FirstOrderVanishes,   // F_alpha = 0 for |alpha| = 1
  SecondOrderConstant,  // F_alpha piecewise constant for |alpha| = 2
  SecondOrderVanishes,  // F_alpha = 0 for |alpha| = 2 (C0IP)
  NormalLineLoadVanishes  // G_1 = 0 (C0IP)
};

const char* describe(DataAssumption a) noexcept;

class DataAssumptionError : public Error {
public:
  explicit DataAssumptionError(DataAssumption a)
      : Error(std::string("source data rejected for the unsmoothed estimator: ") + describe(a)),
        assumption_(a) {}
  [[nodiscard]] DataAssumption assumption() const noexcept { return assumption_; }

private:
  DataAssumption assumption_;
};

}  // namespace plate
