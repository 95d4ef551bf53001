#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cvtele {

/// Failure categories raised by the toolkit. Each maps to a stable name used
/// in CLI diagnostics.
enum class Errc {
  NonSymmetric,
  ComplexSpectrum,
  Unphysical,
  DegenerateBlock,
  NegativeParameter,
  UnphysicalChannel,
  UnphysicalState,
  UnphysicalResource,
  UnphysicalInput,
  NonPositiveNoise,
  DivergentEnergy,
  InvalidBudget,
  UniformLimit,
  NegativeLambda,
  NonPositiveLambda,
  InvalidUnravelling,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cvtele
