#include "cvtele/error.hpp"

namespace cvtele {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonSymmetric: return "NonSymmetric";
    case Errc::ComplexSpectrum: return "ComplexSpectrum";
    case Errc::Unphysical: return "Unphysical";
    case Errc::DegenerateBlock: return "DegenerateBlock";
    case Errc::NegativeParameter: return "NegativeParameter";
    case Errc::UnphysicalChannel: return "UnphysicalChannel";
    case Errc::UnphysicalState: return "UnphysicalState";
    case Errc::UnphysicalResource: return "UnphysicalResource";
    case Errc::UnphysicalInput: return "UnphysicalInput";
    case Errc::NonPositiveNoise: return "NonPositiveNoise";
    case Errc::DivergentEnergy: return "DivergentEnergy";
    case Errc::InvalidBudget: return "InvalidBudget";
    case Errc::UniformLimit: return "UniformLimit";
    case Errc::NegativeLambda: return "NegativeLambda";
    case Errc::NonPositiveLambda: return "NonPositiveLambda";
    case Errc::InvalidUnravelling: return "InvalidUnravelling";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace cvtele
