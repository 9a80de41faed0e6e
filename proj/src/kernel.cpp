#include "lockkey/kernel.hpp"

#include <cmath>
#include <string>

#include "lockkey/errors.hpp"

namespace lockkey {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::GaussianAttractive:
      return "gaussian";
    case KernelFamily::InverseMultiquadricAttractive:
      return "inverse_multiquadric";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "gaussian" || name == "GaussianAttractive") {
    return KernelFamily::GaussianAttractive;
  }
  if (name == "inverse_multiquadric" || name == "InverseMultiquadricAttractive") {
    return KernelFamily::InverseMultiquadricAttractive;
  }
  throw InputError("unknown kernel family '" + std::string(name) +
                   "' (expected gaussian or inverse_multiquadric)");
}

Kernel::Kernel(KernelFamily family, double amplitude, double width)
    : family_(family), amplitude_(amplitude), width_(width) {
  if (!(std::isfinite(amplitude) && amplitude > 0.0)) {
    throw InputError("kernel amplitude must be positive and finite");
  }
  if (!(std::isfinite(width) && width > 0.0)) {
    throw InputError("kernel width must be positive and finite");
  }
}

double Kernel::operator()(double r) const {
  switch (family_) {
    case KernelFamily::GaussianAttractive:
      return -amplitude_ * std::exp(-(r * r) / (2.0 * width_ * width_));
    case KernelFamily::InverseMultiquadricAttractive:
      return -amplitude_ / std::sqrt(r * r + width_ * width_);
  }
  return 0.0;
}

double eval_kernel(const Kernel& kernel, double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw InputError("kernel distance must be finite and non-negative");
  }
  return kernel(r);
}

}  // namespace lockkey
