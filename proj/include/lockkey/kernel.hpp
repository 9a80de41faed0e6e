#pragma once

#include <string_view>

namespace lockkey {

enum class KernelFamily {
  GaussianAttractive,             // -A exp(-r^2 / (2 w^2))
  InverseMultiquadricAttractive,  // -A / sqrt(r^2 + w^2)
};

std::string_view to_string(KernelFamily family);

/// Accepts "gaussian" / "inverse_multiquadric" (and the enum spellings).
KernelFamily parse_kernel_family(std::string_view name);

/// Smooth radial interaction kernel R(r).
///
/// Both families are negatives of positive-definite radial functions, so
/// every weighted Gram matrix [w_a R(|x_a - x_b|) w_b] over distinct points
/// is negative definite. Values are strictly negative and their magnitude
/// is non-increasing in r.
class Kernel {
 public:
  Kernel(KernelFamily family, double amplitude, double width);

  KernelFamily family() const { return family_; }
  double amplitude() const { return amplitude_; }
  double width() const { return width_; }

  /// R(r) without argument validation; r must be >= 0.
  double operator()(double r) const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  KernelFamily family_;
  double amplitude_;
  double width_;
};

/// R(r); throws InputError for negative or non-finite r.
double eval_kernel(const Kernel& kernel, double r);

}  // namespace lockkey
