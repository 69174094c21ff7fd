#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlb {

enum class KernelKind { constant, linear, quadratic };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

/// Downstream weight supported on [0, eta]. The built-in shapes are
/// non-negative, non-increasing and have unit mass:
///   constant   1/eta
///   linear     2(eta - x)/eta^2
///   quadratic  3(eta^2 - x^2)/(2 eta^3)
struct KernelSpec {
  KernelKind kind = KernelKind::linear;
  double eta = 1.0;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Pointwise density of the kernel; zero outside [0, eta].
double kernel_density(const KernelSpec& spec, double x);

/// Cell integrals gamma_k of the kernel on a grid of width dx, together with
/// the suffix sums tail_m = sum_{k >= m} gamma_k.
///
/// Both arrays come from closed-form antiderivatives. tail(0) is exactly 1 and
/// tail(n_eta) exactly 0, so a full stencil of a constant state reproduces the
/// state without rounding drift in the weights.
class DiscreteKernel {
 public:
  DiscreteKernel(const KernelSpec& spec, double dx);

  const KernelSpec& spec() const noexcept { return spec_; }
  double dx() const noexcept { return dx_; }
  std::size_t n_eta() const noexcept { return gamma_.size(); }

  std::span<const double> gamma() const noexcept { return gamma_; }
  /// n_eta + 1 entries; the last one is 0.
  std::span<const double> tail() const noexcept { return tail_; }

  double gamma(std::size_t k) const noexcept {
    return k < gamma_.size() ? gamma_[k] : 0.0;
  }
  /// Suffix sum from index m; 1 for m <= 0 and 0 once m >= n_eta.
  double tail_from(std::ptrdiff_t m) const noexcept;

 private:
  KernelSpec spec_;
  double dx_;
  std::vector<double> gamma_;
  std::vector<double> tail_;
};

/// Throws InvalidKernel for eta <= 0 and NonCommensurateGrid when eta/dx is
/// not an integer within 1e-9 relative tolerance.
DiscreteKernel build_discrete_kernel(const KernelSpec& spec, double dx);

}  // namespace nlb
