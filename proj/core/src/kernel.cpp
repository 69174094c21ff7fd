#include "nlbuffer/kernel.hpp"

#include <cmath>

#include "nlbuffer/errors.hpp"

namespace nlb {

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::constant:
      return "constant";
    case KernelKind::linear:
      return "linear";
    case KernelKind::quadratic:
      return "quadratic";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "constant") return KernelKind::constant;
  if (name == "linear") return KernelKind::linear;
  if (name == "quadratic") return KernelKind::quadratic;
  throw InvalidKernel("unknown kernel kind '" + std::string(name) + "'");
}

double kernel_density(const KernelSpec& spec, double x) {
  const double eta = spec.eta;
  if (!(eta > 0.0) || x < 0.0 || x > eta) return 0.0;
  switch (spec.kind) {
    case KernelKind::constant:
      return 1.0 / eta;
    case KernelKind::linear:
      return 2.0 * (eta - x) / (eta * eta);
    case KernelKind::quadratic:
      return 3.0 * (eta * eta - x * x) / (2.0 * eta * eta * eta);
  }
  return 0.0;
}

namespace {

// Cell integrals and suffix sums in the normalized variable s = x/eta with
// s_k = k/N. Numerators are integers, exact in double for N below ~2e5, which
// keeps gamma exactly monotone and tail(0) == 1, tail(N) == 0.
double cell_weight(KernelKind kind, double n, double k) {
  switch (kind) {
    case KernelKind::constant:
      return 1.0 / n;
    case KernelKind::linear:
      return (2.0 * n - 2.0 * k - 1.0) / (n * n);
    case KernelKind::quadratic:
      return (3.0 * n * n - 3.0 * k * k - 3.0 * k - 1.0) / (2.0 * n * n * n);
  }
  return 0.0;
}

double suffix_mass(KernelKind kind, double n, double m) {
  switch (kind) {
    case KernelKind::constant:
      return (n - m) / n;
    case KernelKind::linear:
      return ((n - m) * (n - m)) / (n * n);
    case KernelKind::quadratic:
      return (2.0 * n * n * n - 3.0 * m * n * n + m * m * m) /
             (2.0 * n * n * n);
  }
  return 0.0;
}

}  // namespace

DiscreteKernel::DiscreteKernel(const KernelSpec& spec, double dx)
    : spec_(spec), dx_(dx) {
  if (!(spec.eta > 0.0) || !std::isfinite(spec.eta)) {
    throw InvalidKernel("kernel range eta must be positive and finite");
  }
  if (!(dx > 0.0)) {
    throw NonCommensurateGrid("cell width must be positive");
  }
  const double ratio = spec.eta / dx;
  const double cells = std::round(ratio);
  if (cells < 1.0 || std::abs(ratio - cells) > 1e-9 * ratio) {
    throw NonCommensurateGrid("eta = " + std::to_string(spec.eta) +
                              " is not an integer multiple of dx = " +
                              std::to_string(dx));
  }
  const auto n_eta = static_cast<std::size_t>(cells);
  gamma_.resize(n_eta);
  tail_.resize(n_eta + 1);
  for (std::size_t k = 0; k < n_eta; ++k) {
    gamma_[k] = cell_weight(spec.kind, cells, static_cast<double>(k));
    tail_[k] = suffix_mass(spec.kind, cells, static_cast<double>(k));
  }
  tail_[0] = 1.0;
  tail_[n_eta] = 0.0;
}

double DiscreteKernel::tail_from(std::ptrdiff_t m) const noexcept {
  if (m <= 0) return 1.0;
  if (static_cast<std::size_t>(m) >= gamma_.size()) return 0.0;
  return tail_[static_cast<std::size_t>(m)];
}

DiscreteKernel build_discrete_kernel(const KernelSpec& spec, double dx) {
  return DiscreteKernel(spec, dx);
}

}  // namespace nlb
