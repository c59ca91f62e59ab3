#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "choiceapprox/choice_space.hpp"

namespace choiceapprox::detail {

// Single-component logit choice vectors over a space, parameterized on
// standardized features z = (p_d(x) - mean) / sd. Centering adds the same
// constant to every utility, so gamma here and beta = gamma / sd on the raw
// map produce the same choice probabilities.
class LogitKernel {
 public:
  LogitKernel(const ChoiceSpace& space, int degree, std::span<const double> eta);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t entries() const noexcept { return offsets_.back(); }
  std::size_t alternatives() const noexcept { return n_; }

  void probabilities(const double* gamma, double* out) const;

  // grad = J(gamma)^T w, where J is the Jacobian of probabilities(gamma).
  void pullback(const double* probs, const double* w, double* grad) const;

  // Weighted multinomial log-likelihood sum_e w_e log p_e(gamma) with its
  // gradient and negative Hessian (row-major dim x dim).
  double weighted_loglik(const double* gamma, const double* w, double* grad, double* neg_hessian) const;

  std::vector<double> raw_coefficients(std::span<const double> gamma) const;

  // gamma equivalent to raw coefficients beta.
  std::vector<double> from_raw(std::span<const double> beta) const;

  // Root-mean-square of each raw feature over the alternatives.
  const std::vector<double>& raw_rms() const noexcept { return rms_; }

  const std::vector<std::vector<std::size_t>>& menus() const noexcept { return menus_; }
  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }

 private:
  void utilities(const double* gamma, double* u) const;

  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> z_;  // n x dim, row-major
  std::vector<double> sd_;
  std::vector<double> rms_;
  std::vector<double> eta_;
  std::vector<std::vector<std::size_t>> menus_;
  std::vector<std::size_t> offsets_;
};

}  // namespace choiceapprox::detail
