#include "logit_kernel.hpp"

#include <algorithm>
#include <cmath>

#include "choiceapprox/error.hpp"
#include "choiceapprox/features.hpp"

namespace choiceapprox::detail {

LogitKernel::LogitKernel(const ChoiceSpace& space, int degree, std::span<const double> eta)
    : n_(space.size()), menus_(space.menus()) {
  const FeatureMap map(degree, space.k());
  const auto feats = map.evaluate(space);
  dim_ = map.dimension();
  if (!eta.empty() && eta.size() != n_) throw UsageError("fixed effects have the wrong length");
  eta_.assign(n_, 0.0);
  std::copy(eta.begin(), eta.end(), eta_.begin());

  sd_.assign(dim_, 0.0);
  rms_.assign(dim_, 0.0);
  z_.assign(n_ * dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) {
    double mean = 0.0;
    for (std::size_t x = 0; x < n_; ++x) mean += feats[x][j];
    mean /= static_cast<double>(n_);
    double var = 0.0, sq = 0.0;
    for (std::size_t x = 0; x < n_; ++x) sq += feats[x][j] * feats[x][j];
    rms_[j] = std::sqrt(sq / static_cast<double>(n_));
    for (std::size_t x = 0; x < n_; ++x) var += (feats[x][j] - mean) * (feats[x][j] - mean);
    sd_[j] = std::sqrt(var / static_cast<double>(n_));
    if (sd_[j] > 0.0)
      for (std::size_t x = 0; x < n_; ++x) z_[x * dim_ + j] = (feats[x][j] - mean) / sd_[j];
  }
  offsets_.assign(1, 0);
  for (const auto& m : menus_) offsets_.push_back(offsets_.back() + m.size());
}

void LogitKernel::utilities(const double* gamma, double* u) const {
  for (std::size_t x = 0; x < n_; ++x) {
    double v = eta_[x];
    const double* z = &z_[x * dim_];
    for (std::size_t j = 0; j < dim_; ++j) v += gamma[j] * z[j];
    u[x] = v;
  }
}

void LogitKernel::probabilities(const double* gamma, double* out) const {
  double u[64];
  std::vector<double> heap;
  double* up = u;
  if (n_ > 64) {
    heap.resize(n_);
    up = heap.data();
  }
  utilities(gamma, up);
  for (std::size_t m = 0; m < menus_.size(); ++m) {
    const auto& menu = menus_[m];
    double* p = out + offsets_[m];
    double top = -INFINITY;
    for (std::size_t x : menu) top = std::max(top, up[x]);
    double sum = 0.0;
    for (std::size_t i = 0; i < menu.size(); ++i) {
      p[i] = std::exp(up[menu[i]] - top);
      sum += p[i];
    }
    const double inv = 1.0 / sum;
    for (std::size_t i = 0; i < menu.size(); ++i) p[i] *= inv;
  }
}

void LogitKernel::pullback(const double* probs, const double* w, double* grad) const {
  std::fill(grad, grad + dim_, 0.0);
  for (std::size_t m = 0; m < menus_.size(); ++m) {
    const auto& menu = menus_[m];
    const double* p = probs + offsets_[m];
    const double* wm = w + offsets_[m];
    double wbar = 0.0;
    for (std::size_t i = 0; i < menu.size(); ++i) wbar += p[i] * wm[i];
    for (std::size_t i = 0; i < menu.size(); ++i) {
      const double c = p[i] * (wm[i] - wbar);
      if (c == 0.0) continue;
      const double* z = &z_[menu[i] * dim_];
      for (std::size_t j = 0; j < dim_; ++j) grad[j] += c * z[j];
    }
  }
}

double LogitKernel::weighted_loglik(const double* gamma, const double* w, double* grad, double* neg_hessian) const {
  std::vector<double> u(n_);
  utilities(gamma, u.data());
  if (grad) std::fill(grad, grad + dim_, 0.0);
  if (neg_hessian) std::fill(neg_hessian, neg_hessian + dim_ * dim_, 0.0);
  std::vector<double> p;
  std::vector<double> zbar(dim_);
  double total = 0.0;
  for (std::size_t m = 0; m < menus_.size(); ++m) {
    const auto& menu = menus_[m];
    const double* wm = w + offsets_[m];
    double weight = 0.0;
    for (std::size_t i = 0; i < menu.size(); ++i) weight += wm[i];
    if (weight == 0.0) continue;
    double top = -INFINITY;
    for (std::size_t x : menu) top = std::max(top, u[x]);
    p.resize(menu.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < menu.size(); ++i) {
      p[i] = std::exp(u[menu[i]] - top);
      sum += p[i];
    }
    const double lse = top + std::log(sum);
    for (std::size_t i = 0; i < menu.size(); ++i) {
      p[i] /= sum;
      if (wm[i] > 0.0) total += wm[i] * (u[menu[i]] - lse);
    }
    if (!grad) continue;
    std::fill(zbar.begin(), zbar.end(), 0.0);
    for (std::size_t i = 0; i < menu.size(); ++i) {
      const double* z = &z_[menu[i] * dim_];
      for (std::size_t j = 0; j < dim_; ++j) zbar[j] += p[i] * z[j];
    }
    for (std::size_t i = 0; i < menu.size(); ++i) {
      const double* z = &z_[menu[i] * dim_];
      for (std::size_t j = 0; j < dim_; ++j) grad[j] += wm[i] * (z[j] - zbar[j]);
      if (!neg_hessian) continue;
      for (std::size_t a = 0; a < dim_; ++a)
        for (std::size_t b = 0; b < dim_; ++b)
          neg_hessian[a * dim_ + b] += weight * p[i] * (z[a] - zbar[a]) * (z[b] - zbar[b]);
    }
  }
  return total;
}

std::vector<double> LogitKernel::raw_coefficients(std::span<const double> gamma) const {
  std::vector<double> beta(dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) beta[j] = sd_[j] > 0.0 ? gamma[j] / sd_[j] : 0.0;
  return beta;
}

std::vector<double> LogitKernel::from_raw(std::span<const double> beta) const {
  std::vector<double> gamma(dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) gamma[j] = beta[j] * sd_[j];
  return gamma;
}

}  // namespace choiceapprox::detail
