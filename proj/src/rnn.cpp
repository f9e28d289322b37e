#include "evac/rnn.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace evac::cpn {

namespace {
constexpr double kMaxExcitation = 1.0 - 1e-12;
}

RnnDecider::RnnDecider(std::size_t neurons, RnnParams params)
    : n_(neurons),
      params_(params),
      w_plus_(neurons, 1.0),
      w_minus_(neurons, 1.0),
      lambda_plus_(neurons, params.external_excitation),
      lambda_minus_(neurons, 0.0),
      q_(neurons, 0.0) {
  if (neurons == 0) throw std::invalid_argument("decider needs at least one neuron");
  for (std::size_t i = 0; i < n_; ++i) {
    w_plus_(i, i) = 0.0;
    w_minus_(i, i) = 0.0;
  }
  solve();
}

RnnDecider::RnnDecider(Matrix excitatory, Matrix inhibitory,
                       std::vector<double> external_excitation,
                       std::vector<double> external_inhibition, double threshold,
                       RnnParams params)
    : n_(excitatory.size()),
      params_(params),
      w_plus_(std::move(excitatory)),
      w_minus_(std::move(inhibitory)),
      lambda_plus_(std::move(external_excitation)),
      lambda_minus_(std::move(external_inhibition)),
      q_(n_, 0.0),
      threshold_(threshold),
      scaled_(true) {
  if (n_ == 0 || w_minus_.size() != n_ || lambda_plus_.size() != n_ ||
      lambda_minus_.size() != n_) {
    throw std::invalid_argument("inconsistent network dimensions");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    w_plus_(i, i) = 0.0;
    w_minus_(i, i) = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (w_plus_(i, j) < 0.0 || w_minus_(i, j) < 0.0) {
        throw std::invalid_argument("weights must be non-negative");
      }
    }
  }
  solve();
}

double RnnDecider::firing_rate(std::size_t neuron) const {
  double r = 0.0;
  for (std::size_t j = 0; j < n_; ++j) r += w_plus_(neuron, j) + w_minus_(neuron, j);
  return r;
}

std::size_t RnnDecider::best(std::span<const char> allowed) const {
  std::size_t pick = npos;
  for (std::size_t i = 0; i < n_; ++i) {
    if (!allowed[i]) continue;
    if (pick == npos || q_[i] > q_[pick]) pick = i;
  }
  return pick;
}

void RnnDecider::reward(std::size_t chosen, double reward) {
  if (chosen >= n_) throw std::out_of_range("no such neuron");
  if (!(reward > 0.0) || !std::isfinite(reward)) {
    throw std::invalid_argument("reward must be positive and finite");
  }
  if (!scaled_) {
    // q is invariant under a common scaling of weights and external inputs,
    // so adopting the first reward's magnitude changes no decision.
    for (std::size_t i = 0; i < n_; ++i) {
      lambda_plus_[i] *= reward;
      lambda_minus_[i] *= reward;
      for (std::size_t j = 0; j < n_; ++j) {
        w_plus_(i, j) *= reward;
        w_minus_(i, j) *= reward;
      }
    }
    scaled_ = true;
  }

  const double previous = threshold_;
  threshold_ = params_.smoothing * threshold_ + (1.0 - params_.smoothing) * reward;
  if (n_ == 1) return;

  std::vector<double> rate_before(n_);
  for (std::size_t i = 0; i < n_; ++i) rate_before[i] = firing_rate(i);

  const double share = reward / static_cast<double>(n_ - 1);
  Matrix& toward_chosen = reward >= previous ? w_plus_ : w_minus_;
  Matrix& toward_others = reward >= previous ? w_minus_ : w_plus_;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i != chosen) toward_chosen(i, chosen) += reward;
    for (std::size_t k = 0; k < n_; ++k) {
      if (k != chosen && k != i) toward_others(i, k) += share;
    }
  }

  for (std::size_t i = 0; i < n_; ++i) {
    const double after = firing_rate(i);
    if (after <= 0.0 || rate_before[i] <= 0.0) continue;
    const double scale = rate_before[i] / after;
    for (std::size_t j = 0; j < n_; ++j) {
      w_plus_(i, j) *= scale;
      w_minus_(i, j) *= scale;
    }
  }
  solve();
}

void RnnDecider::solve() {
  if (n_ == 1) {
    q_[0] = 0.5;
    last_iterations_ = 0;
    return;
  }
  std::vector<double> rate(n_);
  for (std::size_t i = 0; i < n_; ++i) rate[i] = firing_rate(i);
  std::vector<double> next(n_);
  int iter = 0;
  for (; iter < params_.fixed_point_max_iterations; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double excite = lambda_plus_[i];
      double inhibit = lambda_minus_[i];
      for (std::size_t j = 0; j < n_; ++j) {
        excite += q_[j] * w_plus_(j, i);
        inhibit += q_[j] * w_minus_(j, i);
      }
      const double denom = rate[i] + inhibit;
      const double target = denom > 0.0 ? std::min(kMaxExcitation, excite / denom) : kMaxExcitation;
      next[i] = (1.0 - params_.damping) * q_[i] + params_.damping * target;
      change = std::max(change, std::abs(next[i] - q_[i]));
    }
    q_.swap(next);
    if (change < 0.01 * params_.fixed_point_tolerance) {
      ++iter;
      break;
    }
  }
  last_iterations_ = iter;
  check_invariants();
}

void RnnDecider::check_invariants() const {
#ifndef NDEBUG
  for (std::size_t i = 0; i < n_; ++i) {
    assert(q_[i] >= 0.0 && q_[i] < 1.0);
    for (std::size_t j = 0; j < n_; ++j) assert(w_plus_(i, j) >= 0.0 && w_minus_(i, j) >= 0.0);
  }
#endif
}

}  // namespace evac::cpn
