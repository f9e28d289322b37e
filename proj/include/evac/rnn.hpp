#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace evac::cpn {

/// Square matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  std::size_t size() const { return n_; }
  double& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
  double operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct RnnParams {
  double smoothing = 0.8;               // threshold memory a
  double external_excitation = 1.0;     // Lambda relative to the initial weight
  double fixed_point_tolerance = 1e-6;
  int fixed_point_max_iterations = 200;
  double damping = 0.5;                 // share of the new iterate taken per step
};

/// Recurrent random neural network with one neuron per outgoing choice,
/// trained by reinforcement. Neuron i's excitation probability is
///
///   q_i = lambda+_i / (r_i + lambda-_i),
///   lambda+_i = Lambda_i + sum_j q_j w+(j,i),  lambda-_i = lambda_i + sum_j q_j w-(j,i),
///
/// with firing rate r_i = sum_j (w+(i,j) + w-(i,j)). The neuron with the
/// largest q is the preferred choice.
class RnnDecider {
 public:
  /// Symmetric network; weights take the scale of the first reward.
  explicit RnnDecider(std::size_t neurons, RnnParams params = {});

  /// Network with explicit weights (diagonals are ignored).
  RnnDecider(Matrix excitatory, Matrix inhibitory, std::vector<double> external_excitation,
             std::vector<double> external_inhibition, double threshold, RnnParams params = {});

  std::size_t size() const { return n_; }
  std::span<const double> excitation() const { return q_; }
  double threshold() const { return threshold_; }
  const Matrix& excitatory() const { return w_plus_; }
  const Matrix& inhibitory() const { return w_minus_; }
  std::span<const double> external_excitation() const { return lambda_plus_; }
  std::span<const double> external_inhibition() const { return lambda_minus_; }
  double firing_rate(std::size_t neuron) const;
  int last_iterations() const { return last_iterations_; }

  /// Neuron with maximal q among those `allowed` (lowest index on ties);
  /// npos when nothing is allowed.
  std::size_t best(std::span<const char> allowed) const;

  /// Reinforcement step for the decision `chosen` that earned `reward` (> 0).
  /// A reward at or above the previous threshold strengthens the excitatory
  /// weights into `chosen` and the inhibition of the others; a smaller one
  /// does the opposite. Firing rates are then restored and q recomputed.
  void reward(std::size_t chosen, double reward);

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  void solve();
  void check_invariants() const;

  std::size_t n_;
  RnnParams params_;
  Matrix w_plus_;
  Matrix w_minus_;
  std::vector<double> lambda_plus_;
  std::vector<double> lambda_minus_;
  std::vector<double> q_;
  double threshold_ = 0.0;
  bool scaled_ = false;
  int last_iterations_ = 0;
};

}  // namespace evac::cpn
