#include "stein_pairs/discrete_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stein_pairs/error.hpp"
#include "stein_pairs/numerics.hpp"

namespace stein_pairs {

DiscreteLaw::DiscreteLaw(std::vector<double> atoms, std::vector<double> probabilities) {
  if (atoms.size() != probabilities.size())
    throw ParameterError("DiscreteLaw: atoms and probabilities differ in length");
  if (atoms.empty()) throw ParameterError("DiscreteLaw: empty support");

  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });

  for (std::size_t idx : order) {
    const double x = atoms[idx];
    const double p = probabilities[idx];
    if (!std::isfinite(x) || !std::isfinite(p) || p < 0.0)
      throw ParameterError("DiscreteLaw: atoms must be finite with nonnegative mass");
    if (!atoms_.empty() && atoms_.back() == x) {
      probabilities_.back() += p;
    } else {
      atoms_.push_back(x);
      probabilities_.push_back(p);
    }
  }

  cumulative_.resize(atoms_.size());
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = 0; k < probabilities_.size(); ++k) {
    const double p = probabilities_[k];
    const double t = sum + p;
    carry += sum >= p ? (sum - t) + p : (p - t) + sum;
    sum = t;
    cumulative_[k] = sum + carry;
  }
  if (std::abs(cumulative_.back() - 1.0) > 1e-9)
    throw ParameterError("DiscreteLaw: probabilities do not sum to 1");
}

double DiscreteLaw::cdf(double z) const {
  const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), z);
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double DiscreteLaw::expect(const std::function<double(double)>& phi) const {
  std::vector<double> terms(atoms_.size());
  for (std::size_t k = 0; k < atoms_.size(); ++k) terms[k] = probabilities_[k] * phi(atoms_[k]);
  return pairwise_sum(terms);
}

double DiscreteLaw::total_mass() const { return pairwise_sum(probabilities_); }

}  // namespace stein_pairs
