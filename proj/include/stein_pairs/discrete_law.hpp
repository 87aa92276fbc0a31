#pragma once

#include <functional>
#include <span>
#include <vector>

namespace stein_pairs {

// A finitely supported probability law. Atoms are kept strictly increasing;
// construction merges duplicates and sorts.
class DiscreteLaw {
 public:
  DiscreteLaw() = default;
  DiscreteLaw(std::vector<double> atoms, std::vector<double> probabilities);

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> probabilities() const { return probabilities_; }

  // P(X <= atom_k), compensated running sum.
  std::span<const double> cumulative() const { return cumulative_; }

  // Right-continuous CDF.
  double cdf(double z) const;

  // E phi(X), pairwise-summed.
  double expect(const std::function<double(double)>& phi) const;

  double total_mass() const;

 private:
  std::vector<double> atoms_;
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
};

}  // namespace stein_pairs
