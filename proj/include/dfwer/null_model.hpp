#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dfwer/exact_tests.hpp"

namespace dfwer {

/// Relative slack applied whenever a p-value is compared against a support
/// point or a critical constant, in the direction that favours equality.
inline constexpr double kRelSlack = 1e-12;

/// a <= b up to kRelSlack.
inline bool at_most(double a, double b) { return a <= b * (1.0 + kRelSlack); }

/// Null distribution of a discrete p-value: uniform on its attainable values,
/// so that F(u) = u on the support and F(u) < u elsewhere.
///
/// Immutable. Copies share the support array.
class DiscreteNull {
 public:
  /// Throws std::invalid_argument unless the support is non-empty, strictly
  /// increasing, inside (0, 1] and ends with 1.
  explicit DiscreteNull(std::vector<double> support);

  std::span<const double> support() const { return *support_; }
  double min_attainable() const { return support_->front(); }

  /// Largest support point <= u (with slack), or 0. Throws std::domain_error
  /// for u outside [0, 1].
  double cdf(double u) const;

  bool contains(double p) const;

 private:
  std::shared_ptr<const std::vector<double>> support_;
};

struct Hypothesis {
  double observed_p;
  DiscreteNull null;
};

/// Ordered collection of hypotheses plus the rank order of their p-values.
///
/// Ranks are 1-based as in the usual P(1) <= ... <= P(m) notation. Ties in the
/// observed p-values are broken by original index.
class Family {
 public:
  explicit Family(std::vector<Hypothesis> hypotheses, std::vector<std::string> labels = {});

  /// Wraps exact-test results, one hypothesis each.
  static Family from_results(std::span<const ExactTestResult> results,
                             std::vector<std::string> labels = {});

  std::size_t size() const { return hyps_.size(); }
  const Hypothesis& operator[](std::size_t i) const { return hyps_[i]; }
  std::span<const Hypothesis> hypotheses() const { return hyps_; }
  std::span<const std::string> labels() const { return labels_; }

  /// order()[r - 1] is the original index of the hypothesis with rank r.
  std::span<const std::size_t> order() const { return order_; }
  const Hypothesis& ranked(std::size_t rank) const;

  std::vector<double> observed() const;
  std::vector<double> min_attainable() const;

  /// Sorted distinct union of the supports of ranks from_rank..m.
  std::vector<double> support_union(std::size_t from_rank) const;

  /// Sum of F_(j)(p) over ranks j = from_rank..m.
  double sum_cdf(std::size_t from_rank, double p) const;

 private:
  void check_rank(std::size_t rank) const;

  std::vector<Hypothesis> hyps_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> order_;
};

/// Sorted union of several sorted supports, merging values within kRelSlack.
std::vector<double> merge_supports(std::span<const std::span<const double>> supports);

}  // namespace dfwer
