#include "dfwer/null_model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dfwer {

DiscreteNull::DiscreteNull(std::vector<double> support) {
  if (support.empty()) throw std::invalid_argument("DiscreteNull: empty support");
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double s = support[i];
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("DiscreteNull: support point outside (0, 1]");
    if (i > 0 && !(s > support[i - 1])) throw std::invalid_argument("DiscreteNull: support not strictly increasing");
  }
  if (support.back() != 1.0) throw std::invalid_argument("DiscreteNull: support must end at 1");
  support_ = std::make_shared<const std::vector<double>>(std::move(support));
}

double DiscreteNull::cdf(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("DiscreteNull::cdf: u outside [0, 1]");
  const auto& s = *support_;
  const auto it = std::upper_bound(s.begin(), s.end(), u * (1.0 + kRelSlack));
  return it == s.begin() ? 0.0 : *std::prev(it);
}

bool DiscreteNull::contains(double p) const {
  const auto& s = *support_;
  const auto it = std::lower_bound(s.begin(), s.end(), p / (1.0 + kRelSlack));
  return it != s.end() && at_most(*it, p);
}

Family::Family(std::vector<Hypothesis> hypotheses, std::vector<std::string> labels)
    : hyps_(std::move(hypotheses)), labels_(std::move(labels)) {
  if (hyps_.empty()) throw std::invalid_argument("Family: need at least one hypothesis");
  if (!labels_.empty() && labels_.size() != hyps_.size()) {
    throw std::invalid_argument("Family: label count does not match hypothesis count");
  }
  for (std::size_t i = 0; i < hyps_.size(); ++i) {
    if (!hyps_[i].null.contains(hyps_[i].observed_p)) {
      throw std::invalid_argument("Family: observed p-value of hypothesis " + std::to_string(i + 1) +
                                  " is not an attainable value");
    }
  }
  order_.resize(hyps_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [this](std::size_t a, std::size_t b) {
    return hyps_[a].observed_p < hyps_[b].observed_p;
  });
}

Family Family::from_results(std::span<const ExactTestResult> results, std::vector<std::string> labels) {
  std::vector<Hypothesis> hyps;
  hyps.reserve(results.size());
  for (const auto& r : results) hyps.push_back({r.observed_p, DiscreteNull(r.support)});
  return Family(std::move(hyps), std::move(labels));
}

void Family::check_rank(std::size_t rank) const {
  if (rank < 1 || rank > hyps_.size()) {
    throw std::domain_error("Family: rank " + std::to_string(rank) + " outside 1.." +
                            std::to_string(hyps_.size()));
  }
}

const Hypothesis& Family::ranked(std::size_t rank) const {
  check_rank(rank);
  return hyps_[order_[rank - 1]];
}

std::vector<double> Family::observed() const {
  std::vector<double> out;
  out.reserve(hyps_.size());
  for (const auto& h : hyps_) out.push_back(h.observed_p);
  return out;
}

std::vector<double> Family::min_attainable() const {
  std::vector<double> out;
  out.reserve(hyps_.size());
  for (const auto& h : hyps_) out.push_back(h.null.min_attainable());
  return out;
}

std::vector<double> Family::support_union(std::size_t from_rank) const {
  check_rank(from_rank);
  std::vector<std::span<const double>> parts;
  for (std::size_t r = from_rank; r <= hyps_.size(); ++r) parts.push_back(hyps_[order_[r - 1]].null.support());
  return merge_supports(parts);
}

double Family::sum_cdf(std::size_t from_rank, double p) const {
  check_rank(from_rank);
  double total = 0.0;
  for (std::size_t r = from_rank; r <= hyps_.size(); ++r) total += hyps_[order_[r - 1]].null.cdf(p);
  return total;
}

std::vector<double> merge_supports(std::span<const std::span<const double>> supports) {
  std::vector<double> all;
  std::size_t n = 0;
  for (auto s : supports) n += s.size();
  all.reserve(n);
  for (auto s : supports) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());

  std::vector<double> out;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j + 1 < all.size() && at_most(all[j + 1], all[j])) ++j;
    out.push_back(all[j]);
    i = j + 1;
  }
  return out;
}

}  // namespace dfwer
