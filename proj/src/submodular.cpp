#include "mcover/submodular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mcover {

double eval(const SubmodularOracle& f, const ElementSet& s) {
  if (s.universe() != f.ground_size()) {
    throw std::domain_error("eval: set over ground of size " + std::to_string(s.universe()) +
                            ", oracle expects " + std::to_string(f.ground_size()));
  }
  return f.value(s);
}

double marginal(const SubmodularOracle& f, Index e, const ElementSet& a) {
  if (e >= f.ground_size()) throw std::domain_error("marginal: element outside ground set");
  if (a.contains(e)) {
    eval(f, a);  // domain check only
    return 0.0;
  }
  ElementSet with = a;
  with.insert(e);
  return eval(f, with) - eval(f, a);
}

WeightedCoverageFunction::WeightedCoverageFunction(std::vector<std::vector<Index>> covers,
                                                   std::vector<double> weights)
    : covers_(std::move(covers)), weights_(std::move(weights)) {
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("coverage weights must be finite and nonnegative");
    }
  }
  words_per_element_ = (weights_.size() + 63) / 64;
  bits_.assign(covers_.size() * words_per_element_, 0);
  for (std::size_t e = 0; e < covers_.size(); ++e) {
    auto& pts = covers_[e];
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (Index p : pts) {
      if (p >= weights_.size()) {
        throw std::invalid_argument("coverage: point " + std::to_string(p) +
                                    " outside universe of size " +
                                    std::to_string(weights_.size()));
      }
      bits_[e * words_per_element_ + (p >> 6)] |= 1ULL << (p & 63);
    }
  }
}

double WeightedCoverageFunction::value(const ElementSet& s) const {
  if (words_per_element_ == 0) return 0.0;
  if (words_per_element_ == 1) {
    std::uint64_t covered = 0;
    s.for_each([&](Index e) { covered |= bits_[e]; });
    double total = 0.0;
    while (covered != 0) {
      total += weights_[static_cast<std::size_t>(__builtin_ctzll(covered))];
      covered &= covered - 1;
    }
    return total;
  }
  thread_local std::vector<std::uint64_t> scratch;
  scratch.assign(words_per_element_, 0);
  s.for_each([&](Index e) {
    const std::uint64_t* row = bits_.data() + e * words_per_element_;
    for (std::size_t w = 0; w < words_per_element_; ++w) scratch[w] |= row[w];
  });
  double total = 0.0;
  for (std::size_t w = 0; w < words_per_element_; ++w) {
    std::uint64_t bits = scratch[w];
    while (bits != 0) {
      total += weights_[w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits))];
      bits &= bits - 1;
    }
  }
  return total;
}

std::shared_ptr<WeightedCoverageFunction> make_modular(const std::vector<double>& weights) {
  std::vector<std::vector<Index>> covers(weights.size());
  for (std::size_t e = 0; e < weights.size(); ++e) covers[e] = {e};
  return std::make_shared<WeightedCoverageFunction>(std::move(covers), weights);
}

TruncatedFunction::TruncatedFunction(OraclePtr base, double cap)
    : base_(std::move(base)), cap_(cap) {
  if (!base_) throw std::invalid_argument("truncated: null base");
  if (!std::isfinite(cap_) || cap_ < 0.0) throw std::invalid_argument("truncated: bad cap");
}

double TruncatedFunction::value(const ElementSet& s) const {
  return std::min(base_->value(s), cap_);
}

ResidualFunction::ResidualFunction(OraclePtr base, ElementSet anchor)
    : base_(std::move(base)), anchor_(std::move(anchor)) {
  if (!base_) throw std::invalid_argument("residual: null base");
  if (anchor_.universe() != base_->ground_size()) {
    throw std::domain_error("residual: anchor set over the wrong ground");
  }
  local_size_ = base_->ground_size();
  anchor_value_ = base_->value(anchor_);
}

ResidualFunction::ResidualFunction(OraclePtr base, ElementSet anchor, std::vector<Index> kept)
    : base_(std::move(base)), anchor_(std::move(anchor)), kept_(std::move(kept)), reindexed_(true) {
  if (!base_) throw std::invalid_argument("residual: null base");
  if (anchor_.universe() != base_->ground_size()) {
    throw std::domain_error("residual: anchor set over the wrong ground");
  }
  for (Index e : kept_) {
    if (e >= base_->ground_size()) throw std::domain_error("residual: kept index out of range");
  }
  local_size_ = kept_.size();
  anchor_value_ = base_->value(anchor_);
}

double ResidualFunction::value(const ElementSet& s) const {
  if (s.empty()) return 0.0;
  ElementSet lifted = anchor_;
  if (!reindexed_) {
    lifted.unite(s);
  } else {
    s.for_each([&](Index e) { lifted.insert(kept_[e]); });
  }
  return std::max(0.0, base_->value(lifted) - anchor_value_);
}

}  // namespace mcover
