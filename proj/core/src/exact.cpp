#include "latgas/exact.hpp"

#include <cmath>
#include <future>

#include "latgas/error.hpp"

namespace latgas::exact {
namespace {

constexpr std::uint64_t kLeaf = 16;

// Fixed summation tree over configuration indices: a range is split at its
// midpoint until it has at most kLeaf terms. The tree depends only on the
// range, so threading the upper levels cannot change the result.
class PairwiseSum {
 public:
  PairwiseSum(const InteractionModel& model, const PartitionQuery& q)
      : model_(model), pinned_(q.pinned), boundary_(q.boundary), free_(q.volume - q.pinned) {
    pinned_weight_ = monomial(model, q.pinned);
    for (const Bond& b : model.bonds()) {
      if (b.set.is_subset_of(q.pinned | q.volume | q.boundary)) relevant_.push_back(b);
    }
  }

  std::uint64_t count() const { return std::uint64_t{1} << free_.size(); }

  Complex sum(std::uint64_t lo, std::uint64_t hi, unsigned spare_threads) const {
    if (hi - lo <= kLeaf) return leaf(lo, hi);
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (spare_threads > 0) {
      const unsigned rest = spare_threads - 1;
      auto left = std::async(std::launch::async,
                             [&, lo, mid, rest] { return sum(lo, mid, rest / 2); });
      Complex right = sum(mid, hi, rest - rest / 2);
      return left.get() + right;
    }
    return sum(lo, mid, 0) + sum(mid, hi, 0);
  }

 private:
  Complex term(SiteSet y) const {
    const SiteSet config = pinned_ | y;
    if (config.intersects(boundary_)) return {};
    Complex weight = pinned_weight_ * monomial(model_, y);
    if (weight == Complex{}) return {};
    const SiteSet hull = config | boundary_;
    for (const Bond& b : relevant_) {
      if (b.set.is_subset_of(hull) && b.set.intersects(config)) weight *= b.value;
    }
    return weight;
  }

  Complex leaf(std::uint64_t lo, std::uint64_t hi) const {
    const SiteSet::Bits mask = free_.bits();
    SiteSet::Bits y = subset_at(free_, lo).bits();
    Complex acc = term(SiteSet::from_bits(y));
    for (std::uint64_t i = lo + 1; i < hi; ++i) {
      y = (y - mask) & mask;
      acc += term(SiteSet::from_bits(y));
    }
    return acc;
  }

  const InteractionModel& model_;
  SiteSet pinned_;
  SiteSet boundary_;
  SiteSet free_;
  Complex pinned_weight_;
  std::vector<Bond> relevant_;
};

}  // namespace

Complex partition_function(const InteractionModel& model, const PartitionQuery& q,
                           const ExecOptions& exec) {
  const SiteSet lattice = model.lattice();
  if (!q.pinned.is_subset_of(lattice) || !q.volume.is_subset_of(lattice) ||
      !q.boundary.is_subset_of(lattice)) {
    fail(ErrorKind::kInvalidArgument, "partition query reaches outside the lattice");
  }
  PairwiseSum summer(model, q);
  const unsigned spare = exec.threads > 1 ? exec.threads - 1 : 0;
  return summer.sum(0, summer.count(), spare);
}

double vanishing_threshold(const InteractionModel& model, SiteSet volume) {
  return 1e-14 * std::pow(1.0 + model.max_abs_activity(), static_cast<double>(volume.size()));
}

void require_nonvanishing(const InteractionModel& model, SiteSet volume, Complex z_value,
                          const char* what) {
  if (!(std::abs(z_value) > vanishing_threshold(model, volume))) {
    fail(ErrorKind::kVanishingDenominator,
         std::string(what) + " over " + volume.to_string() + " vanishes (|Z| = " +
             std::to_string(std::abs(z_value)) + ")");
  }
}

Complex correlation(const InteractionModel& model, SiteSet pinned, SiteSet volume,
                    SiteSet boundary, const ExecOptions& exec) {
  const Complex denominator = partition_function(model, volume, boundary, exec);
  require_nonvanishing(model, volume, denominator, "Z(Lambda|B)");
  return partition_function(model, PartitionQuery{pinned, volume, boundary}, exec) / denominator;
}

Complex effective_activity(const InteractionModel& model, Site x, SiteSet volume,
                           SiteSet boundary, const ExecOptions& exec) {
  if (volume.contains(x)) {
    fail(ErrorKind::kInvalidArgument,
         "effective activity needs the site outside the volume, got site " + std::to_string(x) +
             " in " + volume.to_string());
  }
  return correlation(model, SiteSet::singleton(x), volume, boundary, exec);
}

}  // namespace latgas::exact
