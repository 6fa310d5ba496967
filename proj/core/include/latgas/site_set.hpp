#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <string>
#include <vector>

namespace latgas {

/// Index of a lattice site.
using Site = unsigned;

/// Largest supported lattice; configurations are 32-bit masks.
inline constexpr unsigned kMaxSites = 30;

/// A finite set of sites stored as a bitmask.
///
/// The canonical total order on SiteSets is ascending numeric mask value,
/// and sites inside a set are visited in ascending index order.
class SiteSet {
 public:
  using Bits = std::uint32_t;

  constexpr SiteSet() = default;

  static constexpr SiteSet from_bits(Bits bits) { return SiteSet(bits); }
  static constexpr SiteSet singleton(Site s) { return SiteSet(Bits{1} << s); }
  /// {0, ..., n-1}
  static constexpr SiteSet first(unsigned n) {
    return SiteSet(n >= 32 ? ~Bits{0} : (Bits{1} << n) - 1);
  }
  static constexpr SiteSet of(std::initializer_list<Site> sites) {
    Bits b = 0;
    for (Site s : sites) b |= Bits{1} << s;
    return SiteSet(b);
  }
  template <typename Range>
  static SiteSet of_range(const Range& sites) {
    Bits b = 0;
    for (Site s : sites) b |= Bits{1} << s;
    return SiteSet(b);
  }

  constexpr Bits bits() const { return bits_; }
  constexpr unsigned size() const { return static_cast<unsigned>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }

  constexpr bool contains(Site s) const { return (bits_ >> s) & 1u; }
  constexpr bool is_subset_of(SiteSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(SiteSet other) const { return (bits_ & other.bits_) != 0; }
  constexpr bool is_singleton() const { return std::has_single_bit(bits_); }

  constexpr SiteSet with(Site s) const { return SiteSet(bits_ | (Bits{1} << s)); }
  constexpr SiteSet without(Site s) const { return SiteSet(bits_ & ~(Bits{1} << s)); }

  /// Smallest site; undefined on the empty set.
  constexpr Site min_site() const { return static_cast<Site>(std::countr_zero(bits_)); }
  /// Largest site; undefined on the empty set.
  constexpr Site max_site() const { return static_cast<Site>(31 - std::countl_zero(bits_)); }

  /// Sites of this set strictly below `s` in index order.
  constexpr SiteSet below(Site s) const { return SiteSet(bits_ & ((Bits{1} << s) - 1)); }

  friend constexpr SiteSet operator|(SiteSet a, SiteSet b) { return SiteSet(a.bits_ | b.bits_); }
  friend constexpr SiteSet operator&(SiteSet a, SiteSet b) { return SiteSet(a.bits_ & b.bits_); }
  /// Set difference.
  friend constexpr SiteSet operator-(SiteSet a, SiteSet b) { return SiteSet(a.bits_ & ~b.bits_); }
  SiteSet& operator|=(SiteSet o) { bits_ |= o.bits_; return *this; }
  SiteSet& operator&=(SiteSet o) { bits_ &= o.bits_; return *this; }
  SiteSet& operator-=(SiteSet o) { bits_ &= ~o.bits_; return *this; }

  friend constexpr bool operator==(SiteSet, SiteSet) = default;
  friend constexpr std::strong_ordering operator<=>(SiteSet a, SiteSet b) {
    return a.bits_ <=> b.bits_;
  }

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Site;
    using difference_type = std::ptrdiff_t;
    using pointer = const Site*;
    using reference = Site;

    constexpr iterator() = default;
    constexpr explicit iterator(Bits rest) : rest_(rest) {}
    constexpr Site operator*() const { return static_cast<Site>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
    constexpr iterator operator++(int) { iterator t = *this; ++*this; return t; }
    friend constexpr bool operator==(iterator, iterator) = default;

   private:
    Bits rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<Site> sites() const { return {begin(), end()}; }
  std::string to_string() const;

 private:
  constexpr explicit SiteSet(Bits bits) : bits_(bits) {}
  Bits bits_ = 0;
};

/// Visit every subset of `mask` (including the empty set and `mask` itself)
/// in ascending bitmask order.
template <typename F>
void for_each_subset(SiteSet mask, F&& f) {
  const SiteSet::Bits m = mask.bits();
  SiteSet::Bits sub = 0;
  do {
    f(SiteSet::from_bits(sub));
    sub = (sub - m) & m;
  } while (sub != 0);
}

/// The `index`-th subset of `mask` in ascending order: bit k of `index`
/// selects the k-th smallest site of `mask`.
inline SiteSet subset_at(SiteSet mask, std::uint64_t index) {
  SiteSet::Bits out = 0;
  SiteSet::Bits m = mask.bits();
  while (index != 0 && m != 0) {
    const SiteSet::Bits low = m & (~m + 1);
    if (index & 1u) out |= low;
    index >>= 1;
    m &= m - 1;
  }
  return SiteSet::from_bits(out);
}

/// Position of `subset` among the subsets of `mask` (inverse of subset_at).
inline std::uint64_t subset_index(SiteSet mask, SiteSet subset) {
  std::uint64_t index = 0;
  unsigned k = 0;
  for (Site s : mask) {
    if (subset.contains(s)) index |= std::uint64_t{1} << k;
    ++k;
  }
  return index;
}

}  // namespace latgas
