#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "latgas/site_set.hpp"

namespace latgas {
namespace {

TEST(SiteSet, BasicOperations) {
  const SiteSet a = SiteSet::of({0, 2, 5});
  const SiteSet b = SiteSet::of({2, 3});
  EXPECT_EQ(a.size(), 3u);
  EXPECT_TRUE(a.contains(5));
  EXPECT_FALSE(a.contains(1));
  EXPECT_EQ(a | b, SiteSet::of({0, 2, 3, 5}));
  EXPECT_EQ(a & b, SiteSet::singleton(2));
  EXPECT_EQ(a - b, SiteSet::of({0, 5}));
  EXPECT_TRUE(SiteSet::of({0, 5}).is_subset_of(a));
  EXPECT_FALSE(b.is_subset_of(a));
  EXPECT_TRUE(a.intersects(b));
  EXPECT_EQ(a.min_site(), 0u);
  EXPECT_EQ(a.max_site(), 5u);
  EXPECT_EQ(a.below(5), SiteSet::of({0, 2}));
  EXPECT_EQ(a.sites(), (std::vector<Site>{0, 2, 5}));
  EXPECT_TRUE(SiteSet::singleton(4).is_singleton());
  EXPECT_FALSE(SiteSet{}.is_singleton());
}

TEST(SiteSet, CanonicalOrderIsNumericMask) {
  EXPECT_LT(SiteSet::of({0, 1}), SiteSet::singleton(2));
  EXPECT_LT(SiteSet::singleton(1), SiteSet::of({0, 1}));
  EXPECT_LT(SiteSet{}, SiteSet::singleton(0));
}

TEST(SiteSet, FirstCoversWholeLattice) {
  EXPECT_EQ(SiteSet::first(0), SiteSet{});
  EXPECT_EQ(SiteSet::first(3), SiteSet::of({0, 1, 2}));
  EXPECT_EQ(SiteSet::first(kMaxSites).size(), kMaxSites);
}

TEST(SiteSet, ForEachSubsetVisitsAllInAscendingOrder) {
  const SiteSet mask = SiteSet::of({1, 3, 4});
  std::vector<SiteSet> seen;
  for_each_subset(mask, [&](SiteSet s) { seen.push_back(s); });
  ASSERT_EQ(seen.size(), 8u);
  EXPECT_EQ(seen.front(), SiteSet{});
  EXPECT_EQ(seen.back(), mask);
  for (std::size_t i = 1; i < seen.size(); ++i) EXPECT_LT(seen[i - 1], seen[i]);
  EXPECT_EQ(std::set<SiteSet>(seen.begin(), seen.end()).size(), 8u);
}

TEST(SiteSet, SubsetIndexRoundTrips) {
  const SiteSet mask = SiteSet::of({0, 2, 3, 7, 9});
  for (std::uint64_t i = 0; i < 32; ++i) {
    const SiteSet s = subset_at(mask, i);
    EXPECT_TRUE(s.is_subset_of(mask));
    EXPECT_EQ(subset_index(mask, s), i);
  }
  EXPECT_EQ(subset_at(mask, 0b00110), SiteSet::of({2, 3}));
}

TEST(SiteSet, SubsetIndexOfUnionIsBitwiseOr) {
  const SiteSet mask = SiteSet::of({1, 2, 6, 8});
  for (std::uint64_t i = 0; i < 16; ++i) {
    for (std::uint64_t j = 0; j < 16; ++j) {
      EXPECT_EQ(subset_index(mask, subset_at(mask, i) | subset_at(mask, j)), i | j);
    }
  }
}

TEST(SiteSet, ToStringListsSites) {
  EXPECT_EQ(SiteSet{}.to_string(), "{}");
  EXPECT_EQ(SiteSet::of({1, 4}).to_string(), "{1,4}");
}

}  // namespace
}  // namespace latgas
