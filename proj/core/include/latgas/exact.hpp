#pragma once

#include "latgas/model.hpp"
#include "latgas/parallel.hpp"

/// Brute-force enumeration of partition functions, correlations and
/// effective activities. Everything else in the library is checked against
/// this module.
namespace latgas::exact {

/// Pinned configuration X, volume Lambda and boundary condition B of
/// Z(X, Lambda | B). The three sets may overlap.
struct PartitionQuery {
  SiteSet pinned;
  SiteSet volume;
  SiteSet boundary;
};

/// Z(X, Lambda | B) = sum over Y subset of Lambda \ X of
/// z^{X u Y} kappa(X u Y | B), summed pairwise in index order.
Complex partition_function(const InteractionModel& model, const PartitionQuery& q,
                           const ExecOptions& exec = {});

/// Z(Lambda | B)
inline Complex partition_function(const InteractionModel& model, SiteSet volume,
                                  SiteSet boundary = {}, const ExecOptions& exec = {}) {
  return partition_function(model, PartitionQuery{SiteSet{}, volume, boundary}, exec);
}

/// Z(x, Lambda | B)
inline Complex pinned_partition_function(const InteractionModel& model, Site x, SiteSet volume,
                                         SiteSet boundary = {}, const ExecOptions& exec = {}) {
  return partition_function(model, PartitionQuery{SiteSet::singleton(x), volume, boundary}, exec);
}

/// Smallest |Z(Lambda|B)| accepted as a denominator:
/// 1e-14 * (1 + max|z|)^|Lambda|.
double vanishing_threshold(const InteractionModel& model, SiteSet volume);

/// Throws VanishingDenominator when |z_value| is at or below the threshold.
void require_nonvanishing(const InteractionModel& model, SiteSet volume, Complex z_value,
                          const char* what);

/// R(X, Lambda | B) = Z(X, Lambda | B) / Z(Lambda | B).
Complex correlation(const InteractionModel& model, SiteSet pinned, SiteSet volume,
                    SiteSet boundary = {}, const ExecOptions& exec = {});

/// zhat(x, Lambda | B) = R({x}, Lambda | B) for x outside Lambda.
Complex effective_activity(const InteractionModel& model, Site x, SiteSet volume,
                           SiteSet boundary = {}, const ExecOptions& exec = {});

}  // namespace latgas::exact
