#pragma once

#include <cstddef>
#include <vector>

#include "latgas/model.hpp"

/// Recursion formula for effective activities via interpolating
/// interactions, the identities it is assembled from, and the inequalities
/// that keep the Dobrushin-type criterion valid along the recursion.
namespace latgas::recursion {

/// The bonds through `root` that the recursion touches, in canonical order.
struct InterpolationContext {
  Site root = 0;
  std::vector<SiteSet> bond_order;
  InteractionModel base;
};

/// E(x, Lambda) = {X containing x : W(X) != 1, X \ {x} subset of Lambda}.
std::vector<SiteSet> relevant_bonds(const InteractionModel& model, Site root, SiteSet volume);

InterpolationContext make_context(const InteractionModel& model, Site root, SiteSet volume);

/// W_X(Y) for the interpolating interaction with marker bond X:
///   W(Y) W({x} u Y)  if x not in Y and {x} u Y precedes X,
///   1                if x in Y and Y != X,
///   W(Y)             otherwise.
Complex interpolated_w(const InterpolationContext& ctx, SiteSet marker, SiteSet y);

/// W_X materialized as a model (x = root, X = marker).
InteractionModel interpolate(const InteractionModel& model, Site root, SiteSet marker);

struct IdentityCheck {
  Complex lhs;
  Complex rhs;
};

/// lhs = zhat(x, Lambda) by enumeration; rhs = z(x)W(x) prod over
/// E(x, Lambda) of Z_X(Lambda|x) / Z_X(Lambda).
IdentityCheck interpolation_identity_check(const InteractionModel& model, Site x, SiteSet volume);

/// With z(x) = 1 the right-hand side also equals prod zhat_X(x, Lambda);
/// this returns that product (the activity of x is treated as 1).
Complex interpolated_zhat_product(const InteractionModel& model, Site x, SiteSet volume);

/// For X != {x}: lhs = Z_X(Lambda|x)/Z_X(Lambda) and
/// rhs = 1 + (W(X)-1) R_X(X', Lambda) [X' subset Lambda].
/// For X = {x} the ratio form degenerates, so the effective-activity form is
/// compared instead: lhs = zhat_X(x, Lambda), rhs = z(x)W(x).
IdentityCheck removal_identity_check(const InteractionModel& model, Site x, SiteSet bond,
                                     SiteSet volume);

/// One evaluated node of the recursion tree.
struct RecursionCall {
  Site root = 0;
  SiteSet volume;
  std::size_t depth = 0;
  Complex value;
  /// The (conditioned, interpolated) interaction the node was evaluated in.
  InteractionModel model;
};

struct RecursionOptions {
  /// Maximum recursion depth; 0 means |Lambda| + 1.
  std::size_t depth_guard = 0;
  /// When set, every evaluated node is appended here.
  std::vector<RecursionCall>* trace = nullptr;
};

/// zhat(x, Lambda | B) computed purely by the recursion over interpolated,
/// conditioned interactions; never enumerates configurations.
Complex recursive_effective_activity(const InteractionModel& model, Site x, SiteSet volume,
                                     SiteSet boundary, const RecursionOptions& options = {});

struct StabilityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = bond_factor(W(Y|B), Y \ {x});
/// rhs = prod over X containing x with X \ B = Y of bond_factor(W(X), X \ ({x} u B)).
/// Requires x not in B, x in Y, Y and B disjoint.
StabilityCheck stability_lhs_rhs(const InteractionModel& model, const CriterionParams& params,
                                 Site x, SiteSet boundary, SiteSet y);

/// lhs = criterion product at x for W(.|B);
/// rhs = [x not in B] times the criterion product at x for W.
StabilityCheck conditional_stability(const InteractionModel& model,
                                     const CriterionParams& params, Site x, SiteSet boundary);

/// lhs = criterion product at y for W_X (root x, marker X);
/// rhs = product of bond factors at y over bonds Y containing y with
/// (x in Y implies Y <= X) for W.
StabilityCheck interpolation_stability(const InteractionModel& model,
                                       const CriterionParams& params, Site root, SiteSet marker,
                                       Site y);

}  // namespace latgas::recursion
