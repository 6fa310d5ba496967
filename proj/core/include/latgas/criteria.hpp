#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latgas/model.hpp"

/// Sufficient conditions for zero-free partition functions, evaluated per
/// site with their raw left- and right-hand sides.
namespace latgas::criteria {

enum class CriterionId { kDobrushin, kKpLike, kKpAuto, kGmsImproved, kGalvin, kBencsBuys };

/// Short name used on the command line and in reports ("dobrushin", "kp",
/// "kp-auto", "gms", "galvin", "bencs-buys").
const char* to_string(CriterionId id);
std::optional<CriterionId> parse_criterion(const std::string& name);

struct SiteResult {
  Site site = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

struct CriterionReport {
  CriterionId criterion = CriterionId::kDobrushin;
  std::vector<SiteResult> per_site;
  bool overall = true;
};

/// Assembles a report in site order with overall = AND of the site flags.
CriterionReport make_report(CriterionId id, std::vector<SiteResult> per_site);

/// max{|W|, 1 + |W - 1| alpha^S : S non-empty subset of `free_sites`}.
/// With no free sites this is |W|.
double bond_factor(Complex w, const CriterionParams& params, SiteSet free_sites);

/// Product of bond_factor(W(X), X \ {x}) over all X containing x, including
/// the singleton factor |W(x)|. Unit bonds contribute exactly 1.
double criterion_product(const InteractionModel& model, const CriterionParams& params, Site x);

/// |z(x)| * criterion_product; the criterion asks for this to be <= r(x).
double dobrushin_lhs(const InteractionModel& model, const CriterionParams& params, Site x);
CriterionReport dobrushin(const InteractionModel& model, const CriterionParams& params);

/// |z(x)W(x)| prod max{|W(X)|,1} exp(alpha(x) + sum |W(X)-1| max alpha^S)
/// over X strictly containing {x}; the criterion asks for <= alpha(x).
double kp_like_lhs(const InteractionModel& model, const CriterionParams& params, Site x);
CriterionReport kp_like(const InteractionModel& model, const CriterionParams& params);

/// Local stability term |z(x)W(x)| prod max{|W(X)|, 1} over X strictly
/// containing {x}.
double local_stability(const InteractionModel& model, Site x);

/// C_W(x) = 1 + sum |W(X) - 1| over X strictly containing {x}.
double c_w(const InteractionModel& model, Site x);

struct KpAutoResult {
  CriterionReport report;
  double c_bar = 1.0;
  /// alpha = 1 / c_bar on every site, emitted when the report is satisfied.
  std::optional<CriterionParams> params;
};

/// Checks local_stability(x) <= 1/(c_bar e) with c_bar = max_x C_W(x).
KpAutoResult kp_auto(const InteractionModel& model);

/// D_V(x) = sum |V(X)| over X strictly containing {x}. Requires a potential.
double d_v(const InteractionModel& model, Site x);

/// 2 |z(x)W(x)| exp(D_V(x)) <= 1, with W(x) taken from V.
SiteResult gms_improved(const InteractionModel& model, Site x);
CriterionReport gms_improved(const InteractionModel& model);

}  // namespace latgas::criteria
