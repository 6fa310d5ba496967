#include "latgas/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latgas/error.hpp"

namespace latgas::criteria {

const char* to_string(CriterionId id) {
  switch (id) {
    case CriterionId::kDobrushin: return "dobrushin";
    case CriterionId::kKpLike: return "kp";
    case CriterionId::kKpAuto: return "kp-auto";
    case CriterionId::kGmsImproved: return "gms";
    case CriterionId::kGalvin: return "galvin";
    case CriterionId::kBencsBuys: return "bencs-buys";
  }
  return "unknown";
}

std::optional<CriterionId> parse_criterion(const std::string& name) {
  for (auto id : {CriterionId::kDobrushin, CriterionId::kKpLike, CriterionId::kKpAuto,
                  CriterionId::kGmsImproved, CriterionId::kGalvin, CriterionId::kBencsBuys}) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

CriterionReport make_report(CriterionId id, std::vector<SiteResult> per_site) {
  CriterionReport report{id, std::move(per_site), true};
  for (const SiteResult& s : report.per_site) report.overall = report.overall && s.satisfied;
  return report;
}

double bond_factor(Complex w, const CriterionParams& params, SiteSet free_sites) {
  const double abs_w = std::abs(w);
  if (free_sites.empty()) return abs_w;
  return std::max(abs_w, 1.0 + std::abs(w - 1.0) * params.max_alpha_power(free_sites));
}

double criterion_product(const InteractionModel& model, const CriterionParams& params, Site x) {
  double product = 1.0;
  for (const Bond& b : model.bonds()) {
    if (b.set.contains(x)) product *= bond_factor(b.value, params, b.set.without(x));
  }
  return product;
}

double dobrushin_lhs(const InteractionModel& model, const CriterionParams& params, Site x) {
  return std::abs(model.activity(x)) * criterion_product(model, params, x);
}

CriterionReport dobrushin(const InteractionModel& model, const CriterionParams& params) {
  std::vector<SiteResult> sites;
  for (Site x = 0; x < model.size(); ++x) {
    const double lhs = dobrushin_lhs(model, params, x);
    sites.push_back({x, lhs, params.r(x), lhs <= params.r(x)});
  }
  return make_report(CriterionId::kDobrushin, std::move(sites));
}

double local_stability(const InteractionModel& model, Site x) {
  double value = std::abs(model.activity(x) * model.w(SiteSet::singleton(x)));
  for (const Bond& b : model.bonds()) {
    if (b.set.contains(x) && !b.set.is_singleton()) value *= std::max(std::abs(b.value), 1.0);
  }
  return value;
}

double kp_like_lhs(const InteractionModel& model, const CriterionParams& params, Site x) {
  double exponent = params.alpha(x);
  for (const Bond& b : model.bonds()) {
    if (b.set.contains(x) && !b.set.is_singleton()) {
      exponent += std::abs(b.value - 1.0) * params.max_alpha_power(b.set.without(x));
    }
  }
  return local_stability(model, x) * std::exp(exponent);
}

CriterionReport kp_like(const InteractionModel& model, const CriterionParams& params) {
  std::vector<SiteResult> sites;
  for (Site x = 0; x < model.size(); ++x) {
    const double lhs = kp_like_lhs(model, params, x);
    sites.push_back({x, lhs, params.alpha(x), lhs <= params.alpha(x)});
  }
  return make_report(CriterionId::kKpLike, std::move(sites));
}

double c_w(const InteractionModel& model, Site x) {
  double c = 1.0;
  for (const Bond& b : model.bonds()) {
    if (b.set.contains(x) && !b.set.is_singleton()) c += std::abs(b.value - 1.0);
  }
  return c;
}

KpAutoResult kp_auto(const InteractionModel& model) {
  KpAutoResult out;
  for (Site x = 0; x < model.size(); ++x) out.c_bar = std::max(out.c_bar, c_w(model, x));
  const double rhs = 1.0 / (out.c_bar * std::numbers::e);
  std::vector<SiteResult> sites;
  for (Site x = 0; x < model.size(); ++x) {
    const double lhs = local_stability(model, x);
    sites.push_back({x, lhs, rhs, lhs <= rhs});
  }
  out.report = make_report(CriterionId::kKpAuto, std::move(sites));
  if (out.report.overall) {
    out.params = CriterionParams::uniform_alpha(model.size(), 1.0 / out.c_bar);
  }
  return out;
}

double d_v(const InteractionModel& model, Site x) {
  if (!model.has_potential()) fail(ErrorKind::kMissingPotential, "D_V needs a potential");
  double d = 0.0;
  for (const Bond& v : model.potential()) {
    if (v.set.contains(x) && !v.set.is_singleton()) d += std::abs(v.value);
  }
  return d;
}

SiteResult gms_improved(const InteractionModel& model, Site x) {
  if (!model.has_potential()) {
    fail(ErrorKind::kMissingPotential, "the improved Gallavotti-Miracle-Sole check needs V");
  }
  const Complex w_x = std::exp(-model.v(SiteSet::singleton(x)));
  const double lhs = 2.0 * std::abs(model.activity(x) * w_x) * std::exp(d_v(model, x));
  return {x, lhs, 1.0, lhs <= 1.0};
}

CriterionReport gms_improved(const InteractionModel& model) {
  std::vector<SiteResult> sites;
  for (Site x = 0; x < model.size(); ++x) sites.push_back(gms_improved(model, x));
  return make_report(CriterionId::kGmsImproved, std::move(sites));
}

}  // namespace latgas::criteria
