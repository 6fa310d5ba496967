#include "latgas/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "latgas/error.hpp"

namespace latgas {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kVanishingDenominator: return "VanishingDenominator";
    case ErrorKind::kDepthGuardExceeded: return "DepthGuardExceeded";
    case ErrorKind::kMissingPotential: return "MissingPotential";
    case ErrorKind::kEdgeNotIncident: return "EdgeNotIncident";
    case ErrorKind::kDegreeExceeded: return "DegreeExceeded";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kSupportTooSmall: return "SupportTooSmall";
    case ErrorKind::kParse: return "ParseError";
  }
  return "Unknown";
}

std::string SiteSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (Site s : *this) {
    if (!first) out += ",";
    out += std::to_string(s);
    first = false;
  }
  return out + "}";
}

namespace {

bool is_finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

const Bond* find_bond(const std::vector<Bond>& bonds, SiteSet x) {
  auto it = std::lower_bound(bonds.begin(), bonds.end(), x,
                             [](const Bond& b, SiteSet key) { return b.set < key; });
  return (it != bonds.end() && it->set == x) ? &*it : nullptr;
}

void upsert(std::vector<Bond>& bonds, SiteSet x, Complex value, bool erase) {
  auto it = std::lower_bound(bonds.begin(), bonds.end(), x,
                             [](const Bond& b, SiteSet key) { return b.set < key; });
  const bool present = it != bonds.end() && it->set == x;
  if (erase) {
    if (present) bonds.erase(it);
  } else if (present) {
    it->value = value;
  } else {
    bonds.insert(it, Bond{x, value});
  }
}

}  // namespace

InteractionModel::InteractionModel(unsigned n) : n_(n), activity_(n, Complex{}) {
  if (n > kMaxSites) {
    fail(ErrorKind::kInvalidArgument,
         "lattice of " + std::to_string(n) + " sites exceeds the limit of " +
             std::to_string(kMaxSites));
  }
}

void InteractionModel::check_set(SiteSet x, const char* what) const {
  if (x.empty()) fail(ErrorKind::kInvalidArgument, std::string(what) + " on the empty set");
  if (!x.is_subset_of(lattice())) {
    fail(ErrorKind::kInvalidArgument,
         std::string(what) + " on " + x.to_string() + " outside the lattice");
  }
}

void InteractionModel::set_activity(Site x, Complex z) {
  if (x >= n_) fail(ErrorKind::kInvalidArgument, "activity for site outside the lattice");
  if (!is_finite(z)) fail(ErrorKind::kInvalidArgument, "non-finite activity");
  activity_[x] = z;
}

double InteractionModel::max_abs_activity() const {
  double m = 0.0;
  for (Complex z : activity_) m = std::max(m, std::abs(z));
  return m;
}

Complex InteractionModel::w(SiteSet x) const {
  const Bond* b = find_bond(bonds_, x);
  return b != nullptr ? b->value : Complex{1.0, 0.0};
}

void InteractionModel::set_w(SiteSet x, Complex value) {
  check_set(x, "interaction");
  if (potential_) {
    fail(ErrorKind::kInvalidArgument, "model has a potential; set V instead of W");
  }
  if (!is_finite(value)) fail(ErrorKind::kInvalidArgument, "non-finite interaction value");
  if (value == Complex{1.0, 0.0}) {
    fail(ErrorKind::kInvalidArgument,
         "explicit interaction value 1 on " + x.to_string() + " (unit interactions are implied)");
  }
  upsert(bonds_, x, value, false);
}

std::span<const Bond> InteractionModel::potential() const {
  if (!potential_) return {};
  return *potential_;
}

Complex InteractionModel::v(SiteSet x) const {
  if (!potential_) fail(ErrorKind::kMissingPotential, "model has no potential");
  const Bond* b = find_bond(*potential_, x);
  return b != nullptr ? b->value : Complex{};
}

void InteractionModel::attach_potential() {
  if (potential_) return;
  if (!bonds_.empty()) {
    fail(ErrorKind::kInvalidArgument, "cannot attach a potential to a model with bare W entries");
  }
  potential_.emplace();
}

void InteractionModel::set_potential(SiteSet x, Complex v) {
  check_set(x, "potential");
  if (!is_finite(v)) fail(ErrorKind::kInvalidArgument, "non-finite potential value");
  attach_potential();
  const Complex w = std::exp(-v);
  upsert(*potential_, x, v, v == Complex{});
  upsert(bonds_, x, w, w == Complex{1.0, 0.0});
}

void InteractionModel::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != n_) {
    fail(ErrorKind::kInvalidArgument, "label count does not match the lattice size");
  }
  labels_ = std::move(labels);
}

std::string InteractionModel::label(Site x) const {
  return labels_.empty() ? std::to_string(x) : labels_[x];
}

InteractionModel InteractionModel::from_factors(unsigned n, std::span<const Complex> activity,
                                                std::vector<Bond> factors,
                                                std::vector<std::string> labels) {
  InteractionModel out(n);
  out.activity_.assign(activity.begin(), activity.end());
  std::map<SiteSet, Complex> acc;
  for (const Bond& f : factors) {
    if (f.set.empty()) continue;
    auto [it, inserted] = acc.try_emplace(f.set, f.value);
    if (!inserted) it->second *= f.value;
  }
  out.bonds_.reserve(acc.size());
  for (const auto& [set, value] : acc) {
    if (value != Complex{1.0, 0.0}) out.bonds_.push_back(Bond{set, value});
  }
  out.labels_ = std::move(labels);
  return out;
}

Complex w_conditional(const InteractionModel& model, SiteSet x, SiteSet boundary) {
  if (x.empty()) fail(ErrorKind::kInvalidArgument, "W(X|B) is undefined for X = {}");
  if (x.intersects(boundary)) {
    return x.is_singleton() ? Complex{} : Complex{1.0, 0.0};
  }
  // Every W(X u C), C subset of B, is a bond E with X subset E subset X u B.
  Complex product{1.0, 0.0};
  const SiteSet hull = x | boundary;
  for (const Bond& b : model.bonds()) {
    if (x.is_subset_of(b.set) && b.set.is_subset_of(hull)) product *= b.value;
  }
  return product;
}

Complex kappa_conditional(const InteractionModel& model, SiteSet x, SiteSet boundary) {
  if (x.empty()) return {1.0, 0.0};
  if (x.intersects(boundary)) return {};
  // Each bond E inside X u B meeting X splits uniquely as S u C with
  // S = E n X non-empty and C = E n B.
  Complex product{1.0, 0.0};
  const SiteSet hull = x | boundary;
  for (const Bond& b : model.bonds()) {
    if (b.set.is_subset_of(hull) && b.set.intersects(x)) product *= b.value;
  }
  return product;
}

Complex monomial(const InteractionModel& model, SiteSet x) {
  Complex product{1.0, 0.0};
  for (Site s : x) product *= model.activity(s);
  return product;
}

InteractionModel condition(const InteractionModel& model, SiteSet boundary) {
  std::vector<Bond> factors;
  factors.reserve(model.bonds().size() + boundary.size());
  for (const Bond& b : model.bonds()) {
    const SiteSet rest = b.set - boundary;
    if (!rest.empty()) factors.push_back(Bond{rest, b.value});
  }
  for (Site y : boundary) factors.push_back(Bond{SiteSet::singleton(y), Complex{}});
  return InteractionModel::from_factors(model.size(), model.activities(), std::move(factors),
                                        model.labels());
}

CriterionParams CriterionParams::from_r(std::vector<double> r) {
  CriterionParams p;
  p.alpha_.reserve(r.size());
  for (double v : r) {
    if (!(v >= 0.0 && v < 1.0)) {
      fail(ErrorKind::kInvalidArgument, "r must lie in [0,1), got " + std::to_string(v));
    }
    p.alpha_.push_back(v / (1.0 - v));
  }
  p.r_ = std::move(r);
  return p;
}

CriterionParams CriterionParams::from_alpha(std::vector<double> alpha) {
  CriterionParams p;
  p.r_.reserve(alpha.size());
  for (double a : alpha) {
    if (!(a >= 0.0 && std::isfinite(a))) {
      fail(ErrorKind::kInvalidArgument, "alpha must be finite and non-negative");
    }
    p.r_.push_back(a / (1.0 + a));
  }
  p.alpha_ = std::move(alpha);
  return p;
}

CriterionParams CriterionParams::uniform_r(unsigned n, double r) {
  return from_r(std::vector<double>(n, r));
}

CriterionParams CriterionParams::uniform_alpha(unsigned n, double alpha) {
  return from_alpha(std::vector<double>(n, alpha));
}

double CriterionParams::alpha_power(SiteSet x) const {
  double p = 1.0;
  for (Site s : x) p *= alpha_[s];
  return p;
}

double CriterionParams::r_power(SiteSet x) const {
  double p = 1.0;
  for (Site s : x) p *= r_[s];
  return p;
}

double CriterionParams::max_alpha_power(SiteSet sites) const {
  if (sites.empty()) return 0.0;
  if (sites.size() > 20) {
    // Closed form for huge bonds: every factor >= 1 helps, otherwise the
    // single largest factor wins.
    double with_large = 1.0;
    double largest = 0.0;
    bool any_large = false;
    for (Site s : sites) {
      largest = std::max(largest, alpha_[s]);
      if (alpha_[s] >= 1.0) {
        with_large *= alpha_[s];
        any_large = true;
      }
    }
    return any_large ? with_large : largest;
  }
  double best = 0.0;
  for_each_subset(sites, [&](SiteSet s) {
    if (!s.empty()) best = std::max(best, alpha_power(s));
  });
  return best;
}

}  // namespace latgas
