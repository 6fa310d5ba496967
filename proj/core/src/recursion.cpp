#include "latgas/recursion.hpp"

#include <algorithm>
#include <optional>

#include "latgas/criteria.hpp"
#include "latgas/error.hpp"
#include "latgas/exact.hpp"

namespace latgas::recursion {

std::vector<SiteSet> relevant_bonds(const InteractionModel& model, Site root, SiteSet volume) {
  std::vector<SiteSet> out;
  for (const Bond& b : model.bonds()) {
    if (b.set.contains(root) && b.set.without(root).is_subset_of(volume)) out.push_back(b.set);
  }
  return out;
}

InterpolationContext make_context(const InteractionModel& model, Site root, SiteSet volume) {
  return InterpolationContext{root, relevant_bonds(model, root, volume), model};
}

Complex interpolated_w(const InterpolationContext& ctx, SiteSet marker, SiteSet y) {
  const Site x = ctx.root;
  if (!y.contains(x)) {
    const SiteSet with_root = y.with(x);
    return with_root < marker ? ctx.base.w(y) * ctx.base.w(with_root) : ctx.base.w(y);
  }
  return y == marker ? ctx.base.w(y) : Complex{1.0, 0.0};
}

InteractionModel interpolate(const InteractionModel& model, Site root, SiteSet marker) {
  if (!marker.contains(root)) {
    fail(ErrorKind::kInvalidArgument,
         "marker bond " + marker.to_string() + " does not contain the root " +
             std::to_string(root));
  }
  std::vector<Bond> factors;
  factors.reserve(model.bonds().size());
  for (const Bond& b : model.bonds()) {
    if (!b.set.contains(root) || b.set == marker) {
      factors.push_back(b);
    } else if (b.set < marker) {
      // Folded onto the partner set; {x} itself becomes empty and drops out.
      factors.push_back(Bond{b.set.without(root), b.value});
    }
  }
  return InteractionModel::from_factors(model.size(), model.activities(), std::move(factors),
                                        model.labels());
}

IdentityCheck interpolation_identity_check(const InteractionModel& model, Site x, SiteSet volume) {
  const Complex zx = model.activity(x) * model.w(SiteSet::singleton(x));
  if (zx == Complex{}) return {Complex{}, Complex{}};
  const Complex lhs = exact::effective_activity(model, x, volume);
  Complex rhs = zx;
  const SiteSet root = SiteSet::singleton(x);
  for (SiteSet bond : relevant_bonds(model, x, volume)) {
    const InteractionModel wx = interpolate(model, x, bond);
    const Complex den = exact::partition_function(wx, volume);
    exact::require_nonvanishing(wx, volume, den, "Z_X(Lambda)");
    rhs *= exact::partition_function(wx, volume, root) / den;
  }
  return {lhs, rhs};
}

Complex interpolated_zhat_product(const InteractionModel& model, Site x, SiteSet volume) {
  InteractionModel unit = model;
  unit.set_activity(x, Complex{1.0, 0.0});
  Complex product{1.0, 0.0};
  for (SiteSet bond : relevant_bonds(model, x, volume)) {
    product *= exact::effective_activity(interpolate(unit, x, bond), x, volume);
  }
  return product;
}

IdentityCheck removal_identity_check(const InteractionModel& model, Site x, SiteSet bond,
                                     SiteSet volume) {
  if (!bond.contains(x)) {
    fail(ErrorKind::kInvalidArgument,
         "bond " + bond.to_string() + " does not contain site " + std::to_string(x));
  }
  const InteractionModel wx = interpolate(model, x, bond);
  if (bond.is_singleton()) {
    return {exact::effective_activity(wx, x, volume),
            model.activity(x) * model.w(SiteSet::singleton(x))};
  }
  const Complex den = exact::partition_function(wx, volume);
  exact::require_nonvanishing(wx, volume, den, "Z_X(Lambda)");
  const Complex lhs = exact::partition_function(wx, volume, SiteSet::singleton(x)) / den;
  const SiteSet rest = bond.without(x);
  Complex rhs{1.0, 0.0};
  if (rest.is_subset_of(volume)) {
    rhs += (model.w(bond) - 1.0) * exact::correlation(wx, rest, volume);
  }
  return {lhs, rhs};
}

namespace {

constexpr double kUnitThreshold = 1e-14;

std::string frame(Site x, SiteSet volume, std::size_t depth) {
  return "zhat(" + std::to_string(x) + ", " + volume.to_string() + ") at depth " +
         std::to_string(depth);
}

class Recursion {
 public:
  Recursion(std::size_t guard, std::vector<RecursionCall>* trace) : guard_(guard), trace_(trace) {}

  // zhat(x, volume) for `model`, whose boundary has already been folded in.
  Complex eval(const InteractionModel& model, Site x, SiteSet volume, std::size_t depth) {
    if (depth > guard_) {
      fail(ErrorKind::kDepthGuardExceeded,
           "recursion depth guard " + std::to_string(guard_) + " exceeded at " +
               frame(x, volume, depth));
    }
    const Complex value = combine(model, x, volume, depth);
    if (trace_ != nullptr) trace_->push_back(RecursionCall{x, volume, depth, value, model});
    return value;
  }

 private:
  Complex combine(const InteractionModel& model, Site x, SiteSet volume, std::size_t depth) {
    const Complex zx = model.activity(x) * model.w(SiteSet::singleton(x));
    if (zx == Complex{}) return zx;

    // Every factor is evaluated before any failure is reported, so that an
    // exactly vanishing factor wins over an undefined one.
    Complex result = zx;
    std::optional<Error> undefined;
    for (SiteSet bond : relevant_bonds(model, x, volume)) {
      if (bond.is_singleton()) continue;
      const InteractionModel wx = interpolate(model, x, bond);
      Complex product{1.0, 0.0};
      bool zero = false;
      std::optional<Error> local;
      for (Site xp : bond.without(x)) {
        const SiteSet pinned = bond.without(x).below(xp);
        const SiteSet sub_volume = volume.without(xp) - pinned;
        try {
          const Complex z = eval(condition(wx, pinned), xp, sub_volume, depth + 1);
          const Complex one_plus = 1.0 + z;
          if (z == Complex{}) {
            zero = true;
          } else if (std::abs(one_plus) <= kUnitThreshold) {
            if (!local) {
              local = Error(ErrorKind::kVanishingDenominator,
                            "1 + zhat vanishes for " + frame(xp, sub_volume, depth + 1) +
                                " inside bond " + bond.to_string() + " of " +
                                frame(x, volume, depth));
            }
          } else {
            product *= z / one_plus;
          }
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kVanishingDenominator) throw;
          if (!local) {
            local = Error(e.kind(), std::string(e.what()) + " <- bond " + bond.to_string() +
                                        " of " + frame(x, volume, depth));
          }
        }
      }
      // A vanishing inner factor makes this bond contribute exactly 1.
      if (zero) continue;
      if (local) {
        if (!undefined) undefined = std::move(local);
        continue;
      }
      const Complex factor = 1.0 + (model.w(bond) - 1.0) * product;
      if (factor == Complex{}) return Complex{};
      result *= factor;
    }
    if (undefined) throw *undefined;
    return result;
  }

  std::size_t guard_;
  std::vector<RecursionCall>* trace_;
};

}  // namespace

Complex recursive_effective_activity(const InteractionModel& model, Site x, SiteSet volume,
                                     SiteSet boundary, const RecursionOptions& options) {
  if (x >= model.size() || !volume.is_subset_of(model.lattice()) ||
      !boundary.is_subset_of(model.lattice())) {
    fail(ErrorKind::kInvalidArgument, "recursion query reaches outside the lattice");
  }
  if (volume.contains(x)) {
    fail(ErrorKind::kInvalidArgument,
         "effective activity needs the site outside the volume, got site " + std::to_string(x) +
             " in " + volume.to_string());
  }
  const std::size_t guard = options.depth_guard == 0 ? volume.size() + 1 : options.depth_guard;
  Recursion rec(guard, options.trace);
  const InteractionModel start = boundary.empty() ? model : condition(model, boundary);
  return rec.eval(start, x, volume - boundary, 0);
}

StabilityCheck stability_lhs_rhs(const InteractionModel& model, const CriterionParams& params,
                                 Site x, SiteSet boundary, SiteSet y) {
  if (boundary.contains(x) || !y.contains(x) || y.intersects(boundary)) {
    fail(ErrorKind::kInvalidArgument, "stability check needs x in Y, x outside B, Y and B disjoint");
  }
  StabilityCheck out;
  out.lhs = criteria::bond_factor(w_conditional(model, y, boundary), params, y.without(x));
  out.rhs = 1.0;
  for (const Bond& b : model.bonds()) {
    if (b.set.contains(x) && (b.set - boundary) == y) {
      out.rhs *= criteria::bond_factor(b.value, params, b.set - boundary.with(x));
    }
  }
  return out;
}

StabilityCheck conditional_stability(const InteractionModel& model,
                                     const CriterionParams& params, Site x, SiteSet boundary) {
  StabilityCheck out;
  out.lhs = criteria::criterion_product(condition(model, boundary), params, x);
  out.rhs = boundary.contains(x) ? 0.0 : criteria::criterion_product(model, params, x);
  return out;
}

StabilityCheck interpolation_stability(const InteractionModel& model,
                                       const CriterionParams& params, Site root, SiteSet marker,
                                       Site y) {
  StabilityCheck out;
  out.lhs = criteria::criterion_product(interpolate(model, root, marker), params, y);
  out.rhs = 1.0;
  for (const Bond& b : model.bonds()) {
    if (!b.set.contains(y)) continue;
    if (b.set.contains(root) && b.set > marker) continue;
    out.rhs *= criteria::bond_factor(b.value, params, b.set.without(y));
  }
  return out;
}

}  // namespace latgas::recursion
