#include "latgas/ks.hpp"

#include <algorithm>
#include <cmath>

#include "latgas/criteria.hpp"

namespace latgas::ks {
namespace {

// Subset-sum dynamic programme over unions: g[U] accumulates the weight of
// all collections processed so far whose union is U. Each candidate L joins
// a collection at most once.
template <typename T, typename Factor>
T cover_sum(SiteSet target, bool include_empty, Factor&& factor) {
  const std::size_t count = std::size_t{1} << target.size();
  std::vector<T> g(count, T{});
  g[0] = T{1.0};
  for (std::size_t l = include_empty ? 0 : 1; l < count; ++l) {
    const T f = factor(subset_at(target, l));
    if (f == T{}) continue;
    for (std::size_t u = count; u-- > 0;) {
      if (g[u] != T{}) g[u | l] += g[u] * f;
    }
  }
  // Bit k of an index selects the k-th site of `target`, so unions of
  // subsets are bitwise ors of indices.
  return g[count - 1];
}

void check_cover_query(const KernelQuery& q) {
  if (q.shift.intersects(q.boundary.with(q.root))) {
    fail(ErrorKind::kInvalidArgument,
         "the cover formula needs N disjoint from {s} u B, got N = " + q.shift.to_string());
  }
  if (q.shift.size() > 12) fail(ErrorKind::kInvalidArgument, "cover formula limited to |N| <= 12");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// gamma(s, N | B) for every N subset of `free`, indexed like subsets of
// `free`, via an in-place Moebius transform of M -> kappa(s | B u M).
std::vector<Complex> gamma_row(const InteractionModel& model, Site s, SiteSet boundary,
                               SiteSet free) {
  const std::size_t count = std::size_t{1} << free.size();
  std::vector<Complex> f(count);
  const SiteSet root = SiteSet::singleton(s);
  for (std::size_t i = 0; i < count; ++i) {
    f[i] = kappa_conditional(model, root, boundary | subset_at(free, i));
  }
  for (std::size_t bit = 1; bit < count; bit <<= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      if (i & bit) f[i] -= f[i ^ bit];
    }
  }
  return f;
}

}  // namespace

Complex gamma_mobius(const InteractionModel& model, const KernelQuery& q) {
  if (q.shift.size() > 20) fail(ErrorKind::kInvalidArgument, "Moebius sum limited to |N| <= 20");
  const SiteSet root = SiteSet::singleton(q.root);
  Complex total{};
  for_each_subset(q.shift, [&](SiteSet m) {
    const Complex k = kappa_conditional(model, root, q.boundary | m);
    total += ((q.shift - m).size() % 2 == 0) ? k : -k;
  });
  return total;
}

Complex gamma_cover(const InteractionModel& model, const KernelQuery& q) {
  check_cover_query(q);
  return cover_sum<Complex>(q.shift, true, [&](SiteSet l) {
    return w_conditional(model, l.with(q.root), q.boundary) - 1.0;
  });
}

Complex gamma_hat(const InteractionModel& model, const KernelQuery& q) {
  check_cover_query(q);
  return cover_sum<Complex>(q.shift, false, [&](SiteSet l) {
    return w_conditional(model, l.with(q.root), q.boundary) - 1.0;
  });
}

std::vector<SiteSet> minimal_subcover(const std::vector<SiteSet>& collection) {
  std::vector<SiteSet> sorted = collection;
  std::sort(sorted.begin(), sorted.end());
  SiteSet all;
  for (SiteSet l : sorted) all |= l;
  std::vector<SiteSet> out;
  for (Site n : all) {
    const auto it =
        std::find_if(sorted.begin(), sorted.end(), [n](SiteSet l) { return l.contains(n); });
    out.push_back(*it);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BoundCheck gamma_alpha_bound(const InteractionModel& model, const CriterionParams& params, Site x,
                             SiteSet shift) {
  if (shift.contains(x)) fail(ErrorKind::kInvalidArgument, "gamma bound needs x outside N");
  BoundCheck out;
  out.lhs = std::abs(gamma_mobius(model, {x, shift, SiteSet{}})) * params.alpha_power(shift);
  out.rhs = cover_sum<double>(shift, true, [&](SiteSet l) {
    const SiteSet bond = l.with(x);
    return criteria::bond_factor(model.w(bond), params, l) - 1.0;
  });
  return out;
}

SumBoundCheck sum_gamma_alpha_bound_check(const InteractionModel& model,
                                          const CriterionParams& params, Site x,
                                          SiteSet volume) {
  SumBoundCheck out;
  const std::vector<Complex> gamma = gamma_row(model, x, SiteSet{}, volume);
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const SiteSet n = subset_at(volume, i);
    const double term = std::abs(gamma[i]) * params.alpha_power(n);
    out.total += term;
    if (!n.contains(x)) out.reduced += term;
  }
  out.prefactor = 1.0 + (volume.contains(x) ? params.alpha(x) : 0.0);
  for (const Bond& b : model.bonds()) {
    if (b.set.contains(x) && b.set.without(x).is_subset_of(volume)) {
      out.bound *= criteria::bond_factor(b.value, params, b.set.without(x));
    }
  }
  return out;
}

Selector::Selector() : Selector(min_site()) {}

Selector::Selector(std::string name, Fn choose) : name_(std::move(name)), choose_(std::move(choose)) {}

Selector Selector::min_site() {
  return Selector("min", [](SiteSet x) { return x.min_site(); });
}

Selector Selector::max_site() {
  return Selector("max", [](SiteSet x) { return x.max_site(); });
}

Selector Selector::seeded(std::uint64_t seed) {
  return Selector("seeded:" + std::to_string(seed), [seed](SiteSet x) {
    const std::uint64_t h = splitmix64(seed ^ splitmix64(x.bits()));
    std::uint64_t k = h % x.size();
    for (Site s : x) {
      if (k-- == 0) return s;
    }
    return x.min_site();
  });
}

Site Selector::operator()(SiteSet x) const {
  if (x.empty()) fail(ErrorKind::kInvalidArgument, "selector applied to the empty set");
  const Site s = choose_(x);
  if (!x.contains(s)) {
    fail(ErrorKind::kInvalidArgument,
         "selector " + name_ + " chose site " + std::to_string(s) + " outside " + x.to_string());
  }
  return s;
}

KsOperator::KsOperator(const InteractionModel& model, SiteSet volume, SiteSet support,
                       const Selector& selector, ExecOptions exec)
    : volume_(volume), support_(support), exec_(exec) {
  if (!volume.is_subset_of(support)) {
    fail(ErrorKind::kSupportTooSmall, "table support " + support.to_string() +
                                          " does not contain the volume " + volume.to_string());
  }
  if (!support.is_subset_of(model.lattice())) {
    fail(ErrorKind::kInvalidArgument, "table support reaches outside the lattice");
  }
  const std::size_t count = std::size_t{1} << support.size();
  rows_.resize(count);
  parallel_for(count - 1, exec.threads, [&](std::size_t k) {
    const std::size_t i = k + 1;
    const SiteSet x = subset_at(support, i);
    const Site s = selector(x);
    const Complex zs = model.activity(s);
    if (zs == Complex{}) return;
    const SiteSet rest = x.without(s);
    const SiteSet free = volume - rest;
    const std::vector<Complex> gamma = gamma_row(model, s, rest, free);
    std::vector<Term>& row = rows_[i];
    for (std::size_t j = 0; j < gamma.size(); ++j) {
      if (gamma[j] == Complex{}) continue;
      const SiteSet target = rest | subset_at(free, j);
      row.push_back({static_cast<std::uint32_t>(subset_index(support, target)), zs * gamma[j]});
    }
  });
}

template <typename Table>
void KsOperator::check(const Table& t) const {
  if (t.support() != support_) {
    fail(ErrorKind::kSupportTooSmall, "table support " + t.support().to_string() +
                                          " differs from the operator support " +
                                          support_.to_string());
  }
}

CorrelationTable KsOperator::apply(const CorrelationTable& rho) const {
  check(rho);
  CorrelationTable out(support_);
  out[0] = rho[0];
  parallel_for(rows_.size() - 1, exec_.threads, [&](std::size_t k) {
    Complex acc{};
    for (const Term& t : rows_[k + 1]) acc += t.coefficient * rho[t.target];
    out[k + 1] = acc;
  });
  return out;
}

RealTable KsOperator::apply_abs(const RealTable& xi) const {
  check(xi);
  RealTable out(support_);
  out[0] = xi[0];
  parallel_for(rows_.size() - 1, exec_.threads, [&](std::size_t k) {
    double acc = 0.0;
    for (const Term& t : rows_[k + 1]) acc += std::abs(t.coefficient) * xi[t.target];
    out[k + 1] = acc;
  });
  return out;
}

CorrelationTable ks_apply(const InteractionModel& model, SiteSet volume,
                          const CorrelationTable& rho, const Selector& selector) {
  return KsOperator(model, volume, rho.support(), selector).apply(rho);
}

RealTable ks_tilde_apply(const InteractionModel& model, SiteSet volume, const RealTable& xi,
                         const Selector& selector) {
  return KsOperator(model, volume, xi.support(), selector).apply_abs(xi);
}

double ansatz_xi(const CriterionParams& params, SiteSet volume, SiteSet x) {
  double value = 1.0;
  for (Site s : x) value *= volume.contains(s) ? params.alpha(s) : params.r(s);
  return value;
}

RealTable ansatz_table(const CriterionParams& params, SiteSet volume, SiteSet support) {
  RealTable out(support);
  for (std::size_t i = 0; i < out.entry_count(); ++i) {
    out[i] = ansatz_xi(params, volume, out.subset(i));
  }
  return out;
}

namespace {

double sup_distance(const CorrelationTable& a, const CorrelationTable& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.entry_count(); ++i) {
    const double step = std::abs(a[i] - b[i]);
    // NaN propagates as an infinite change.
    d = std::isnan(step) ? INFINITY : std::max(d, step);
  }
  return d;
}

}  // namespace

PicardResult picard_solve(const InteractionModel& model, SiteSet volume, SiteSet support,
                          const Selector& selector, const PicardOptions& options) {
  if (!(options.tol > 0.0)) fail(ErrorKind::kInvalidArgument, "tolerance must be positive");
  const KsOperator op(model, volume, support, selector, options.exec);
  const std::size_t max_iter =
      options.max_iter == 0 ? 10 * (static_cast<std::size_t>(support.size()) + 1)
                            : options.max_iter;
  PicardResult result;
  CorrelationTable rho(support);
  rho[0] = Complex{1.0, 0.0};
  for (std::size_t n = 1; n <= max_iter; ++n) {
    CorrelationTable next = op.apply(rho);
    const double change = sup_distance(next, rho);
    result.history.push_back(change);
    rho = std::move(next);
    if (options.observer) options.observer(n, rho);
    if (change < options.tol) {
      result.iterations = n;
      result.residual = sup_distance(op.apply(rho), rho);
      result.table = std::move(rho);
      return result;
    }
  }
  throw NoConvergence("Picard iteration did not reach tolerance " + std::to_string(options.tol) +
                          " within " + std::to_string(max_iter) + " sweeps (last change " +
                          std::to_string(result.history.back()) + ")",
                      result.history);
}

CorrelationTable mu_recover(const CorrelationTable& rho, SiteSet volume) {
  const SiteSet support = rho.support();
  if (!volume.is_subset_of(support)) {
    fail(ErrorKind::kSupportTooSmall, "table support " + support.to_string() +
                                          " does not contain the volume " + volume.to_string());
  }
  CorrelationTable mu(support);
  for (std::size_t i = 0; i < mu.entry_count(); ++i) {
    const SiteSet x = mu.subset(i);
    Complex acc{};
    for_each_subset(volume - x, [&](SiteSet y) {
      const Complex v = rho.at(x | y);
      acc += (y.size() % 2 == 0) ? v : -v;
    });
    mu[i] = acc;
  }
  return mu;
}

double mu_residual(const InteractionModel& model, const CorrelationTable& mu) {
  const Complex base = mu[0];
  double worst = 0.0;
  for (std::size_t i = 0; i < mu.entry_count(); ++i) {
    const SiteSet x = mu.subset(i);
    const double d = std::abs(mu[i] / base - monomial(model, x) * kappa(model, x));
    worst = std::isnan(d) ? INFINITY : std::max(worst, d);
  }
  return worst;
}

}  // namespace latgas::ks
