#include "latgas/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "latgas/error.hpp"

namespace latgas::hypergraph {

Hypergraph::Hypergraph(unsigned n) : n_(n) {
  if (n > kMaxSites) {
    fail(ErrorKind::kInvalidArgument,
         "lattice of " + std::to_string(n) + " sites exceeds the limit of " +
             std::to_string(kMaxSites));
  }
}

Hypergraph::Hypergraph(unsigned n, std::vector<SiteSet> edges) : Hypergraph(n) {
  for (SiteSet e : edges) add_edge(e);
}

bool Hypergraph::has_edge(SiteSet e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

void Hypergraph::add_edge(SiteSet e) {
  if (e.empty()) fail(ErrorKind::kInvalidArgument, "empty hyperedge");
  if (!e.is_subset_of(lattice())) {
    fail(ErrorKind::kInvalidArgument, "hyperedge " + e.to_string() + " outside the lattice");
  }
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) edges_.insert(it, e);
}

std::vector<SiteSet> Hypergraph::incident(Site x) const {
  std::vector<SiteSet> out;
  for (SiteSet e : edges_) {
    if (e.contains(x)) out.push_back(e);
  }
  return out;
}

unsigned Hypergraph::degree(Site x) const {
  unsigned d = 0;
  for (SiteSet e : edges_) d += e.contains(x) ? 1 : 0;
  return d;
}

unsigned Hypergraph::max_degree() const {
  unsigned d = 0;
  for (Site x = 0; x < n_; ++x) d = std::max(d, degree(x));
  return d;
}

void Hypergraph::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != n_) {
    fail(ErrorKind::kInvalidArgument, "label count does not match the lattice size");
  }
  labels_ = std::move(labels);
}

namespace {

void check_activity(const Hypergraph& h, std::span<const Complex> activity) {
  if (activity.size() != h.size()) {
    fail(ErrorKind::kInvalidArgument, "activity vector has " + std::to_string(activity.size()) +
                                          " entries for " + std::to_string(h.size()) + " sites");
  }
}

// Depth-first walk over independent subsets of `volume`, adding sites in
// ascending order. Each edge is checked once, when its largest site joins.
class IndependentWalk {
 public:
  IndependentWalk(const Hypergraph& h, SiteSet volume) : order_(volume.sites()) {
    closing_.resize(h.size());
    for (SiteSet e : h.edges()) {
      if (e.is_subset_of(volume)) closing_[e.max_site()].push_back(e);
    }
  }

  template <typename F>
  void run(F&& visit) const {
    visit(SiteSet{}, std::size_t{0});
    step(SiteSet{}, 0, visit);
  }

 private:
  template <typename F>
  void step(SiteSet current, std::size_t next, F& visit) const {
    for (std::size_t i = next; i < order_.size(); ++i) {
      const Site s = order_[i];
      const SiteSet grown = current.with(s);
      bool ok = true;
      for (SiteSet e : closing_[s]) {
        if (e.is_subset_of(grown)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (visit(grown, i + 1)) step(grown, i + 1, visit);
    }
  }

  std::vector<Site> order_;
  std::vector<std::vector<SiteSet>> closing_;
};

}  // namespace

InteractionModel to_interaction(const Hypergraph& h, std::span<const Complex> activity) {
  check_activity(h, activity);
  InteractionModel m(h.size());
  for (Site x = 0; x < h.size(); ++x) m.set_activity(x, activity[x]);
  for (SiteSet e : h.edges()) m.set_w(e, Complex{});
  m.set_labels(h.labels());
  return m;
}

std::vector<SiteSet> independent_sets(const Hypergraph& h, SiteSet volume) {
  std::vector<SiteSet> out;
  IndependentWalk(h, volume).run([&](SiteSet s, std::size_t) {
    out.push_back(s);
    return true;
  });
  return out;
}

Complex independence_polynomial(const Hypergraph& h, std::span<const Complex> activity,
                                SiteSet volume) {
  check_activity(h, activity);
  // Recursive accumulation with running products: the value of a node is
  // its weight plus the values of its extensions.
  const std::vector<Site> order = volume.sites();
  std::vector<std::vector<SiteSet>> closing(h.size());
  for (SiteSet e : h.edges()) {
    if (e.is_subset_of(volume)) closing[e.max_site()].push_back(e);
  }
  auto extend = [&](auto&& self, SiteSet current, std::size_t next) -> Complex {
    Complex total{};
    for (std::size_t i = next; i < order.size(); ++i) {
      const Site s = order[i];
      if (activity[s] == Complex{}) continue;
      const SiteSet grown = current.with(s);
      bool ok = true;
      for (SiteSet e : closing[s]) {
        if (e.is_subset_of(grown)) {
          ok = false;
          break;
        }
      }
      if (ok) total += activity[s] * (1.0 + self(self, grown, i + 1));
    }
    return total;
  };
  return 1.0 + extend(extend, SiteSet{}, 0);
}

Hypergraph contract(const Hypergraph& h, SiteSet boundary) {
  Hypergraph out(h.size());
  bool annihilated = h.annihilated();
  for (SiteSet e : h.edges()) {
    const SiteSet rest = e - boundary;
    if (rest.empty()) {
      annihilated = true;
    } else {
      out.add_edge(rest);
    }
  }
  for (Site y : boundary) out.add_edge(SiteSet::singleton(y));
  out.set_annihilated(annihilated);
  out.set_labels(h.labels());
  return out;
}

Hypergraph interpolate_edge(const Hypergraph& h, Site x, SiteSet e) {
  if (!e.contains(x) || !h.has_edge(e)) {
    fail(ErrorKind::kEdgeNotIncident,
         e.to_string() + " is not an edge incident to site " + std::to_string(x));
  }
  Hypergraph out(h.size());
  for (SiteSet b : h.edges()) {
    if (!b.contains(x) || b == e) {
      out.add_edge(b);
    } else if (b < e && !b.is_singleton()) {
      out.add_edge(b.without(x));
    }
  }
  out.set_annihilated(h.annihilated());
  out.set_labels(h.labels());
  return out;
}

double galvin_bound(double delta, unsigned degree) {
  const double d = degree;
  return std::pow(delta, d) / std::pow(delta + 1.0, d + 1.0);
}

double bencs_buys_bound(double delta, unsigned degree) {
  if (degree == 0) return 1.0;
  if (degree == 1) return 1.0 / delta;
  const double d = degree;
  return std::pow(delta - 1.0, d - 1.0) / std::pow(delta, d);
}

criteria::CriterionReport galvin_check(const Hypergraph& h, std::span<const Complex> activity,
                                       double delta) {
  check_activity(h, activity);
  if (!(delta >= 1.0)) fail(ErrorKind::kInvalidArgument, "the Galvin criterion needs Delta >= 1");
  std::vector<criteria::SiteResult> sites;
  for (Site x = 0; x < h.size(); ++x) {
    const unsigned d = h.degree(x);
    const double rhs = galvin_bound(delta, d);
    if (h.has_edge(SiteSet::singleton(x))) {
      sites.push_back({x, 0.0, rhs, true});
      continue;
    }
    const double lhs = std::abs(activity[x]);
    sites.push_back({x, lhs, rhs, d <= delta && lhs <= rhs});
  }
  return criteria::make_report(criteria::CriterionId::kGalvin, std::move(sites));
}

criteria::CriterionReport bencs_buys_check(const Hypergraph& h,
                                           std::span<const Complex> activity, double delta) {
  check_activity(h, activity);
  if (!(delta >= 2.0)) {
    fail(ErrorKind::kInvalidArgument, "the Bencs-Buys criterion needs Delta >= 2");
  }
  std::vector<criteria::SiteResult> sites;
  for (Site x = 0; x < h.size(); ++x) {
    const unsigned d = h.degree(x);
    const double rhs = bencs_buys_bound(delta, d);
    if (h.has_edge(SiteSet::singleton(x))) {
      sites.push_back({x, 0.0, rhs, true});
      continue;
    }
    const double lhs = std::abs(activity[x]);
    const bool within = d >= 2 ? lhs <= rhs : lhs < rhs;
    sites.push_back({x, lhs, rhs, d <= delta && within});
  }
  return criteria::make_report(criteria::CriterionId::kBencsBuys, std::move(sites));
}

namespace {

constexpr double kUnitThreshold = 1e-14;

std::string frame(Site x, SiteSet volume, std::size_t depth) {
  return "zhat(" + std::to_string(x) + ", " + volume.to_string() + ") at depth " +
         std::to_string(depth);
}

class HardCoreRecursion {
 public:
  HardCoreRecursion(std::span<const Complex> activity, std::vector<HardCoreCall>* trace)
      : activity_(activity), trace_(trace) {}

  Complex eval(const Hypergraph& h, Site x, SiteSet volume, std::size_t depth) {
    bool inside = true;
    for (SiteSet e : h.incident(x)) inside = inside && e.without(x).is_subset_of(volume);
    const Complex value = combine(h, x, volume, depth);
    if (trace_ != nullptr) trace_->push_back(HardCoreCall{x, volume, depth, value, inside});
    return value;
  }

 private:
  Complex combine(const Hypergraph& h, Site x, SiteSet volume, std::size_t depth) {
    if (activity_[x] == Complex{} || h.has_edge(SiteSet::singleton(x))) return Complex{};
    Complex result = activity_[x];
    std::optional<Error> undefined;
    for (SiteSet e : h.incident(x)) {
      const SiteSet rest = e.without(x);
      if (!rest.is_subset_of(volume)) continue;
      const Hypergraph he = interpolate_edge(h, x, e);
      Complex product{1.0, 0.0};
      bool zero = false;
      std::optional<Error> local;
      for (Site xp : rest) {
        const SiteSet sub_volume = volume.without(xp);
        try {
          const Complex z = eval(contract(he, rest.below(xp)), xp, sub_volume, depth + 1);
          if (z == Complex{}) {
            zero = true;
          } else if (std::abs(1.0 + z) <= kUnitThreshold) {
            if (!local) {
              local = Error(ErrorKind::kVanishingDenominator,
                            "1 + zhat vanishes for " + frame(xp, sub_volume, depth + 1) +
                                " inside edge " + e.to_string() + " of " +
                                frame(x, volume, depth));
            }
          } else {
            product *= z / (1.0 + z);
          }
        } catch (const Error& err) {
          if (err.kind() != ErrorKind::kVanishingDenominator) throw;
          if (!local) {
            local = Error(err.kind(), std::string(err.what()) + " <- edge " + e.to_string() +
                                          " of " + frame(x, volume, depth));
          }
        }
      }
      if (zero) continue;
      if (local) {
        if (!undefined) undefined = std::move(local);
        continue;
      }
      const Complex factor = 1.0 - product;
      if (factor == Complex{}) return Complex{};
      result *= factor;
    }
    if (undefined) throw *undefined;
    return result;
  }

  std::span<const Complex> activity_;
  std::vector<HardCoreCall>* trace_;
};

}  // namespace

Complex hard_core_recursive_zhat(const Hypergraph& h, std::span<const Complex> activity, Site x,
                                 SiteSet volume, std::vector<HardCoreCall>* trace) {
  check_activity(h, activity);
  if (x >= h.size() || !volume.is_subset_of(h.lattice())) {
    fail(ErrorKind::kInvalidArgument, "recursion query reaches outside the lattice");
  }
  if (volume.contains(x)) {
    fail(ErrorKind::kInvalidArgument,
         "effective activity needs the site outside the volume, got site " + std::to_string(x) +
             " in " + volume.to_string());
  }
  return HardCoreRecursion(activity, trace).eval(h, x, volume, 0);
}

const char* to_string(RadiusRule rule) {
  return rule == RadiusRule::kGalvin ? "galvin" : "bencs-buys";
}

std::vector<double> scan_radii(const Hypergraph& h, RadiusRule rule, double delta, bool uniform) {
  constexpr double kShrink = 0.999;
  std::vector<double> radius(h.size());
  for (Site x = 0; x < h.size(); ++x) {
    const unsigned d = h.degree(x);
    if (rule == RadiusRule::kGalvin) {
      radius[x] = uniform ? std::pow(delta, delta) / std::pow(delta + 1.0, delta + 1.0)
                          : galvin_bound(delta, d);
    } else {
      radius[x] = uniform ? std::pow(delta - 1.0, delta - 1.0) / std::pow(delta, delta)
                          : bencs_buys_bound(delta, d);
      if (d <= 1) radius[x] *= kShrink;
    }
  }
  return radius;
}

std::vector<Complex> sample_activity(std::span<const double> radius, std::uint64_t seed,
                                     std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  // 53 random bits per double keeps the stream identical across standard
  // library implementations.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Complex> z(radius.size());
  for (std::size_t x = 0; x < radius.size(); ++x) {
    const double rho = radius[x] * std::sqrt(unit());
    const double theta = 2.0 * std::numbers::pi * unit();
    z[x] = std::polar(rho, theta);
  }
  return z;
}

ScanReport polydisc_scan(const Hypergraph& h, const ScanOptions& options) {
  const double delta = options.delta;
  if (options.rule == RadiusRule::kGalvin && !(delta >= 1.0)) {
    fail(ErrorKind::kInvalidArgument, "the Galvin radius needs Delta >= 1");
  }
  if (options.rule == RadiusRule::kBencsBuys && !(delta >= 2.0)) {
    fail(ErrorKind::kInvalidArgument, "the Bencs-Buys radius needs Delta >= 2");
  }
  for (Site x = 0; x < h.size(); ++x) {
    if (h.degree(x) > delta) {
      fail(ErrorKind::kDegreeExceeded, "site " + std::to_string(x) + " has degree " +
                                           std::to_string(h.degree(x)) + " > Delta = " +
                                           std::to_string(delta));
    }
  }
  if (options.samples == 0) fail(ErrorKind::kInvalidArgument, "scan needs at least one sample");

  ScanReport report;
  report.rule = options.rule;
  report.delta = delta;
  report.samples = options.samples;
  report.seed = options.seed;
  report.uniform = options.uniform;
  report.radius = scan_radii(h, options.rule, delta, options.uniform);

  const std::vector<SiteSet> independent = independent_sets(h, h.lattice());
  std::vector<double> abs_z(options.samples);
  parallel_for(options.samples, options.exec.threads, [&](std::size_t i) {
    const std::vector<Complex> z = sample_activity(report.radius, options.seed, i);
    Complex total{};
    for (SiteSet s : independent) {
      Complex term{1.0, 0.0};
      for (Site x : s) term *= z[x];
      total += term;
    }
    abs_z[i] = std::abs(total);
  });
  const auto best = std::min_element(abs_z.begin(), abs_z.end());
  report.argmin_sample = static_cast<std::uint64_t>(best - abs_z.begin());
  report.min_abs_z = *best;
  report.argmin_activity = sample_activity(report.radius, options.seed, report.argmin_sample);
  if (options.rule == RadiusRule::kGalvin) {
    report.lower_bound = std::pow(delta / (delta + 1.0), static_cast<double>(h.size())) - 1e-9;
    report.passed = report.min_abs_z > 0.0 && report.min_abs_z >= report.lower_bound;
  } else {
    report.passed = report.min_abs_z > 0.0;
  }
  return report;
}

}  // namespace latgas::hypergraph
