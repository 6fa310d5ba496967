#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latgas/criteria.hpp"
#include "latgas/model.hpp"
#include "latgas/parallel.hpp"

/// Pure hard-core interactions encoded as hypergraphs: W(e) = 0 on edges,
/// 1 elsewhere.
namespace latgas::hypergraph {

class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(unsigned n);
  /// Duplicate edges are merged; empty edges and edges outside the lattice
  /// are rejected.
  Hypergraph(unsigned n, std::vector<SiteSet> edges);

  unsigned size() const { return n_; }
  SiteSet lattice() const { return SiteSet::first(n_); }
  /// Edges in canonical order.
  std::span<const SiteSet> edges() const { return edges_; }
  bool has_edge(SiteSet e) const;
  void add_edge(SiteSet e);

  /// Edges containing x, in canonical order.
  std::vector<SiteSet> incident(Site x) const;
  unsigned degree(Site x) const;
  unsigned max_degree() const;

  /// Set by contraction when some edge lay entirely inside the contracted
  /// set, so that its remainder would have been the empty set.
  bool annihilated() const { return annihilated_; }
  void set_annihilated(bool value) { annihilated_ = value; }

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.annihilated_ == b.annihilated_;
  }

 private:
  unsigned n_ = 0;
  std::vector<SiteSet> edges_;
  bool annihilated_ = false;
  std::vector<std::string> labels_;
};

InteractionModel to_interaction(const Hypergraph& h, std::span<const Complex> activity);

/// Sum of z^X over subsets X of `volume` containing no edge.
Complex independence_polynomial(const Hypergraph& h, std::span<const Complex> activity,
                                SiteSet volume);

/// Independent subsets of `volume` in depth-first order.
std::vector<SiteSet> independent_sets(const Hypergraph& h, SiteSet volume);

/// h/B = {e \ B} u {{y} : y in B}.
Hypergraph contract(const Hypergraph& h, SiteSet boundary);

/// h_e = {b \ {x} : b in h(x), b precedes e} u (h \ (h(x) \ {e})).
Hypergraph interpolate_edge(const Hypergraph& h, Site x, SiteSet e);

/// |z(x)| <= Delta^d / (Delta+1)^(d+1) and d <= Delta, d = deg(x).
/// Sites carrying a singleton edge pass with lhs 0.
criteria::CriterionReport galvin_check(const Hypergraph& h, std::span<const Complex> activity,
                                       double delta);
double galvin_bound(double delta, unsigned degree);

/// |z(x)| < 1 (d = 0), < 1/Delta (d = 1), <= (Delta-1)^(d-1)/Delta^d (d >= 2)
/// and d <= Delta. Sites carrying a singleton edge pass with lhs 0.
criteria::CriterionReport bencs_buys_check(const Hypergraph& h,
                                           std::span<const Complex> activity, double delta);
double bencs_buys_bound(double delta, unsigned degree);

struct HardCoreCall {
  Site root = 0;
  SiteSet volume;
  std::size_t depth = 0;
  Complex value;
  /// Every edge through the root has the rest of its sites in the volume.
  bool all_edges_inside = false;
};

/// zhat(x, Lambda) for the hard-core interaction of h, by the recursion over
/// interpolated, contracted hypergraphs.
Complex hard_core_recursive_zhat(const Hypergraph& h, std::span<const Complex> activity, Site x,
                                 SiteSet volume, std::vector<HardCoreCall>* trace = nullptr);

enum class RadiusRule { kGalvin, kBencsBuys };
const char* to_string(RadiusRule rule);

struct ScanOptions {
  RadiusRule rule = RadiusRule::kBencsBuys;
  double delta = 2.0;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  /// Use the degree-free radius (Delta^Delta/(Delta+1)^(Delta+1) or
  /// (Delta-1)^(Delta-1)/Delta^Delta) on every site instead of the per-site
  /// bound for the site's own degree.
  bool uniform = false;
  ExecOptions exec;
};

struct ScanReport {
  RadiusRule rule = RadiusRule::kBencsBuys;
  double delta = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool uniform = false;
  std::vector<double> radius;
  double min_abs_z = 0.0;
  std::uint64_t argmin_sample = 0;
  std::vector<Complex> argmin_activity;
  /// (Delta/(Delta+1))^n - 1e-9 for the Galvin rule, 0 otherwise.
  double lower_bound = 0.0;
  /// min |Z| > 0, and min |Z| >= lower_bound for the Galvin rule.
  bool passed = false;
};

/// Per-site sampling radii for a rule (0.999 shrink where the bound is strict).
std::vector<double> scan_radii(const Hypergraph& h, RadiusRule rule, double delta, bool uniform);

/// The activity vector of sample `index`; depends only on (seed, index).
std::vector<Complex> sample_activity(std::span<const double> radius, std::uint64_t seed,
                                     std::uint64_t index);

/// Samples activities uniformly in the polydisc and records min |Z(lattice)|.
ScanReport polydisc_scan(const Hypergraph& h, const ScanOptions& options);

}  // namespace latgas::hypergraph
