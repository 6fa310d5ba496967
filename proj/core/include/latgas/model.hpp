#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latgas/site_set.hpp"

namespace latgas {

using Complex = std::complex<double>;

/// One non-trivial interaction value W(X) (or potential value V(X)).
struct Bond {
  SiteSet set;
  Complex value;
};

/// Activities z and interaction W on a lattice of n <= 30 sites.
///
/// W is stored sparsely: every non-empty subset missing from the bond list
/// has W(X) = 1 exactly. Bonds are kept in canonical SiteSet order. An
/// optional potential V with W = exp(-V) may be attached; when present it
/// determines W.
class InteractionModel {
 public:
  InteractionModel() = default;
  explicit InteractionModel(unsigned n);

  unsigned size() const { return n_; }
  SiteSet lattice() const { return SiteSet::first(n_); }

  Complex activity(Site x) const { return activity_[x]; }
  std::span<const Complex> activities() const { return activity_; }
  void set_activity(Site x, Complex z);
  /// max_x |z(x)|
  double max_abs_activity() const;

  /// W(X); 1 for any set without a stored bond (including the empty set).
  Complex w(SiteSet x) const;
  std::span<const Bond> bonds() const { return bonds_; }

  /// Store W(X). Rejects X = {} , X outside the lattice, the value 1, and
  /// non-finite values.
  void set_w(SiteSet x, Complex value);

  bool has_potential() const { return potential_.has_value(); }
  std::span<const Bond> potential() const;
  /// V(X), 0 when unlisted. Requires has_potential().
  Complex v(SiteSet x) const;
  /// Declare that W comes from a potential (V = 0 until entries are set).
  void attach_potential();
  /// Store V(X) and the matching W(X) = exp(-V(X)).
  void set_potential(SiteSet x, Complex v);

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);
  std::string label(Site x) const;

  /// Build a model from an arbitrary (X, W) list, multiplying duplicate
  /// keys together and dropping every key whose product is exactly 1 or
  /// whose set is empty. Used to materialize derived interactions.
  static InteractionModel from_factors(unsigned n, std::span<const Complex> activity,
                                       std::vector<Bond> factors,
                                       std::vector<std::string> labels = {});

 private:
  void check_set(SiteSet x, const char* what) const;

  unsigned n_ = 0;
  std::vector<Complex> activity_;
  std::vector<Bond> bonds_;
  std::optional<std::vector<Bond>> potential_;
  std::vector<std::string> labels_;
};

/// W(X|B): the product of W(X u C) over C subset of B when X and B are
/// disjoint, 0 when X = {x} with x in B, and 1 otherwise. X must be
/// non-empty.
Complex w_conditional(const InteractionModel& model, SiteSet x, SiteSet boundary);

/// kappa(X|B) = product of W(S|B) over non-empty S subset of X.
Complex kappa_conditional(const InteractionModel& model, SiteSet x, SiteSet boundary);

/// kappa(X) = kappa(X|{}).
inline Complex kappa(const InteractionModel& model, SiteSet x) {
  return kappa_conditional(model, x, SiteSet{});
}

/// z^X
Complex monomial(const InteractionModel& model, SiteSet x);

/// The model whose interaction is Y -> W(Y|B), so that its Boltzmann factor
/// is kappa(.|B). The potential is not carried over.
InteractionModel condition(const InteractionModel& model, SiteSet boundary);

/// Per-site parameters r in [0,1) and alpha = r/(1-r).
class CriterionParams {
 public:
  CriterionParams() = default;

  static CriterionParams from_r(std::vector<double> r);
  static CriterionParams from_alpha(std::vector<double> alpha);
  static CriterionParams uniform_r(unsigned n, double r);
  static CriterionParams uniform_alpha(unsigned n, double alpha);

  unsigned size() const { return static_cast<unsigned>(r_.size()); }
  double r(Site x) const { return r_[x]; }
  double alpha(Site x) const { return alpha_[x]; }

  /// alpha^X
  double alpha_power(SiteSet x) const;
  /// r^X
  double r_power(SiteSet x) const;
  /// Largest alpha^S over non-empty S subset of `sites`; 0 when `sites` is empty.
  double max_alpha_power(SiteSet sites) const;

 private:
  std::vector<double> r_;
  std::vector<double> alpha_;
};

}  // namespace latgas
