#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "latgas/error.hpp"
#include "latgas/model.hpp"
#include "latgas/parallel.hpp"

/// Kirkwood-Salsburg hierarchy: the kernel gamma, the KS operator on tables
/// over a finite support, Picard iteration and its domination ansatz.
namespace latgas::ks {

/// (s, N, B) of gamma(s, N | B).
struct KernelQuery {
  Site root = 0;
  SiteSet shift;
  SiteSet boundary;
};

/// sum over M subset of N of (-1)^{|N \ M|} kappa(s | B u M). |N| <= 20.
Complex gamma_mobius(const InteractionModel& model, const KernelQuery& q);

/// Sum over collections C of subsets of N with union N of
/// prod (W({s} u L | B) - 1). Requires N disjoint from {s} u B, |N| <= 12.
Complex gamma_cover(const InteractionModel& model, const KernelQuery& q);

/// gamma_cover restricted to collections of non-empty L.
Complex gamma_hat(const InteractionModel& model, const KernelQuery& q);

/// {min{L in C : n in L} : n in union C}, in canonical order.
std::vector<SiteSet> minimal_subcover(const std::vector<SiteSet>& collection);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = |gamma(x, N)| alpha^N; rhs = sum over covers of N by bonds through
/// x of prod (bond factor - 1). Requires x not in N.
BoundCheck gamma_alpha_bound(const InteractionModel& model, const CriterionParams& params, Site x,
                             SiteSet shift);

struct SumBoundCheck {
  /// sum over N subset of Lambda of |gamma(x, N)| alpha^N
  double total = 0.0;
  /// the same sum over N subset of Lambda \ {x}
  double reduced = 0.0;
  /// 1 + alpha(x) [x in Lambda]
  double prefactor = 1.0;
  /// product of bond factors over bonds X through x with X \ {x} inside Lambda
  double bound = 1.0;
};

SumBoundCheck sum_gamma_alpha_bound_check(const InteractionModel& model,
                                          const CriterionParams& params, Site x,
                                          SiteSet volume);

/// Values indexed by every subset of a support set U.
template <typename T>
class SubsetTable {
 public:
  SubsetTable() : values_(1) {}
  explicit SubsetTable(SiteSet support, T fill = T{})
      : support_(support), values_(std::size_t{1} << support.size(), fill) {}

  SiteSet support() const { return support_; }
  std::size_t entry_count() const { return values_.size(); }

  bool covers(SiteSet x) const { return x.is_subset_of(support_); }
  std::size_t index(SiteSet x) const {
    if (!covers(x)) {
      fail(ErrorKind::kSupportTooSmall,
           x.to_string() + " lies outside the table support " + support_.to_string());
    }
    return static_cast<std::size_t>(subset_index(support_, x));
  }
  SiteSet subset(std::size_t i) const { return subset_at(support_, i); }

  const T& at(SiteSet x) const { return values_[index(x)]; }
  T& at(SiteSet x) { return values_[index(x)]; }
  const T& operator[](std::size_t i) const { return values_[i]; }
  T& operator[](std::size_t i) { return values_[i]; }
  const std::vector<T>& values() const { return values_; }

 private:
  SiteSet support_;
  std::vector<T> values_;
};

using CorrelationTable = SubsetTable<Complex>;
using RealTable = SubsetTable<double>;

/// Choice of a distinguished site s_X in every non-empty X.
class Selector {
 public:
  using Fn = std::function<Site(SiteSet)>;

  Selector();
  Selector(std::string name, Fn choose);

  static Selector min_site();
  static Selector max_site();
  /// A fixed pseudo-random site of X derived from (seed, X).
  static Selector seeded(std::uint64_t seed);

  Site operator()(SiteSet x) const;
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Fn choose_;
};

/// The KS operator K_Lambda on tables over a support U containing Lambda,
/// with all kernel coefficients precomputed. Coefficients that are exactly
/// zero are not stored.
class KsOperator {
 public:
  KsOperator(const InteractionModel& model, SiteSet volume, SiteSet support,
             const Selector& selector = Selector::min_site(), ExecOptions exec = {});

  SiteSet volume() const { return volume_; }
  SiteSet support() const { return support_; }

  CorrelationTable apply(const CorrelationTable& rho) const;
  /// The dominating operator with |z gamma| in place of z gamma.
  RealTable apply_abs(const RealTable& xi) const;

 private:
  struct Term {
    std::uint32_t target;
    Complex coefficient;
  };
  template <typename Table>
  void check(const Table& t) const;

  SiteSet volume_;
  SiteSet support_;
  ExecOptions exec_;
  // Row i holds the terms of (K rho)(subset i); row 0 is the identity on the empty set.
  std::vector<std::vector<Term>> rows_;
};

/// One application of K_Lambda; the support of rho must contain Lambda.
CorrelationTable ks_apply(const InteractionModel& model, SiteSet volume,
                          const CorrelationTable& rho, const Selector& selector = Selector::min_site());

RealTable ks_tilde_apply(const InteractionModel& model, SiteSet volume, const RealTable& xi,
                         const Selector& selector = Selector::min_site());

/// xi(X) = prod over X n Lambda of alpha times prod over X \ Lambda of r.
double ansatz_xi(const CriterionParams& params, SiteSet volume, SiteSet x);
RealTable ansatz_table(const CriterionParams& params, SiteSet volume, SiteSet support);

struct PicardOptions {
  double tol = 1e-12;
  /// 0 means 10 (|U| + 1).
  std::size_t max_iter = 0;
  ExecOptions exec;
  /// Called after every sweep with the sweep number (from 1) and the iterate.
  std::function<void(std::size_t, const CorrelationTable&)> observer;
};

struct PicardResult {
  CorrelationTable table;
  std::size_t iterations = 0;
  /// sup |K rho - rho| for the returned table.
  double residual = 0.0;
  /// sup change of every sweep.
  std::vector<double> history;
};

/// rho_{n+1} = K_Lambda rho_n from rho_0 = 1_{empty} until the sup change of a
/// sweep drops below tol. Throws NoConvergence after max_iter sweeps.
PicardResult picard_solve(const InteractionModel& model, SiteSet volume, SiteSet support,
                          const Selector& selector = Selector::min_site(),
                          const PicardOptions& options = {});

/// mu(X) = sum over Y subset of Lambda \ X of (-1)^{|Y|} rho(X u Y).
CorrelationTable mu_recover(const CorrelationTable& rho, SiteSet volume);

/// max over X of |mu(X)/mu(empty) - z^X kappa(X)|.
double mu_residual(const InteractionModel& model, const CorrelationTable& mu);

}  // namespace latgas::ks
