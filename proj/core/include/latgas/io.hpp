#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latgas/criteria.hpp"
#include "latgas/exact.hpp"
#include "latgas/hypergraph.hpp"
#include "latgas/ks.hpp"
#include "latgas/model.hpp"

/// JSON model, hypergraph and parameter files, and JSON report rendering.
/// Site references in files are labels; with an integer "sites" count the
/// labels are "0", "1", ...
namespace latgas::io {

struct ModelFile {
  InteractionModel model;
  /// Optional "query": {"pinned": [...], "volume": [...], "boundary": [...]}.
  /// A missing volume means the whole lattice.
  std::optional<exact::PartitionQuery> query;
};

/// Throws Error(kParse) with the offending field path.
ModelFile parse_model(std::string_view text);

struct HypergraphFile {
  hypergraph::Hypergraph graph;
  /// From an optional "activity" block; zeros when absent.
  std::vector<Complex> activity;
  bool has_activity = false;
  std::optional<exact::PartitionQuery> query;
};

HypergraphFile parse_hypergraph(std::string_view text);

/// {"r": ...} or {"alpha": ...}, each a number (uniform), an array in site
/// order or an object keyed by label (missing sites get 0).
CriterionParams parse_params(std::string_view text, const std::vector<std::string>& labels);

/// Labels for n sites: the given labels, or "0".."n-1" when empty.
std::vector<std::string> site_labels(unsigned n, const std::vector<std::string>& labels);

std::string read_file(const std::string& path);

std::string to_json(const criteria::CriterionReport& report,
                    const std::vector<std::string>& labels);
std::string to_json(const hypergraph::ScanReport& report, const std::vector<std::string>& labels);
std::string to_json(const ks::CorrelationTable& table, const std::vector<std::string>& labels);

/// Site labels of a set, in site order.
std::vector<std::string> set_labels(SiteSet s, const std::vector<std::string>& labels);

}  // namespace latgas::io
