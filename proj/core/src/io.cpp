#include "latgas/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "latgas/error.hpp"

namespace latgas::io {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  fail(ErrorKind::kParse, (path.empty() ? std::string("document") : path) + ": " + what);
}

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("malformed JSON: ") + e.what());
  }
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_fail(path, "non-finite number");
  return v;
}

Complex complex_value(const Json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (!j.is_object()) parse_fail(path, "expected {\"re\": f, \"im\": f} or a number");
  for (const auto& [key, _] : j.items()) {
    if (key != "re" && key != "im") parse_fail(path, "unexpected key \"" + key + "\"");
  }
  const double re = j.contains("re") ? number(j["re"], path + ".re") : 0.0;
  const double im = j.contains("im") ? number(j["im"], path + ".im") : 0.0;
  return {re, im};
}

Json complex_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

class SiteIndex {
 public:
  SiteIndex() = default;

  // "sites": n or an array of distinct string labels.
  explicit SiteIndex(const Json& sites) {
    if (sites.is_number_integer()) {
      const auto n = sites.get<long long>();
      if (n < 0 || n > static_cast<long long>(kMaxSites)) {
        parse_fail("sites", "site count must lie in [0, " + std::to_string(kMaxSites) + "]");
      }
      n_ = static_cast<unsigned>(n);
      for (unsigned i = 0; i < n_; ++i) index_[std::to_string(i)] = i;
    } else if (sites.is_array()) {
      if (sites.size() > kMaxSites) {
        parse_fail("sites", "more than " + std::to_string(kMaxSites) + " sites");
      }
      for (std::size_t i = 0; i < sites.size(); ++i) {
        const std::string path = "sites[" + std::to_string(i) + "]";
        if (!sites[i].is_string()) parse_fail(path, "labels must be strings");
        const std::string label = sites[i].get<std::string>();
        if (!index_.emplace(label, static_cast<Site>(i)).second) {
          parse_fail(path, "duplicate label \"" + label + "\"");
        }
        labels_.push_back(label);
      }
      n_ = static_cast<unsigned>(sites.size());
    } else {
      parse_fail("sites", "expected a site count or an array of labels");
    }
  }

  unsigned size() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }

  Site site(const Json& ref, const std::string& path) const {
    std::string key;
    if (ref.is_string()) {
      key = ref.get<std::string>();
    } else if (ref.is_number_integer()) {
      key = std::to_string(ref.get<long long>());
    } else {
      parse_fail(path, "site references must be labels");
    }
    auto it = index_.find(key);
    if (it == index_.end()) parse_fail(path, "unknown site \"" + key + "\"");
    return it->second;
  }

  Site site_key(const std::string& key, const std::string& path) const {
    auto it = index_.find(key);
    if (it == index_.end()) parse_fail(path, "unknown site \"" + key + "\"");
    return it->second;
  }

  SiteSet set(const Json& arr, const std::string& path) const {
    if (!arr.is_array()) parse_fail(path, "expected an array of sites");
    SiteSet out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      const Site s = site(arr[i], p);
      if (out.contains(s)) parse_fail(p, "site listed twice");
      out = out.with(s);
    }
    return out;
  }

 private:
  unsigned n_ = 0;
  std::map<std::string, Site> index_;
  std::vector<std::string> labels_;
};

void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) parse_fail(path, "unexpected key \"" + key + "\"");
  }
}

std::vector<Complex> parse_activity(const Json& j, const SiteIndex& sites) {
  std::vector<Complex> z(sites.size());
  if (!j.is_object()) parse_fail("activity", "expected an object keyed by site");
  for (const auto& [key, value] : j.items()) {
    const std::string path = "activity." + key;
    z[sites.site_key(key, path)] = complex_value(value, path);
  }
  return z;
}

struct Entry {
  SiteSet set;
  Complex value;
};

std::vector<Entry> parse_entries(const Json& j, const SiteIndex& sites, const std::string& name,
                                 const char* value_key) {
  if (!j.is_array()) parse_fail(name, "expected an array of entries");
  std::vector<Entry> out;
  std::set<SiteSet> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = name + "[" + std::to_string(i) + "]";
    const Json& e = j[i];
    check_keys(e, path, {"subset", "w", "v"});
    if (!e.contains("subset")) parse_fail(path, "missing \"subset\"");
    const SiteSet set = sites.set(e["subset"], path + ".subset");
    if (set.empty()) parse_fail(path + ".subset", "the empty set carries no interaction");
    if (!seen.insert(set).second) parse_fail(path + ".subset", "duplicate subset");
    const char* key = e.contains(value_key) ? value_key : (e.contains("w") ? "w" : "v");
    if (!e.contains(key)) parse_fail(path, std::string("missing \"") + value_key + "\"");
    out.push_back({set, complex_value(e[key], path + "." + key)});
  }
  return out;
}

std::optional<exact::PartitionQuery> parse_query(const Json& root, const SiteIndex& sites) {
  if (!root.contains("query")) return std::nullopt;
  const Json& q = root["query"];
  check_keys(q, "query", {"pinned", "volume", "boundary"});
  exact::PartitionQuery out;
  out.volume = SiteSet::first(sites.size());
  if (q.contains("pinned")) out.pinned = sites.set(q["pinned"], "query.pinned");
  if (q.contains("volume")) out.volume = sites.set(q["volume"], "query.volume");
  if (q.contains("boundary")) out.boundary = sites.set(q["boundary"], "query.boundary");
  return out;
}

template <typename F>
auto rethrow_as_parse(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse) throw;
    parse_fail(path, e.what());
  }
}

std::vector<double> per_site_values(const Json& j, const std::string& path,
                                    const std::vector<std::string>& labels) {
  const std::size_t n = labels.size();
  std::vector<double> out(n, 0.0);
  if (j.is_number()) {
    out.assign(n, number(j, path));
  } else if (j.is_array()) {
    if (j.size() != n) {
      parse_fail(path, "expected " + std::to_string(n) + " values, got " + std::to_string(j.size()));
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = number(j[i], path + "[" + std::to_string(i) + "]");
  } else if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      std::size_t i = 0;
      while (i < n && labels[i] != key) ++i;
      if (i == n) parse_fail(path + "." + key, "unknown site \"" + key + "\"");
      out[i] = number(value, path + "." + key);
    }
  } else {
    parse_fail(path, "expected a number, an array or an object keyed by site");
  }
  return out;
}

}  // namespace

std::vector<std::string> site_labels(unsigned n, const std::vector<std::string>& labels) {
  if (!labels.empty()) return labels;
  std::vector<std::string> out;
  for (unsigned i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

std::vector<std::string> set_labels(SiteSet s, const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  for (Site x : s) out.push_back(x < labels.size() ? labels[x] : std::to_string(x));
  return out;
}

ModelFile parse_model(std::string_view text) {
  const Json root = parse_document(text);
  check_keys(root, "", {"sites", "activity", "interaction", "potential", "query"});
  if (!root.contains("sites")) parse_fail("", "missing \"sites\"");
  const SiteIndex sites(root["sites"]);
  ModelFile out;
  out.model = InteractionModel(sites.size());
  out.model.set_labels(sites.labels());
  if (root.contains("activity")) {
    const std::vector<Complex> z = parse_activity(root["activity"], sites);
    for (Site x = 0; x < sites.size(); ++x) out.model.set_activity(x, z[x]);
  }
  std::vector<Entry> interaction;
  if (root.contains("interaction")) {
    interaction = parse_entries(root["interaction"], sites, "interaction", "w");
  }
  if (root.contains("potential")) {
    const std::vector<Entry> potential = parse_entries(root["potential"], sites, "potential", "v");
    out.model.attach_potential();
    for (std::size_t i = 0; i < potential.size(); ++i) {
      rethrow_as_parse("potential[" + std::to_string(i) + "]",
                       [&] { out.model.set_potential(potential[i].set, potential[i].value); });
    }
    // A W block next to V must agree with exp(-V).
    for (std::size_t i = 0; i < interaction.size(); ++i) {
      const Complex expected = out.model.w(interaction[i].set);
      if (std::abs(expected - interaction[i].value) > 1e-12 * std::max(1.0, std::abs(expected))) {
        parse_fail("interaction[" + std::to_string(i) + "]",
                   "W disagrees with exp(-V) on the same subset");
      }
    }
  } else {
    for (std::size_t i = 0; i < interaction.size(); ++i) {
      rethrow_as_parse("interaction[" + std::to_string(i) + "]",
                       [&] { out.model.set_w(interaction[i].set, interaction[i].value); });
    }
  }
  out.query = parse_query(root, sites);
  return out;
}

HypergraphFile parse_hypergraph(std::string_view text) {
  const Json root = parse_document(text);
  check_keys(root, "", {"sites", "edges", "activity", "query"});
  if (!root.contains("sites")) parse_fail("", "missing \"sites\"");
  const SiteIndex sites(root["sites"]);
  HypergraphFile out;
  out.graph = hypergraph::Hypergraph(sites.size());
  out.graph.set_labels(sites.labels());
  if (root.contains("edges")) {
    const Json& edges = root["edges"];
    if (!edges.is_array()) parse_fail("edges", "expected an array of site arrays");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string path = "edges[" + std::to_string(i) + "]";
      const SiteSet e = sites.set(edges[i], path);
      if (e.empty()) parse_fail(path, "empty hyperedge");
      if (out.graph.has_edge(e)) parse_fail(path, "duplicate hyperedge");
      out.graph.add_edge(e);
    }
  }
  out.activity.assign(sites.size(), Complex{});
  if (root.contains("activity")) {
    out.activity = parse_activity(root["activity"], sites);
    out.has_activity = true;
  }
  out.query = parse_query(root, sites);
  return out;
}

CriterionParams parse_params(std::string_view text, const std::vector<std::string>& labels) {
  const Json root = parse_document(text);
  check_keys(root, "", {"r", "alpha"});
  const bool has_r = root.contains("r");
  const bool has_alpha = root.contains("alpha");
  if (has_r == has_alpha) parse_fail("", "give exactly one of \"r\" and \"alpha\"");
  if (has_r) {
    std::vector<double> r = per_site_values(root["r"], "r", labels);
    return rethrow_as_parse("r", [&] { return CriterionParams::from_r(std::move(r)); });
  }
  std::vector<double> alpha = per_site_values(root["alpha"], "alpha", labels);
  return rethrow_as_parse("alpha", [&] { return CriterionParams::from_alpha(std::move(alpha)); });
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kParse, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string to_json(const criteria::CriterionReport& report,
                    const std::vector<std::string>& labels) {
  Json sites = Json::array();
  for (const criteria::SiteResult& s : report.per_site) {
    sites.push_back(Json{{"site", s.site < labels.size() ? labels[s.site] : std::to_string(s.site)},
                         {"lhs", s.lhs},
                         {"rhs", s.rhs},
                         {"ok", s.satisfied}});
  }
  return Json{{"criterion", criteria::to_string(report.criterion)},
              {"overall", report.overall},
              {"sites", std::move(sites)}}
      .dump(2);
}

std::string to_json(const hypergraph::ScanReport& report, const std::vector<std::string>& labels) {
  Json argmin = Json::object();
  for (std::size_t x = 0; x < report.argmin_activity.size(); ++x) {
    argmin[x < labels.size() ? labels[x] : std::to_string(x)] =
        complex_json(report.argmin_activity[x]);
  }
  return Json{{"rule", hypergraph::to_string(report.rule)},
              {"Delta", report.delta},
              {"samples", report.samples},
              {"min_abs_Z", report.min_abs_z},
              {"argmin_activity", std::move(argmin)},
              {"seed", report.seed},
              {"uniform", report.uniform},
              {"argmin_sample", report.argmin_sample},
              {"lower_bound", report.lower_bound},
              {"passed", report.passed}}
      .dump(2);
}

std::string to_json(const ks::CorrelationTable& table, const std::vector<std::string>& labels) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < table.entry_count(); ++i) {
    entries.push_back(Json{{"subset", set_labels(table.subset(i), labels)},
                           {"re", table[i].real()},
                           {"im", table[i].imag()}});
  }
  return Json{{"support", set_labels(table.support(), labels)}, {"entries", std::move(entries)}}
      .dump(2);
}

}  // namespace latgas::io
