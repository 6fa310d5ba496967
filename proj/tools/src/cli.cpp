#include "latgas_tools/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "latgas/criteria.hpp"
#include "latgas/error.hpp"
#include "latgas/exact.hpp"
#include "latgas/hypergraph.hpp"
#include "latgas/io.hpp"
#include "latgas/ks.hpp"
#include "latgas/recursion.hpp"

namespace latgas::cli {
namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  unsigned threads = 1;
  bool csv = false;
};

// Thrown for problems with flags rather than file contents.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json complex_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

unsigned default_threads() {
  if (const char* env = std::getenv("LATGAS_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("LATGAS_THREADS must be a positive integer, got \"") + env + "\"");
  }
  return 1;
}

class Output {
 public:
  Output(const RunConfig& config, std::ostream& out) : config_(config), out_(out) {}

  void write(const std::string& text) {
    if (config_.output.empty()) {
      out_ << text << '\n';
      return;
    }
    std::ofstream file(config_.output, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + config_.output);
    file << text << '\n';
  }

 private:
  const RunConfig& config_;
  std::ostream& out_;
};

std::string csv_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string join_labels(SiteSet s, const std::vector<std::string>& labels) {
  std::string out;
  for (const std::string& l : io::set_labels(s, labels)) out += (out.empty() ? "" : " ") + l;
  return out;
}

io::ModelFile load_model(const RunConfig& config) {
  return io::parse_model(io::read_file(config.input));
}

exact::PartitionQuery query_or_default(const io::ModelFile& file) {
  if (file.query) return *file.query;
  return exact::PartitionQuery{SiteSet{}, file.model.lattice(), SiteSet{}};
}

int cmd_partition(const RunConfig& config, bool sweep, std::ostream& out) {
  const io::ModelFile file = load_model(config);
  const InteractionModel& model = file.model;
  const exact::PartitionQuery q = query_or_default(file);
  const std::vector<std::string> labels = io::site_labels(model.size(), model.labels());
  const ExecOptions exec{config.threads};
  Output sink(config, out);
  if (!sweep) {
    const Complex z = exact::partition_function(model, q, exec);
    if (config.csv) {
      sink.write("re,im\n" + csv_number(z.real()) + "," + csv_number(z.imag()));
    } else {
      sink.write(Json{{"Z", complex_json(z)}}.dump(2));
    }
    return kOk;
  }
  Json rows = Json::array();
  std::string csv = "k,volume,re,im";
  SiteSet prefix;
  const std::vector<Site> order = q.volume.sites();
  for (std::size_t k = 0; k <= order.size(); ++k) {
    if (k > 0) prefix = prefix.with(order[k - 1]);
    const Complex z =
        exact::partition_function(model, exact::PartitionQuery{q.pinned, prefix, q.boundary}, exec);
    rows.push_back(Json{{"volume", io::set_labels(prefix, labels)}, {"Z", complex_json(z)}});
    csv += "\n" + std::to_string(k) + "," + join_labels(prefix, labels) + "," +
           csv_number(z.real()) + "," + csv_number(z.imag());
  }
  sink.write(config.csv ? csv : Json{{"sweep", std::move(rows)}}.dump(2));
  return kOk;
}

CriterionParams params_for(const InteractionModel& model, const std::string& params_path,
                           std::string& source) {
  if (!params_path.empty()) {
    source = "file";
    return io::parse_params(io::read_file(params_path),
                            io::site_labels(model.size(), model.labels()));
  }
  source = "auto";
  const criteria::KpAutoResult kp = criteria::kp_auto(model);
  return CriterionParams::uniform_alpha(model.size(), 1.0 / kp.c_bar);
}

Json report_json(const criteria::CriterionReport& report, const std::vector<std::string>& labels) {
  return Json::parse(io::to_json(report, labels));
}

int cmd_check(const RunConfig& config, const std::string& criterion_name,
              const std::string& params_path, std::optional<double> delta, std::ostream& out) {
  const auto id = criteria::parse_criterion(criterion_name);
  if (!id) throw ConfigError("unknown criterion \"" + criterion_name + "\"");
  Output sink(config, out);
  criteria::CriterionReport report;
  Json extra = Json::object();
  std::vector<std::string> labels;

  if (*id == criteria::CriterionId::kGalvin || *id == criteria::CriterionId::kBencsBuys) {
    const io::HypergraphFile file = io::parse_hypergraph(io::read_file(config.input));
    labels = io::site_labels(file.graph.size(), file.graph.labels());
    const double floor = *id == criteria::CriterionId::kGalvin ? 1.0 : 2.0;
    const double d = delta.value_or(std::max<double>(floor, file.graph.max_degree()));
    report = *id == criteria::CriterionId::kGalvin
                 ? hypergraph::galvin_check(file.graph, file.activity, d)
                 : hypergraph::bencs_buys_check(file.graph, file.activity, d);
    extra["Delta"] = d;
  } else {
    const io::ModelFile file = load_model(config);
    const InteractionModel& model = file.model;
    labels = io::site_labels(model.size(), model.labels());
    std::string source;
    switch (*id) {
      case criteria::CriterionId::kDobrushin:
        report = criteria::dobrushin(model, params_for(model, params_path, source));
        extra["params"] = source;
        break;
      case criteria::CriterionId::kKpLike:
        report = criteria::kp_like(model, params_for(model, params_path, source));
        extra["params"] = source;
        break;
      case criteria::CriterionId::kKpAuto: {
        const criteria::KpAutoResult kp = criteria::kp_auto(model);
        report = kp.report;
        extra["c_bar"] = kp.c_bar;
        if (kp.params) extra["alpha"] = kp.params->alpha(0);
        break;
      }
      case criteria::CriterionId::kGmsImproved:
        report = criteria::gms_improved(model);
        break;
      default:
        break;
    }
  }
  Json j = report_json(report, labels);
  for (auto& [k, v] : extra.items()) j[k] = v;
  if (config.csv) {
    std::string csv = "site,lhs,rhs,ok";
    for (const criteria::SiteResult& s : report.per_site) {
      csv += "\n" + labels[s.site] + "," + csv_number(s.lhs) + "," + csv_number(s.rhs) + "," +
             (s.satisfied ? "true" : "false");
    }
    sink.write(csv);
  } else {
    sink.write(j.dump(2));
  }
  return report.overall ? kOk : kUnsatisfied;
}

ks::Selector selector_for(const std::string& name, std::uint64_t seed) {
  if (name == "min") return ks::Selector::min_site();
  if (name == "max") return ks::Selector::max_site();
  if (name == "seeded") return ks::Selector::seeded(seed);
  throw ConfigError("unknown selector \"" + name + "\" (expected min, max or seeded)");
}

int cmd_ks_solve(const RunConfig& config, std::size_t max_iter, const std::string& selector_name,
                 std::ostream& out, std::ostream& err) {
  const io::ModelFile file = load_model(config);
  const InteractionModel& model = file.model;
  const exact::PartitionQuery q = query_or_default(file);
  const std::vector<std::string> labels = io::site_labels(model.size(), model.labels());
  ks::PicardOptions options;
  options.tol = config.tol;
  options.max_iter = max_iter;
  options.exec.threads = config.threads;
  try {
    const ks::PicardResult result = ks::picard_solve(
        model, q.volume, model.lattice(), selector_for(selector_name, config.seed), options);
    const ks::CorrelationTable mu = ks::mu_recover(result.table, q.volume);
    Json j{{"volume", io::set_labels(q.volume, labels)},
           {"iterations", result.iterations},
           {"residual", result.residual},
           {"mu_residual", ks::mu_residual(model, mu)},
           {"table", Json::parse(io::to_json(result.table, labels))}};
    Output(config, out).write(j.dump(2));
    return kOk;
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << '\n';
    err << Json{{"residuals", e.residuals()}}.dump() << '\n';
    return kNumericalFailure;
  }
}

int cmd_crosscheck(const RunConfig& config, const std::string& params_path, double max_dev,
                   std::ostream& out, std::ostream& err) {
  const io::ModelFile file = load_model(config);
  const InteractionModel& model = file.model;
  const exact::PartitionQuery q = query_or_default(file);
  const std::vector<std::string> labels = io::site_labels(model.size(), model.labels());
  std::string source;
  const CriterionParams params = params_for(model, params_path, source);
  const criteria::CriterionReport report = criteria::dobrushin(model, params);
  if (!report.overall) {
    for (const criteria::SiteResult& s : report.per_site) {
      if (!s.satisfied) {
        err << "Dobrushin criterion fails at site " << labels[s.site] << " (lhs " << s.lhs
            << " > r " << s.rhs << ")\n";
        break;
      }
    }
    return kUnsatisfied;
  }
  const SiteSet volume = q.volume;
  ks::PicardOptions options;
  options.tol = config.tol;
  options.max_iter = 100000;
  options.exec.threads = config.threads;
  const ks::PicardResult picard =
      ks::picard_solve(model, volume, model.lattice(), ks::Selector::min_site(), options);

  Json rows = Json::array();
  std::string csv = "site,exact_re,exact_im,recursion_re,recursion_im,picard_re,picard_im,max_dev";
  double worst = 0.0;
  for (Site x = 0; x < model.size(); ++x) {
    if (volume.contains(x)) continue;
    const Complex a = exact::effective_activity(model, x, volume, SiteSet{}, {config.threads});
    const Complex b = recursion::recursive_effective_activity(model, x, volume, SiteSet{});
    const Complex c = picard.table.at(SiteSet::singleton(x));
    const double dev = std::max({std::abs(a - b), std::abs(a - c), std::abs(b - c)});
    worst = std::max(worst, dev);
    rows.push_back(Json{{"site", labels[x]},
                        {"exact", complex_json(a)},
                        {"recursion", complex_json(b)},
                        {"picard", complex_json(c)},
                        {"max_dev", dev}});
    csv += "\n" + labels[x];
    for (Complex v : {a, b, c}) csv += "," + csv_number(v.real()) + "," + csv_number(v.imag());
    csv += "," + csv_number(dev);
  }
  Json j{{"volume", io::set_labels(volume, labels)},
         {"params", source},
         {"picard_iterations", picard.iterations},
         {"sites", std::move(rows)},
         {"max_dev", worst},
         {"threshold", max_dev}};
  Output(config, out).write(config.csv ? csv : j.dump(2));
  if (worst > max_dev) {
    err << "maximum deviation " << worst << " exceeds --max-dev " << max_dev << '\n';
    return kThresholdBreach;
  }
  return kOk;
}

int cmd_scan(const RunConfig& config, const std::string& rule, std::optional<double> delta,
             std::uint64_t samples, bool uniform, std::ostream& out) {
  const io::HypergraphFile file = io::parse_hypergraph(io::read_file(config.input));
  hypergraph::ScanOptions options;
  if (rule == "galvin") {
    options.rule = hypergraph::RadiusRule::kGalvin;
  } else if (rule == "bencs-buys") {
    options.rule = hypergraph::RadiusRule::kBencsBuys;
  } else {
    throw ConfigError("unknown rule \"" + rule + "\" (expected galvin or bencs-buys)");
  }
  const double floor = options.rule == hypergraph::RadiusRule::kGalvin ? 1.0 : 2.0;
  options.delta = delta.value_or(std::max<double>(floor, file.graph.max_degree()));
  options.samples = samples;
  options.seed = config.seed;
  options.uniform = uniform;
  options.exec.threads = config.threads;
  const hypergraph::ScanReport report = hypergraph::polydisc_scan(file.graph, options);
  Output(config, out).write(
      io::to_json(report, io::site_labels(file.graph.size(), file.graph.labels())));
  return report.passed ? kOk : kUnsatisfied;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
    case ErrorKind::kInvalidArgument:
      return kInputError;
    case ErrorKind::kMissingPotential:
    case ErrorKind::kDegreeExceeded:
    case ErrorKind::kEdgeNotIncident:
    case ErrorKind::kSupportTooSmall:
      return kCapabilityError;
    case ErrorKind::kVanishingDenominator:
    case ErrorKind::kDepthGuardExceeded:
    case ErrorKind::kNoConvergence:
      return kNumericalFailure;
  }
  return kInputError;
}

void add_common(CLI::App* sub, RunConfig& config) {
  sub->add_option("--input,-i", config.input, "Model or hypergraph JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--output,-o", config.output, "Write the report here instead of stdout");
  sub->add_option("--threads", config.threads, "Worker threads (default: LATGAS_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--csv", config.csv, "Emit CSV instead of JSON for tabular reports");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config.threads = default_threads();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  CLI::App app{"Zero-freeness toolkit for lattice gas partition functions"};
  app.name("latgas");
  app.require_subcommand(1);

  bool sweep = false;
  std::string criterion;
  std::string params_path;
  std::optional<double> delta;
  std::size_t max_iter = 0;
  std::string selector = "min";
  double max_dev = 1e-9;
  std::string rule;
  std::uint64_t samples = 10000;
  bool uniform = false;

  CLI::App* partition = app.add_subcommand("partition", "Exact Z(X, Lambda | B) for the file's query");
  add_common(partition, config);
  partition->add_flag("--sweep", sweep, "Report Z for every prefix of the volume");

  CLI::App* check = app.add_subcommand("check", "Evaluate a zero-freeness criterion per site");
  add_common(check, config);
  check->add_option("--criterion", criterion, "dobrushin|kp|kp-auto|gms|galvin|bencs-buys")
      ->required()
      ->check(CLI::IsMember({"dobrushin", "kp", "kp-auto", "gms", "galvin", "bencs-buys"}));
  check->add_option("--params", params_path, "Parameter file with r or alpha per site")
      ->check(CLI::ExistingFile);
  check->add_option("--Delta", delta, "Degree bound for the hypergraph criteria");

  CLI::App* ks_solve = app.add_subcommand("ks-solve", "Solve the KS equations by Picard iteration");
  add_common(ks_solve, config);
  ks_solve->add_option("--tol", config.tol, "Stop when a sweep changes no entry by this much");
  ks_solve->add_option("--max-iter", max_iter, "Sweep limit (default 10 (|U| + 1))");
  ks_solve->add_option("--selector", selector, "min|max|seeded");
  ks_solve->add_option("--seed", config.seed, "Seed for the seeded selector");

  CLI::App* crosscheck =
      app.add_subcommand("crosscheck", "Compare exact, recursive and KS effective activities");
  add_common(crosscheck, config);
  crosscheck->add_option("--params", params_path, "Parameter file with r or alpha per site")
      ->check(CLI::ExistingFile);
  crosscheck->add_option("--max-dev", max_dev, "Largest tolerated pairwise deviation");
  crosscheck->add_option("--tol", config.tol, "Picard tolerance");

  CLI::App* scan = app.add_subcommand("scan", "Sample activities in a zero-free polydisc");
  add_common(scan, config);
  scan->add_option("--rule", rule, "galvin|bencs-buys")->required();
  scan->add_option("--Delta", delta, "Degree bound (default: max degree)");
  scan->add_option("--samples", samples, "Number of activity samples")->check(CLI::PositiveNumber);
  scan->add_option("--seed", config.seed, "Seed of the sample stream");
  scan->add_flag("--uniform", uniform, "Use the degree-free uniform radius on every site");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (!(config.tol > 0.0)) throw ConfigError("--tol must be positive");
    if (partition->parsed()) return cmd_partition(config, sweep, out);
    if (check->parsed()) return cmd_check(config, criterion, params_path, delta, out);
    if (ks_solve->parsed()) return cmd_ks_solve(config, max_iter, selector, out, err);
    if (crosscheck->parsed()) return cmd_crosscheck(config, params_path, max_dev, out, err);
    if (scan->parsed()) return cmd_scan(config, rule, delta, samples, uniform, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kInputError;
}

}  // namespace latgas::cli
