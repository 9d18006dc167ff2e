#include "famrisk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "famrisk/beta_risk.hpp"
#include "famrisk/dataset.hpp"
#include "famrisk/dichotomous.hpp"
#include "famrisk/errors.hpp"
#include "famrisk/random.hpp"
#include "famrisk/report.hpp"
#include "famrisk/simulation.hpp"
#include "json.hpp"

namespace famrisk::cli {

namespace {

namespace fs = std::filesystem;

// Raised for flag combinations that are invalid before any computation.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordered key/value output shared by solve, fit-beta and simulate so that
// every format carries the same numbers.
class KeyValueReport {
 public:
  explicit KeyValueReport(int precision) : precision_(precision) {}

  void add(std::string key, std::optional<double> value) {
    entries_.push_back({std::move(key), value, std::nullopt});
  }
  // Counts and seeds, printed exactly.
  void add_integer(std::string key, std::uint64_t value) {
    entries_.push_back({std::move(key), std::nullopt, value});
  }
  void note(std::string text) { notes_.push_back(std::move(text)); }

  std::string render(ReportFormat format) const {
    std::ostringstream out;
    switch (format) {
      case ReportFormat::Table: {
        std::size_t width = 0;
        for (const auto& e : entries_) width = std::max(width, e.key.size());
        for (const auto& e : entries_) {
          out << e.key << std::string(width - e.key.size() + 2, ' ')
              << text(e) << '\n';
        }
        for (const auto& n : notes_) out << "note: " << n << '\n';
        break;
      }
      case ReportFormat::Csv:
        out << "quantity,value\n";
        for (const auto& e : entries_) {
          out << csv_escape(e.key) << ',' << (defined(e) ? text(e) : "") << '\n';
        }
        break;
      case ReportFormat::Json: {
        nlohmann::ordered_json j;
        for (const auto& e : entries_) {
          if (e.integer) {
            j[e.key] = *e.integer;
          } else {
            j[e.key] = e.value ? json_number(std::stod(text(e)))
                               : nlohmann::ordered_json(nullptr);
          }
        }
        if (!notes_.empty()) j["notes"] = notes_;
        out << j.dump(2) << '\n';
        break;
      }
    }
    return out.str();
  }

 private:
  struct Entry {
    std::string key;
    std::optional<double> value;
    std::optional<std::uint64_t> integer;
  };

  static bool defined(const Entry& e) { return e.value || e.integer; }

  // Integral values as JSON integers, so counts print without ".0".
  static nlohmann::ordered_json json_number(double v) {
    if (std::nearbyint(v) == v && std::abs(v) < 9.0e15) {
      return static_cast<std::int64_t>(v);
    }
    return v;
  }

  std::string text(const Entry& e) const {
    if (e.integer) return std::to_string(*e.integer);
    return e.value ? format_number(*e.value, precision_) : std::string("undefined");
  }

  int precision_;
  std::vector<Entry> entries_;
  std::vector<std::string> notes_;
};

struct Common {
  std::string format = "table";
  int precision = 6;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--format", common.format, "Output format: table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("--precision", common.precision,
                  "Significant digits of printed numbers")
      ->check(CLI::Range(1, 17));
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar)) {
    try {
      std::size_t used = 0;
      const unsigned long long seed = std::stoull(env, &used);
      if (used == std::string(env).size()) return seed;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string(kSeedEnvVar) + " must be an unsigned integer");
  }
  return kDefaultSeed;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) throw IoError("cannot write '" + path + "'");
}

double parse_percent(const std::string& text) {
  std::string digits = text;
  if (!digits.empty() && digits.back() == '%') digits.pop_back();
  try {
    std::size_t used = 0;
    const double value = std::stod(digits, &used);
    if (used != digits.size() || !(value > 0.0 && value < 100.0)) throw 0;
    return value / 100.0;
  } catch (...) {
    throw UsageError("--top expects a percentage in (0, 100), got '" + text + "'");
  }
}

std::string percent_label(double fraction) {
  return format_number(fraction * 100.0, 6) + "%";
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  double frr1 = 0.0;
  double frr2 = 0.0;
  Common common;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const RiskStructureSolution s = solve_risk_structure(a.frr1, a.frr2);
  KeyValueReport report(a.common.precision);
  report.add("frr1", a.frr1);
  report.add("frr2", a.frr2);
  report.add("irr", s.irr);
  report.add("q", s.degenerate ? std::nullopt : std::optional<double>(s.q));
  report.add("residual_norm", s.residual_norm);
  report.add_integer("iterations", static_cast<std::uint64_t>(s.iterations));
  if (s.degenerate) {
    report.note("degenerate: FRR1 = FRR2 = 1 means no risk heterogeneity; irr = 1 "
                "and q is undefined");
  }
  out << report.render(parse_report_format(a.common.format));
  return kSuccess;
}

// ---------------------------------------------------------------- fit-beta

struct FitArgs {
  double risk = 0.0;
  double frr = 0.0;
  std::vector<std::string> top = {"10"};
  Common common;
};

int cmd_fit_beta(const FitArgs& a, std::ostream& out) {
  std::vector<double> fractions;
  for (const auto& t : a.top) fractions.push_back(parse_percent(t));
  const BetaRiskModel model = fit_from_risk_and_frr(a.risk, a.frr);
  const bool proper = !model.is_point_mass();

  KeyValueReport report(a.common.precision);
  report.add("risk", a.risk);
  report.add("frr", a.frr);
  report.add("alpha", proper ? std::optional<double>(model.params().alpha()) : std::nullopt);
  report.add("beta", proper ? std::optional<double>(model.params().beta()) : std::nullopt);
  report.add("mean_risk", mean_risk(model));
  report.add("cv_squared", cv_squared(model));
  report.add("gini", gini(model));
  for (double f : fractions) {
    const std::string label = percent_label(f);
    report.add("top_share_" + label, top_share(model, f));
    report.add("mean_risk_ratio_" + label, mean_risk_ratio(model, f));
    report.add("median_risk_ratio_" + label, median_risk_ratio(model, f));
  }
  if (!proper) {
    report.note("degenerate: FRR = 1 means zero variance; every family has the "
                "mean risk and the Gini index is 0");
  }
  out << report.render(parse_report_format(a.common.format));
  return kSuccess;
}

// ---------------------------------------------------------------- curves

struct CurvesArgs {
  std::string model = "dichotomous";
  std::string sweep;
  std::optional<double> q;
  std::optional<double> irr;
  std::optional<double> risk;
  std::vector<double> frr;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<int> points;
  bool log_spacing = false;
  std::string affected = "both";
  std::string out_path;
  int precision = 6;
};

Eigen::ArrayXd make_grid(double from, double to, int points, bool log_spacing) {
  if (points < 1) throw UsageError("--points must be at least 1");
  if (!(from <= to)) throw UsageError("invalid sweep range: --from must not exceed --to");
  if (points == 1) return Eigen::ArrayXd::Constant(1, from);
  if (log_spacing) {
    if (!(from > 0.0)) throw UsageError("--log requires a positive --from");
    return Eigen::ArrayXd::LinSpaced(points, std::log(from), std::log(to)).exp();
  }
  return Eigen::ArrayXd::LinSpaced(points, from, to);
}

std::vector<Affected> affected_list(const std::string& which) {
  if (which == "1" || which == "one") return {Affected::One};
  if (which == "2" || which == "two") return {Affected::Two};
  return {Affected::One, Affected::Two};
}

std::string affected_suffix(Affected a) { return a == Affected::One ? "1" : "2"; }

int cmd_curves(const CurvesArgs& a, std::ostream& out) {
  auto num = [&](double v) { return format_number(v, a.precision); };
  std::ostringstream csv;

  if (a.model == "dichotomous") {
    const auto which = affected_list(a.affected);
    if (a.risk || !a.frr.empty()) {
      throw UsageError("--risk and --frr apply to --model beta only");
    }
    if (a.sweep == "irr" || a.sweep == "frr") {
      if (!a.q) throw UsageError("--sweep " + a.sweep + " requires --q");
      if (a.irr) throw UsageError("--irr conflicts with --sweep " + a.sweep);
    } else if (a.sweep == "q") {
      if (!a.irr) throw UsageError("--sweep q requires --irr");
      if (a.q) throw UsageError("--q conflicts with --sweep q");
    } else {
      throw UsageError("--model dichotomous supports --sweep irr, q or frr");
    }

    if (a.sweep == "irr" || a.sweep == "q") {
      const bool by_irr = a.sweep == "irr";
      const Eigen::ArrayXd grid =
          by_irr ? make_grid(a.from.value_or(1.0), a.to.value_or(20.0),
                             a.points.value_or(191), a.log_spacing)
                 : make_grid(a.from.value_or(0.001), a.to.value_or(0.999),
                             a.points.value_or(999), a.log_spacing);
      std::vector<FrrSeries> series;
      for (Affected w : which) {
        series.push_back(frr_curve(by_irr ? SweepVariable::Irr : SweepVariable::Q,
                                   grid, by_irr ? *a.q : *a.irr, w));
      }
      csv << (by_irr ? "irr" : "q");
      for (Affected w : which) csv << ",frr" << affected_suffix(w);
      csv << '\n';
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        csv << num(grid(i));
        for (const auto& s : series) csv << ',' << num(s.frr(i));
        csv << '\n';
      }
    } else {
      const double q = *a.q;
      if (!(q > 0.0 && q < 1.0)) throw DomainError("--q must lie in (0, 1)");
      const double sup = 1.0 / q;
      const double default_to = 1.0 + 0.99 * (std::min(sup, 21.0) - 1.0);
      const Eigen::ArrayXd grid = make_grid(a.from.value_or(1.0), a.to.value_or(default_to),
                                            a.points.value_or(200), a.log_spacing);
      csv << "frr";
      for (Affected w : which) csv << ",irr" << affected_suffix(w);
      csv << '\n';
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        csv << num(grid(i));
        for (Affected w : which) {
          csv << ',';
          try {
            csv << num(irr_given_frr(q, grid(i), w));
          } catch (const InfeasibleError&) {
            // Above the supremum: left empty.
          }
        }
        csv << '\n';
      }
    }
  } else if (a.model == "beta") {
    if (!a.risk) throw UsageError("--model beta requires --risk");
    if (a.frr.empty()) throw UsageError("--model beta requires at least one --frr");
    if (a.q || a.irr) throw UsageError("--q and --irr apply to --model dichotomous only");
    std::vector<BetaRiskModel> models;
    for (double f : a.frr) models.push_back(fit_from_risk_and_frr(*a.risk, f));

    if (a.sweep == "lorenz") {
      const Eigen::ArrayXd grid = make_grid(a.from.value_or(0.0), a.to.value_or(1.0),
                                            a.points.value_or(1001), a.log_spacing);
      csv << "u";
      for (double f : a.frr) csv << ",lorenz_frr_" << num(f);
      csv << '\n';
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        csv << num(grid(i));
        for (const auto& m : models) csv << ',' << num(lorenz_at(m, grid(i)));
        csv << '\n';
      }
    } else if (a.sweep == "density") {
      double upper = 0.0;
      for (const auto& m : models) upper = std::max(upper, m.quantile(0.99));
      const Eigen::ArrayXd grid = make_grid(a.from.value_or(0.0), a.to.value_or(upper),
                                            a.points.value_or(501), a.log_spacing);
      csv << "p";
      for (double f : a.frr) csv << ",density_frr_" << num(f);
      csv << '\n';
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        csv << num(grid(i));
        for (const auto& m : models) {
          csv << ',';
          if (!m.is_point_mass()) csv << num(beta_pdf(grid(i), m.params()));
        }
        csv << '\n';
      }
    } else {
      throw UsageError("--model beta supports --sweep lorenz or density");
    }
  } else {
    throw UsageError("--model must be dichotomous or beta");
  }

  write_text(csv.str(), a.out_path, out);
  return kSuccess;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string model = "dichotomous";
  std::optional<double> q, irr, low_risk, population_risk;
  std::optional<double> alpha, beta, risk, frr;
  int family_size = 3;
  std::int64_t families = 1'000'000;
  int batches = 100;
  std::optional<std::uint64_t> seed;
  Common common;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  SimulationConfig config{DichotomousRiskModel(0.5, 1.0, 0.01)};
  if (a.model == "dichotomous") {
    if (!a.q || !a.irr) throw UsageError("--model dichotomous requires --q and --irr");
    if (a.alpha || a.beta || a.risk || a.frr) {
      throw UsageError("--alpha, --beta, --risk and --frr apply to --model beta only");
    }
    if (a.low_risk) {
      config.risk_model = DichotomousRiskModel(*a.q, *a.irr, *a.low_risk);
    } else {
      config.risk_model = DichotomousRiskModel::with_population_risk(
          *a.q, *a.irr, a.population_risk.value_or(0.01));
    }
  } else if (a.model == "beta") {
    if (a.q || a.irr || a.low_risk || a.population_risk) {
      throw UsageError("--q, --irr, --low-risk and --population-risk apply to "
                       "--model dichotomous only");
    }
    const bool shapes = a.alpha && a.beta;
    const bool fitted = a.risk && a.frr;
    if (shapes == fitted || (a.alpha.has_value() != a.beta.has_value()) ||
        (a.risk.has_value() != a.frr.has_value())) {
      throw UsageError("--model beta requires either --alpha and --beta or "
                       "--risk and --frr");
    }
    config.risk_model = shapes ? BetaRiskModel(BetaParams(*a.alpha, *a.beta))
                               : fit_from_risk_and_frr(*a.risk, *a.frr);
  } else {
    throw UsageError("--model must be dichotomous or beta");
  }
  config.family_size = a.family_size;
  config.n_families = a.families;
  config.n_batches = a.batches;
  config.root_seed = a.seed ? *a.seed : default_seed();

  const SimulationOutcome o = simulate(config);
  auto value = [](const Estimate& e) {
    return e.defined ? std::optional<double>(e.value) : std::nullopt;
  };
  auto se = [](const Estimate& e) {
    return e.defined && std::isfinite(e.standard_error)
               ? std::optional<double>(e.standard_error)
               : std::nullopt;
  };
  KeyValueReport report(a.common.precision);
  report.add_integer("families", static_cast<std::uint64_t>(config.n_families));
  report.add_integer("family_size", static_cast<std::uint64_t>(config.family_size));
  report.add_integer("seed", config.root_seed);
  report.add("frr1", value(o.frr_one));
  report.add("frr1_se", se(o.frr_one));
  report.add_integer("frr1_conditioning_events",
                     static_cast<std::uint64_t>(o.conditioning_events_one));
  report.add("frr2", value(o.frr_two));
  report.add("frr2_se", se(o.frr_two));
  report.add_integer("frr2_conditioning_events",
                     static_cast<std::uint64_t>(o.conditioning_events_two));
  report.add("gini", value(o.empirical_gini));
  report.add("gini_se", se(o.empirical_gini));
  report.add("mean_risk", o.empirical_mean_risk);
  report.add("disease_rate", o.disease_rate);
  for (const auto& [label, e] : {std::pair{"FRR1", o.frr_one}, std::pair{"FRR2", o.frr_two}}) {
    if (!e.defined) {
      const std::string warning =
          std::string(label) + " undefined: no conditioning events were observed";
      report.note(warning);
      err << "warning: " << warning << '\n';
    }
  }
  out << report.render(parse_report_format(a.common.format));
  return kSuccess;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string data_path;
  bool bundled = false;
  std::string figures_dir;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  Common common;
};

constexpr int kSkyscraperSamples = 400;

void write_figures(const std::vector<AnalysisResult>& results, const fs::path& dir,
                   std::uint64_t seed, int precision) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create figure directory '" + dir.string() + "'");

  std::uint64_t index = 0;
  for (const auto& r : results) {
    ++index;
    if (!r.continuous) continue;
    const std::string slug = slugify(r.record.name);
    write_text(render_lorenz_figure({r.continuous->lorenz}, {r.record.name}),
               (dir / ("lorenz_" + slug + ".svg")).string(), std::cout);
    write_text(render_samples_csv(sample_risks(r.continuous->model, kSkyscraperSamples,
                                               derive_seed(seed, index)),
                                  precision),
               (dir / ("skyscraper_" + slug + ".csv")).string(), std::cout);
  }

  // Three FRRs at a lifetime risk of 1%.
  std::vector<LorenzCurve> curves;
  std::vector<std::string> labels;
  for (double f : {1.5, 2.3, 6.0}) {
    curves.push_back(lorenz_curve(fit_from_risk_and_frr(0.01, f)));
    labels.push_back("FRR " + format_number(f, 3) + ", lifetime risk 1%");
  }
  write_text(render_lorenz_figure(curves, labels),
             (dir / "lorenz_comparison.svg").string(), std::cout);
}

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  if (a.bundled == !a.data_path.empty()) {
    throw UsageError("report needs exactly one of --data PATH or --bundled");
  }
  const ReportFormat format = parse_report_format(a.common.format);
  const std::uint64_t seed = a.seed ? *a.seed : default_seed();

  std::vector<DiseaseRecord> records;
  if (a.bundled) {
    records = load_bundled_records();
  } else {
    std::ifstream in(a.data_path);
    if (!in) throw IoError("cannot open dataset '" + a.data_path + "'");
    records = load_records(in);
  }

  const auto results = analyze_all(records);
  write_text(render_report(results, format, a.common.precision), a.out_path, out);
  if (!a.figures_dir.empty()) {
    write_figures(results, a.figures_dir, seed, a.common.precision);
  }

  std::size_t failures = 0;
  for (const auto& r : results) {
    if (r.error) {
      ++failures;
      err << "warning: " << *r.error << '\n';
    }
  }
  return (!results.empty() && failures == results.size()) ? kInfeasible : kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Familial relative risks as population risk distributions", "famrisk"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand(
      "solve", "Solve FRR1 and FRR2 for the dichotomous model's IRR and q");
  solve_cmd->add_option("--frr1", solve.frr1, "FRR given one affected relative")->required();
  solve_cmd->add_option("--frr2", solve.frr2, "FRR given two affected relatives")->required();
  add_common(solve_cmd, solve.common);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand(
      "fit-beta", "Fit a beta risk distribution to a lifetime risk and an FRR");
  fit_cmd->add_option("--risk", fit.risk, "Lifetime risk (mean of the risk distribution)")
      ->required();
  fit_cmd->add_option("--frr", fit.frr, "Familial relative risk")->required();
  fit_cmd->add_option("--top", fit.top,
                      "Top risk percentage for burden share and risk ratios "
                      "(repeatable, default 10)");
  add_common(fit_cmd, fit.common);

  CurvesArgs curves;
  auto* curves_cmd = app.add_subcommand("curves", "Write curve data as CSV");
  curves_cmd->add_option("--model", curves.model, "dichotomous or beta")
      ->check(CLI::IsMember({"dichotomous", "beta"}));
  curves_cmd->add_option("--sweep", curves.sweep,
                         "dichotomous: irr, q or frr; beta: lorenz or density")
      ->required();
  curves_cmd->add_option("--q", curves.q, "High-risk fraction held fixed");
  curves_cmd->add_option("--irr", curves.irr, "IRR held fixed");
  curves_cmd->add_option("--risk", curves.risk, "Lifetime risk (beta model)");
  curves_cmd->add_option("--frr", curves.frr, "FRR of a beta curve (repeatable)");
  curves_cmd->add_option("--from", curves.from, "First grid value");
  curves_cmd->add_option("--to", curves.to, "Last grid value");
  curves_cmd->add_option("--points", curves.points, "Number of grid points");
  curves_cmd->add_flag("--log", curves.log_spacing, "Geometric grid spacing");
  curves_cmd->add_option("--affected", curves.affected, "1, 2 or both")
      ->check(CLI::IsMember({"1", "2", "one", "two", "both"}));
  curves_cmd->add_option("--out", curves.out_path, "Output file (default: stdout)");
  curves_cmd->add_option("--precision", curves.precision, "Significant digits")
      ->check(CLI::Range(1, 17));

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Monte Carlo family simulation of FRRs and the Gini index");
  sim_cmd->add_option("--model", sim.model, "dichotomous or beta")
      ->check(CLI::IsMember({"dichotomous", "beta"}));
  sim_cmd->add_option("--q", sim.q, "High-risk fraction");
  sim_cmd->add_option("--irr", sim.irr, "Individual relative risk");
  auto* low = sim_cmd->add_option("--low-risk", sim.low_risk, "Absolute low-group risk");
  auto* pop = sim_cmd->add_option("--population-risk", sim.population_risk,
                                  "Population risk used to set the low-group risk "
                                  "(default 0.01)");
  low->excludes(pop);
  sim_cmd->add_option("--alpha", sim.alpha, "Beta shape alpha");
  sim_cmd->add_option("--beta", sim.beta, "Beta shape beta");
  sim_cmd->add_option("--risk", sim.risk, "Lifetime risk for a fitted beta model");
  sim_cmd->add_option("--frr", sim.frr, "FRR for a fitted beta model");
  sim_cmd->add_option("--family-size", sim.family_size, "Members per family")
      ->check(CLI::Range(2, 1000));
  sim_cmd->add_option("--families", sim.families, "Number of families")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--batches", sim.batches, "Replicate batches for standard errors")
      ->check(CLI::Range(1, 100000));
  sim_cmd->add_option("--seed", sim.seed,
                      std::string("Root seed (default: $") + kSeedEnvVar + " or " +
                          std::to_string(kDefaultSeed) + ")");
  add_common(sim_cmd, sim.common);

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand(
      "report", "Analyze a disease dataset and write the reproduction report");
  auto* data_opt = rep_cmd->add_option("--data", rep.data_path, "Dataset CSV file");
  auto* bundled_opt = rep_cmd->add_flag("--bundled", rep.bundled, "Use the bundled dataset");
  data_opt->excludes(bundled_opt);
  rep_cmd->add_option("--figures", rep.figures_dir,
                      "Directory for SVG figures and sampled-risk CSV files");
  rep_cmd->add_option("--out", rep.out_path, "Report file (default: stdout)");
  rep_cmd->add_option("--seed", rep.seed,
                      std::string("Seed for sampled risks (default: $") + kSeedEnvVar +
                          " or " + std::to_string(kDefaultSeed) + ")");
  add_common(rep_cmd, rep.common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve, out);
    if (fit_cmd->parsed()) return cmd_fit_beta(fit, out);
    if (curves_cmd->parsed()) return cmd_curves(curves, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim, out, err);
    if (rep_cmd->parsed()) return cmd_report(rep, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const AmbiguityError& e) {
    err << "no unique solution: " << e.what() << '\n';
    return kInfeasible;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const ParseError& e) {
    err << "parse error at row " << e.row() << ", column " << e.column() << ": "
        << e.what() << '\n';
    return kUsageError;
  } catch (const ValidationError& e) {
    err << "invalid record: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace famrisk::cli
