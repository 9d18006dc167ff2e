#pragma once

// Per-record analyses of the disease dataset and their rendering as text
// tables, delimited files, JSON, and SVG figures.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "famrisk/beta_risk.hpp"
#include "famrisk/dataset.hpp"
#include "famrisk/dichotomous.hpp"

namespace famrisk {

// Failure while analyzing one record; the message starts with the record name.
class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(std::string record_name, const std::string& what, bool infeasible)
      : std::runtime_error(record_name + ": " + what),
        record_name_(std::move(record_name)),
        infeasible_(infeasible) {}
  const std::string& record_name() const noexcept { return record_name_; }
  bool infeasible() const noexcept { return infeasible_; }

 private:
  std::string record_name_;
  bool infeasible_;
};

struct ContinuousAnalysis {
  BetaRiskModel model;
  double gini = 0.0;
  double top_share10 = 0.0;
  double mean_risk_ratio10 = 1.0;
  LorenzCurve lorenz;
};

struct AnalysisResult {
  DiseaseRecord record;
  std::optional<RiskStructureSolution> dichotomous;
  std::optional<ContinuousAnalysis> continuous;
  // Set by analyze_all when analyze threw; both branches are empty then.
  std::optional<std::string> error;
};

/// Dichotomous branch when frr1 and frr2 are present, continuous branch when
/// frr1 and lifetime_risk are present. Throws AnalysisError.
AnalysisResult analyze(const DiseaseRecord& record);

/// analyze over every record, in input order. Failures are kept as results
/// with `error` set.
std::vector<AnalysisResult> analyze_all(const std::vector<DiseaseRecord>& records);

struct GoldenCheck {
  std::string quantity;
  double computed = 0.0;
  PublishedValue published;
  bool matches = false;
};

/// Comparison of computed values against every published value of the record.
std::vector<GoldenCheck> golden_checks(const AnalysisResult& result);

enum class ReportFormat { Table, Csv, Json };

// Parses "table", "csv" or "json"; throws std::invalid_argument otherwise.
ReportFormat parse_report_format(std::string_view name);

// `value` to `precision` significant digits ("%.*g"); "nan" for NaN.
std::string format_number(double value, int precision);

/// Deterministic report. Table mirrors the published table column order and
/// adds the golden comparison; Csv is the dataset schema with computed columns
/// appended; Json holds the records and their analyses.
std::string render_report(const std::vector<AnalysisResult>& results,
                          ReportFormat format, int precision = 6);

/// Records contained in a Json report.
std::vector<DiseaseRecord> parse_structured_report(std::string_view json_text);

/// Standalone SVG (800x600 viewBox) with the equality diagonal and one
/// polyline per Lorenz curve plus a legend.
std::string render_lorenz_figure(const std::vector<LorenzCurve>& curves,
                                 const std::vector<std::string>& labels);

// "index,risk" rows for re-plotting sampled family risks.
std::string render_samples_csv(const Eigen::VectorXd& samples, int precision = 6);

// Lower-case alphanumeric slug for file names.
std::string slugify(std::string_view name);

}  // namespace famrisk
