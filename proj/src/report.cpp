#include "famrisk/report.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "famrisk/errors.hpp"
#include "json.hpp"

namespace famrisk {

namespace {

using nlohmann::json;

constexpr double kTopFraction = 0.1;
constexpr int kLorenzPoints = 1001;

std::string fixed(double value, int decimals) {
  std::array<char, 64> buffer{};
  std::snprintf(buffer.data(), buffer.size(), "%.*f", decimals, value);
  return buffer.data();
}

// Column-aligned plain text table.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> widths(rows_.front().size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        widths[c] = std::max(widths[c], row[c].size());
      }
    }
    std::ostringstream out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::string line;
      for (std::size_t c = 0; c < rows_[r].size(); ++c) {
        if (c > 0) line += "  ";
        line += rows_[r][c];
        line.append(widths[c] - rows_[r][c].size(), ' ');
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << '\n';
      if (r == 0) {
        std::size_t total = 0;
        for (auto w : widths) total += w;
        out << std::string(total + 2 * (widths.size() - 1), '-') << '\n';
      }
    }
    return out.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string optional_exact(const std::optional<double>& v) {
  return v ? format_exact(*v) : std::string("-");
}

std::string optional_published(const std::optional<PublishedValue>& v) {
  return v ? format_published(*v) : std::string("-");
}

std::string match_label(const std::vector<GoldenCheck>& checks,
                        std::initializer_list<std::string_view> quantities) {
  bool any = false;
  for (const auto& c : checks) {
    if (std::find(quantities.begin(), quantities.end(), c.quantity) ==
        quantities.end()) {
      continue;
    }
    any = true;
    if (!c.matches) return "NO";
  }
  return any ? "yes" : "-";
}

// Round-trips a number through its printed form so every format carries the
// same numeric content.
json rounded(double value, int precision) {
  if (!std::isfinite(value)) return nullptr;
  return std::stod(format_number(value, precision));
}

json published_json(const std::optional<PublishedValue>& v) {
  if (!v) return nullptr;
  return {{"value", v->value}, {"decimals", v->decimals}};
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::optional<PublishedValue> published_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return PublishedValue{j.at("value").get<double>(), j.at("decimals").get<int>()};
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

AnalysisResult analyze(const DiseaseRecord& record) {
  AnalysisResult result;
  result.record = record;
  try {
    validate_record(record);
    if (record.has_dichotomous_inputs()) {
      result.dichotomous = solve_risk_structure(*record.frr1, *record.frr2);
    }
    if (record.has_continuous_inputs()) {
      const BetaRiskModel model =
          fit_from_risk_and_frr(*record.lifetime_risk, *record.frr1);
      LorenzCurve curve = lorenz_curve(model, kLorenzPoints);
      const double g = curve.gini;
      result.continuous = ContinuousAnalysis{model, g, top_share(model, kTopFraction),
                                             mean_risk_ratio(model, kTopFraction),
                                             std::move(curve)};
    }
  } catch (const InfeasibleError& e) {
    throw AnalysisError(record.name, e.what(), true);
  } catch (const AmbiguityError& e) {
    throw AnalysisError(record.name, e.what(), true);
  } catch (const std::exception& e) {
    throw AnalysisError(record.name, e.what(), false);
  }
  return result;
}

std::vector<AnalysisResult> analyze_all(const std::vector<DiseaseRecord>& records) {
  std::vector<AnalysisResult> results;
  results.reserve(records.size());
  for (const auto& record : records) {
    try {
      results.push_back(analyze(record));
    } catch (const AnalysisError& e) {
      AnalysisResult failed;
      failed.record = record;
      failed.error = e.what();
      results.push_back(std::move(failed));
    }
  }
  return results;
}

std::vector<GoldenCheck> golden_checks(const AnalysisResult& result) {
  std::vector<GoldenCheck> checks;
  const auto& e = result.record.expected;
  auto add = [&](const char* quantity, const std::optional<PublishedValue>& published,
                 std::optional<double> computed) {
    if (!published) return;
    const double value = computed.value_or(std::nan(""));
    checks.push_back({quantity, value, *published, published->matches(value)});
  };
  std::optional<double> irr, q, g, top;
  if (result.dichotomous) {
    irr = result.dichotomous->irr;
    q = result.dichotomous->q;
  }
  if (result.continuous) {
    g = result.continuous->gini;
    top = result.continuous->top_share10;
  }
  add("irr", e.irr, irr);
  add("q", e.q, q);
  add("gini", e.gini, g);
  add("top10", e.top10, top);
  return checks;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw std::invalid_argument("unknown report format '" + std::string(name) +
                              "' (expected table, csv or json)");
}

std::string format_number(double value, int precision) {
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buffer{};
  std::snprintf(buffer.data(), buffer.size(), "%.*g", precision, value);
  return buffer.data();
}

std::string render_report(const std::vector<AnalysisResult>& results,
                          ReportFormat format, int precision) {
  auto num = [precision](double v) { return format_number(v, precision); };
  std::ostringstream out;

  if (format == ReportFormat::Csv) {
    out << kDatasetHeader
        << ",irr,q,residual_norm,alpha,beta,gini,top10_share,mean_risk_ratio10,error\n";
    for (const auto& r : results) {
      std::vector<std::string> fields = record_fields(r.record);
      if (r.dichotomous) {
        const auto& d = *r.dichotomous;
        fields.push_back(num(d.irr));
        fields.push_back(d.degenerate ? std::string() : num(d.q));
        fields.push_back(num(d.residual_norm));
      } else {
        fields.insert(fields.end(), 3, std::string());
      }
      if (r.continuous) {
        const auto& c = *r.continuous;
        const bool proper = !c.model.is_point_mass();
        fields.push_back(proper ? num(c.model.params().alpha()) : std::string());
        fields.push_back(proper ? num(c.model.params().beta()) : std::string());
        fields.push_back(num(c.gini));
        fields.push_back(num(c.top_share10));
        fields.push_back(num(c.mean_risk_ratio10));
      } else {
        fields.insert(fields.end(), 5, std::string());
      }
      fields.push_back(r.error.value_or(""));
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        out << csv_escape(fields[i]);
      }
      out << '\n';
    }
    return out.str();
  }

  if (format == ReportFormat::Json) {
    json records = json::array();
    for (const auto& r : results) {
      const auto& rec = r.record;
      json j;
      j["name"] = rec.name;
      j["relationship"] = rec.relationship;
      j["frr1"] = optional_json(rec.frr1);
      j["frr2"] = optional_json(rec.frr2);
      j["lifetime_risk"] = optional_json(rec.lifetime_risk);
      j["source"] = rec.source;
      j["expected"] = {{"irr", published_json(rec.expected.irr)},
                       {"q", published_json(rec.expected.q)},
                       {"gini", published_json(rec.expected.gini)},
                       {"top10", published_json(rec.expected.top10)}};
      j["dichotomous"] = nullptr;
      if (r.dichotomous) {
        const auto& d = *r.dichotomous;
        j["dichotomous"] = {{"irr", rounded(d.irr, precision)},
                            {"q", rounded(d.q, precision)},
                            {"residual_norm", rounded(d.residual_norm, precision)},
                            {"iterations", d.iterations},
                            {"degenerate", d.degenerate}};
      }
      j["continuous"] = nullptr;
      if (r.continuous) {
        const auto& c = *r.continuous;
        const bool proper = !c.model.is_point_mass();
        j["continuous"] = {
            {"alpha", proper ? rounded(c.model.params().alpha(), precision) : json(nullptr)},
            {"beta", proper ? rounded(c.model.params().beta(), precision) : json(nullptr)},
            {"point_mass", !proper},
            {"gini", rounded(c.gini, precision)},
            {"top10_share", rounded(c.top_share10, precision)},
            {"mean_risk_ratio10", rounded(c.mean_risk_ratio10, precision)}};
      }
      j["error"] = r.error ? json(*r.error) : json(nullptr);
      json checks = json::array();
      for (const auto& c : golden_checks(r)) {
        checks.push_back({{"quantity", c.quantity},
                          {"computed", rounded(c.computed, precision)},
                          {"published", c.published.value},
                          {"matches", c.matches}});
      }
      j["golden_checks"] = std::move(checks);
      records.push_back(std::move(j));
    }
    return json{{"records", std::move(records)}}.dump(2) + "\n";
  }

  // Plain text.
  std::size_t matched = 0, total_checks = 0;
  for (const auto& r : results) {
    for (const auto& c : golden_checks(r)) {
      ++total_checks;
      if (c.matches) ++matched;
    }
  }
  out << "Familial risk report: " << results.size() << " records, "
      << matched << " of " << total_checks << " published values reproduced\n";

  const bool any_dichotomous =
      std::any_of(results.begin(), results.end(), [](const auto& r) { return r.dichotomous.has_value(); });
  if (any_dichotomous) {
    TextTable table({"Disease", "Relationship", "FRR1", "FRR2", "=>", "IRR", "q",
                     "Residual", "Published IRR", "Published q", "Match"});
    for (const auto& r : results) {
      if (!r.dichotomous) continue;
      const auto& d = *r.dichotomous;
      const auto checks = golden_checks(r);
      table.add({r.record.name, r.record.relationship, optional_exact(r.record.frr1),
                 optional_exact(r.record.frr2), "=>", num(d.irr),
                 d.degenerate ? std::string("undefined") : num(d.q),
                 num(d.residual_norm), optional_published(r.record.expected.irr),
                 optional_published(r.record.expected.q),
                 match_label(checks, {"irr", "q"})});
    }
    out << "\nDichotomous risk model: FRR1 and FRR2 solved for IRR and q\n\n"
        << table.render();
  }

  const bool any_continuous =
      std::any_of(results.begin(), results.end(), [](const auto& r) { return r.continuous.has_value(); });
  if (any_continuous) {
    TextTable table({"Disease", "Lifetime risk", "FRR", "alpha", "beta", "Gini",
                     "Top 10% share", "Mean risk ratio (top 10%)", "Published Gini",
                     "Published top 10%", "Match"});
    for (const auto& r : results) {
      if (!r.continuous) continue;
      const auto& c = *r.continuous;
      const bool proper = !c.model.is_point_mass();
      table.add({r.record.name, optional_exact(r.record.lifetime_risk),
                 optional_exact(r.record.frr1),
                 proper ? num(c.model.params().alpha()) : std::string("point mass"),
                 proper ? num(c.model.params().beta()) : std::string("point mass"),
                 num(c.gini), num(c.top_share10), num(c.mean_risk_ratio10),
                 optional_published(r.record.expected.gini),
                 optional_published(r.record.expected.top10),
                 match_label(golden_checks(r), {"gini", "top10"})});
    }
    out << "\nContinuous risk model: beta distribution fitted to lifetime risk and FRR\n\n"
        << table.render();
  }

  const bool any_error =
      std::any_of(results.begin(), results.end(), [](const auto& r) { return r.error.has_value(); });
  if (any_error) {
    out << "\nErrors\n\n";
    for (const auto& r : results) {
      if (r.error) out << "  " << *r.error << '\n';
    }
  }
  return out.str();
}

std::vector<DiseaseRecord> parse_structured_report(std::string_view json_text) {
  const json doc = json::parse(json_text);
  std::vector<DiseaseRecord> records;
  for (const auto& j : doc.at("records")) {
    DiseaseRecord r;
    r.name = j.at("name").get<std::string>();
    r.relationship = j.at("relationship").get<std::string>();
    r.frr1 = optional_from_json(j.at("frr1"));
    r.frr2 = optional_from_json(j.at("frr2"));
    r.lifetime_risk = optional_from_json(j.at("lifetime_risk"));
    r.source = j.at("source").get<std::string>();
    const auto& e = j.at("expected");
    r.expected.irr = published_from_json(e.at("irr"));
    r.expected.q = published_from_json(e.at("q"));
    r.expected.gini = published_from_json(e.at("gini"));
    r.expected.top10 = published_from_json(e.at("top10"));
    validate_record(r);
    records.push_back(std::move(r));
  }
  return records;
}

std::string render_lorenz_figure(const std::vector<LorenzCurve>& curves,
                                 const std::vector<std::string>& labels) {
  constexpr double kLeft = 90.0, kRight = 760.0, kTop = 40.0, kBottom = 520.0;
  constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c",
                                                  "#9467bd", "#ff7f0e", "#8c564b"};
  auto sx = [&](double u) { return fixed(kLeft + u * (kRight - kLeft), 2); };
  auto sy = [&](double l) { return fixed(kBottom - l * (kBottom - kTop), 2); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
         "width=\"800\" height=\"600\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kRight - kLeft << "\" height=\"" << kBottom - kTop
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    svg << "<line x1=\"" << sx(t) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(t)
        << "\" y2=\"" << fixed(kBottom + 6, 2) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << sx(t) << "\" y=\"" << fixed(kBottom + 24, 2)
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
        << fixed(t, 2) << "</text>\n"
        << "<line x1=\"" << fixed(kLeft - 6, 2) << "\" y1=\"" << sy(t) << "\" x2=\""
        << sx(0) << "\" y2=\"" << sy(t) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fixed(kLeft - 10, 2) << "\" y=\"" << fixed(kBottom - t * (kBottom - kTop) + 5, 2)
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"end\">"
        << fixed(t, 2) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(0.5 * (kLeft + kRight), 2)
      << "\" y=\"570\" font-family=\"sans-serif\" font-size=\"16\" "
         "text-anchor=\"middle\">Cumulative share of population, lowest risk first</text>\n"
      << "<text x=\"24\" y=\"" << fixed(0.5 * (kTop + kBottom), 2)
      << "\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 24 "
      << fixed(0.5 * (kTop + kBottom), 2) << ")\">Cumulative share of disease burden</text>\n";

  svg << "<line id=\"equality\" x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\""
      << sx(1) << "\" y2=\"" << sy(1)
      << "\" stroke=\"gray\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    svg << "<polyline class=\"lorenz\" fill=\"none\" stroke=\"" << kColors[k % kColors.size()]
        << "\" stroke-width=\"2\" points=\"";
    for (Eigen::Index i = 0; i < c.population_fraction.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << sx(c.population_fraction(i)) << ',' << sy(c.burden_fraction(i));
    }
    svg << "\"/>\n";
  }

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const double y = kTop + 24.0 + 22.0 * static_cast<double>(k);
    const std::string label = k < labels.size() ? labels[k] : "curve " + std::to_string(k + 1);
    svg << "<line x1=\"" << fixed(kLeft + 16, 2) << "\" y1=\"" << fixed(y - 5, 2)
        << "\" x2=\"" << fixed(kLeft + 46, 2) << "\" y2=\"" << fixed(y - 5, 2)
        << "\" stroke=\"" << kColors[k % kColors.size()] << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << fixed(kLeft + 54, 2) << "\" y=\"" << fixed(y, 2)
        << "\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(label)
        << " (Gini " << fixed(curves[k].gini, 2) << ")</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_samples_csv(const Eigen::VectorXd& samples, int precision) {
  std::ostringstream out;
  out << "index,risk\n";
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    out << i + 1 << ',' << format_number(samples(i), precision) << '\n';
  }
  return out.str();
}

std::string slugify(std::string_view name) {
  std::string slug;
  bool pending_dash = false;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      if (pending_dash && !slug.empty()) slug += '_';
      slug += static_cast<char>(std::tolower(c));
      pending_dash = false;
    } else {
      pending_dash = true;
    }
  }
  return slug.empty() ? std::string("record") : slug;
}

}  // namespace famrisk
