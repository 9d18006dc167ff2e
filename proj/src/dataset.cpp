#include "famrisk/dataset.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "famrisk/errors.hpp"

namespace famrisk {

namespace {

constexpr std::size_t kColumns = 10;

enum Column : std::size_t {
  kName, kRelationship, kFrr1, kFrr2, kLifetimeRisk, kSource,
  kExpectedIrr, kExpectedQ, kExpectedGini, kExpectedTop10
};

// Splits one CSV line. Fields may be double-quoted with "" as an escaped quote.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw ParseError("stray quote inside unquoted field", row,
                         fields.size() + 1);
      }
      quoted = true;
      field_was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else {
      if (field_was_quoted) {
        throw ParseError("characters after closing quote", row, fields.size() + 1);
      }
      field += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", row, fields.size() + 1);
  fields.push_back(std::move(field));
  return fields;
}

double parse_number(const std::string& text, std::size_t row, std::size_t column) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError("not a number: '" + text + "'", row, column);
  }
  return value;
}

std::optional<double> optional_number(const std::string& text, std::size_t row,
                                      std::size_t column) {
  if (text.empty()) return std::nullopt;
  return parse_number(text, row, column);
}

std::optional<PublishedValue> optional_published(const std::string& text,
                                                 std::size_t row,
                                                 std::size_t column) {
  if (text.empty()) return std::nullopt;
  PublishedValue published;
  published.value = parse_number(text, row, column);
  if (text.find_first_of("eE") != std::string::npos) {
    throw ParseError("published values must be written in plain decimal", row,
                     column);
  }
  const auto dot = text.find('.');
  published.decimals = dot == std::string::npos
                           ? 0
                           : static_cast<int>(text.size() - dot - 1);
  return published;
}

void require(bool condition, const DiseaseRecord& record, const std::string& what) {
  if (!condition) {
    throw ValidationError("record '" + record.name + "': " + what);
  }
}

}  // namespace

bool PublishedValue::matches(double computed) const {
  if (!std::isfinite(computed)) return false;
  const double unit = std::pow(10.0, -decimals);
  const double rounded = std::round(computed / unit) * unit;
  return std::abs(rounded - value) <= unit * (1.0 + 1e-9);
}

void validate_record(const DiseaseRecord& record) {
  require(!record.name.empty(), record, "name must not be empty");
  require(record.has_dichotomous_inputs() || record.has_continuous_inputs(),
          record, "needs frr1 together with frr2 or lifetime_risk");
  for (const auto& v : {record.frr1, record.frr2}) {
    if (v) require(*v > 0.0, record, "FRRs must be positive");
  }
  if (record.lifetime_risk) {
    require(*record.lifetime_risk > 0.0 && *record.lifetime_risk < 1.0, record,
            "lifetime_risk must lie in (0, 1)");
  }
  const auto& e = record.expected;
  if (e.irr) require(e.irr->value > 0.0, record, "expected_irr must be positive");
  if (e.q) require(e.q->value > 0.0 && e.q->value < 1.0, record,
                   "expected_q must lie in (0, 1)");
  if (e.gini) require(e.gini->value >= 0.0 && e.gini->value < 1.0, record,
                      "expected_gini must lie in [0, 1)");
  if (e.top10) require(e.top10->value > 0.0 && e.top10->value < 1.0, record,
                       "expected_top10 must lie in (0, 1)");
}

std::vector<DiseaseRecord> load_records(std::istream& in) {
  std::vector<DiseaseRecord> records;
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line.compare(0, kDatasetHeader.size(), kDatasetHeader) != 0 ||
          (line.size() > kDatasetHeader.size() &&
           line[kDatasetHeader.size()] != ',')) {
        throw ParseError("header must start with '" + std::string(kDatasetHeader) +
                             "'",
                         row, 0);
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    const auto fields = split_csv_line(line, row);
    if (fields.size() < kColumns) {
      throw ParseError("expected at least " + std::to_string(kColumns) +
                           " fields, got " + std::to_string(fields.size()),
                       row, fields.size());
    }
    DiseaseRecord r;
    r.name = fields[kName];
    r.relationship = fields[kRelationship];
    r.frr1 = optional_number(fields[kFrr1], row, kFrr1 + 1);
    r.frr2 = optional_number(fields[kFrr2], row, kFrr2 + 1);
    r.lifetime_risk = optional_number(fields[kLifetimeRisk], row, kLifetimeRisk + 1);
    r.source = fields[kSource];
    r.expected.irr = optional_published(fields[kExpectedIrr], row, kExpectedIrr + 1);
    r.expected.q = optional_published(fields[kExpectedQ], row, kExpectedQ + 1);
    r.expected.gini = optional_published(fields[kExpectedGini], row, kExpectedGini + 1);
    r.expected.top10 =
        optional_published(fields[kExpectedTop10], row, kExpectedTop10 + 1);
    validate_record(r);
    records.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError("missing header", 1, 0);
  return records;
}

std::vector<DiseaseRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open dataset '" + path.string() + "'");
  }
  return load_records(in);
}

std::vector<DiseaseRecord> load_bundled_records() {
  std::istringstream in{std::string(bundled_dataset_csv())};
  return load_records(in);
}

std::string format_exact(double value) {
  std::array<char, 64> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

std::string format_published(const PublishedValue& published) {
  std::array<char, 64> buffer{};
  const auto [ptr, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), published.value,
                    std::chars_format::fixed, published.decimals);
  return std::string(buffer.data(), ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> record_fields(const DiseaseRecord& r) {
  auto number = [](const std::optional<double>& v) {
    return v ? format_exact(*v) : std::string();
  };
  auto published = [](const std::optional<PublishedValue>& v) {
    return v ? format_published(*v) : std::string();
  };
  return {r.name,
          r.relationship,
          number(r.frr1),
          number(r.frr2),
          number(r.lifetime_risk),
          r.source,
          published(r.expected.irr),
          published(r.expected.q),
          published(r.expected.gini),
          published(r.expected.top10)};
}

}  // namespace famrisk
