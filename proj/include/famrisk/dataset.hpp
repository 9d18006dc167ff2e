#pragma once

// Published disease estimates: FRRs, lifetime risks, and the values reported
// for them, read from CSV with the header
//
//   name,relationship,frr1,frr2,lifetime_risk,source,
//   expected_irr,expected_q,expected_gini,expected_top10
//
// Empty fields mean absent. Extra columns after these ten are ignored, so
// delimited reports (which append computed columns) load back as records.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace famrisk {

// A reported number and the count of decimals it was printed with.
struct PublishedValue {
  double value = 0.0;
  int decimals = 0;

  // True when `computed`, rounded to `decimals`, is within one unit of the
  // last printed digit of `value`.
  bool matches(double computed) const;

  friend bool operator==(const PublishedValue&, const PublishedValue&) = default;
};

struct ExpectedValues {
  std::optional<PublishedValue> irr;
  std::optional<PublishedValue> q;
  std::optional<PublishedValue> gini;
  std::optional<PublishedValue> top10;

  friend bool operator==(const ExpectedValues&, const ExpectedValues&) = default;
};

struct DiseaseRecord {
  std::string name;
  std::string relationship;
  std::optional<double> frr1;
  std::optional<double> frr2;
  std::optional<double> lifetime_risk;
  std::string source;
  ExpectedValues expected;

  bool has_dichotomous_inputs() const { return frr1 && frr2; }
  bool has_continuous_inputs() const { return frr1 && lifetime_risk; }

  friend bool operator==(const DiseaseRecord&, const DiseaseRecord&) = default;
};

inline constexpr std::string_view kDatasetHeader =
    "name,relationship,frr1,frr2,lifetime_risk,source,expected_irr,expected_q,"
    "expected_gini,expected_top10";

// Throws ValidationError when the record breaks an invariant.
void validate_record(const DiseaseRecord& record);

/// Parses and validates CSV records. ParseError (with row and column) on a
/// schema violation, ValidationError on an invariant violation.
std::vector<DiseaseRecord> load_records(std::istream& in);
std::vector<DiseaseRecord> load_records(const std::filesystem::path& path);
std::vector<DiseaseRecord> load_bundled_records();

// Raw text of the bundled dataset.
std::string_view bundled_dataset_csv();

// CSV field list of a record in header order, unquoted.
std::vector<std::string> record_fields(const DiseaseRecord& record);

// Quotes a CSV field when it contains a comma, quote, or newline.
std::string csv_escape(std::string_view field);

// Shortest text that parses back to `value`.
std::string format_exact(double value);
// `value` with exactly `published.decimals` decimals.
std::string format_published(const PublishedValue& published);

}  // namespace famrisk
