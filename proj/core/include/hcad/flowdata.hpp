#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hcad/matrix.hpp"

namespace hcad {

// Describes how to turn a raw flow CSV into a numeric dataset: which column
// carries the label, which values of it mean "attack", and how the remaining
// columns are treated. Loaded from a plain key=value file (see parse()).
struct SchemaConfig {
  std::string label_column;
  std::set<std::string> positive_label_values;
  std::vector<std::string> drop_columns;         // identifiers etc., removed
  std::vector<std::string> categorical_columns;  // label-encoded strings
  std::vector<std::string> port_columns;         // decimal or 0x-hex ports
  // Explicit feature whitelist. Empty means: every column that is not the
  // label and not dropped.
  std::vector<std::string> feature_columns;

  void validate() const;

  static SchemaConfig parse(std::istream& in);
  static SchemaConfig from_file(const std::string& path);
  void save(const std::string& path) const;
};

// A CSV file as loaded: header plus string cells, nothing interpreted yet.
struct RawTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<std::string>> rows;

  std::size_t row_count() const { return rows.size(); }
  // Index of a named column, or throws.
  std::size_t column_index(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

// Maps the values of one categorical column to dense integer codes.
// Categories are stored sorted, so the coding is independent of row order.
// Values never seen during fitting map to the code one past the last
// category (an "unseen" bucket), which keeps prediction total.
struct CategoryEncoder {
  std::string column;
  std::vector<std::string> categories;  // sorted, unique

  std::size_t encode(const std::string& value) const;
  const std::string& decode(std::size_t code) const;
  std::size_t unseen_code() const { return categories.size(); }
};

// Numeric view of a table: features plus binary labels (0 = normal,
// 1 = attack). labels is empty for unlabeled data (prediction input).
struct EncodedDataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::vector<CategoryEncoder> encoders;

  std::size_t size() const { return features.rows; }
  // (normal_count, attack_count)
  std::pair<std::size_t, std::size_t> class_counts() const;
  EncodedDataset select_rows(const std::vector<std::size_t>& indices) const;
};

// Loads a CSV with a header row. Every row must have the same cell count as
// the header (errors cite the 1-based line). If require_label is true the
// schema's label column must be present.
RawTable load_table(const std::string& path, const SchemaConfig& schema,
                    bool require_label = true);

// Port cells are decimal ("80") or hex with an 0x prefix ("0x0303" -> 771).
// Anything unparseable, negative, or empty becomes -1 (missing).
long long parse_port(const std::string& cell);

CategoryEncoder fit_category_encoder(const std::string& column,
                                     const std::vector<std::string>& values);

// Fits encoders on the table and produces the numeric dataset.
EncodedDataset encode_table(const RawTable& raw, const SchemaConfig& schema);

// Same transformation but with already-fitted encoders (prediction path).
// The label column may be absent, in which case labels stays empty.
EncodedDataset encode_table_with(const RawTable& raw,
                                 const SchemaConfig& schema,
                                 const std::vector<CategoryEncoder>& encoders);

// Per-class shuffled index split. Every class must have at least 2 rows and
// each side of the split receives at least 1 row from each class.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_split_indices(const std::vector<int>& labels, double train_fraction,
                         std::uint64_t seed);

std::pair<EncodedDataset, EncodedDataset> stratified_split(
    const EncodedDataset& data, double train_fraction, std::uint64_t seed);

}  // namespace hcad
