#include "hcad/flowdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hcad/csv.hpp"
#include "hcad/rng.hpp"

namespace hcad {

namespace {

constexpr std::uint64_t kSplitSalt = 0x73706c6974ULL;  // "split"

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

void SchemaConfig::validate() const {
  if (label_column.empty()) {
    throw std::invalid_argument("schema: label_column must be set");
  }
  if (positive_label_values.empty()) {
    throw std::invalid_argument("schema: positive_labels must be set");
  }
  if (contains(drop_columns, label_column)) {
    throw std::invalid_argument("schema: label column '" + label_column +
                                "' is also listed in drop");
  }
  for (const auto& c : categorical_columns) {
    if (contains(port_columns, c)) {
      throw std::invalid_argument("schema: column '" + c +
                                  "' is both categorical and a port");
    }
  }
  for (const auto& c : feature_columns) {
    if (c == label_column) {
      throw std::invalid_argument("schema: label column '" + c +
                                  "' cannot be a feature");
    }
    if (contains(drop_columns, c)) {
      throw std::invalid_argument("schema: column '" + c +
                                  "' is both a feature and dropped");
    }
  }
}

SchemaConfig SchemaConfig::parse(std::istream& in) {
  SchemaConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("schema: line " + std::to_string(line_no) +
                               ": expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "label_column") {
      cfg.label_column = value;
    } else if (key == "positive_labels") {
      for (const auto& v : split_list(value)) cfg.positive_label_values.insert(v);
    } else if (key == "drop") {
      cfg.drop_columns = split_list(value);
    } else if (key == "categorical") {
      cfg.categorical_columns = split_list(value);
    } else if (key == "ports") {
      cfg.port_columns = split_list(value);
    } else if (key == "features") {
      cfg.feature_columns = split_list(value);
    } else {
      throw std::runtime_error("schema: line " + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

SchemaConfig SchemaConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("schema: cannot open " + path);
  return parse(in);
}

void SchemaConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("schema: cannot write " + path);
  auto join = [](const auto& items) {
    std::string s;
    for (const auto& it : items) {
      if (!s.empty()) s += ",";
      s += it;
    }
    return s;
  };
  out << "label_column=" << label_column << "\n";
  out << "positive_labels=" << join(positive_label_values) << "\n";
  if (!drop_columns.empty()) out << "drop=" << join(drop_columns) << "\n";
  if (!categorical_columns.empty())
    out << "categorical=" << join(categorical_columns) << "\n";
  if (!port_columns.empty()) out << "ports=" << join(port_columns) << "\n";
  if (!feature_columns.empty())
    out << "features=" << join(feature_columns) << "\n";
  if (!out) throw std::runtime_error("schema: write failed for " + path);
}

std::size_t RawTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < column_names.size(); ++i) {
    if (column_names[i] == name) return i;
  }
  throw std::runtime_error("table has no column '" + name + "'");
}

bool RawTable::has_column(const std::string& name) const {
  return std::find(column_names.begin(), column_names.end(), name) !=
         column_names.end();
}

RawTable load_table(const std::string& path, const SchemaConfig& schema,
                    bool require_label) {
  schema.validate();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);

  RawTable table;
  std::size_t lines = 0;
  if (!csv::read_record(in, table.column_names, lines)) {
    throw std::runtime_error(path + ": empty file, expected a header row");
  }
  if (require_label && !table.has_column(schema.label_column)) {
    throw std::runtime_error(path + ": label column '" + schema.label_column +
                             "' not found in header");
  }

  std::vector<std::string> cells;
  while (csv::read_record(in, cells, lines)) {
    if (cells.size() != table.column_names.size()) {
      throw std::runtime_error(
          path + ": line " + std::to_string(lines) + ": expected " +
          std::to_string(table.column_names.size()) + " cells, got " +
          std::to_string(cells.size()));
    }
    table.rows.push_back(cells);
  }
  return table;
}

long long parse_port(const std::string& cell) {
  const std::string s = trim(cell);
  if (s.empty()) return -1;
  long long value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  std::from_chars_result res{};
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    res = std::from_chars(first + 2, last, value, 16);
  } else {
    res = std::from_chars(first, last, value, 10);
  }
  if (res.ec != std::errc() || res.ptr != last || value < 0) return -1;
  return value;
}

std::size_t CategoryEncoder::encode(const std::string& value) const {
  const auto it =
      std::lower_bound(categories.begin(), categories.end(), value);
  if (it != categories.end() && *it == value) {
    return static_cast<std::size_t>(it - categories.begin());
  }
  return unseen_code();
}

const std::string& CategoryEncoder::decode(std::size_t code) const {
  if (code >= categories.size()) {
    throw std::invalid_argument("encoder for '" + column +
                                "': code out of range");
  }
  return categories[code];
}

CategoryEncoder fit_category_encoder(const std::string& column,
                                     const std::vector<std::string>& values) {
  if (values.empty()) {
    throw std::invalid_argument("encoder for '" + column +
                                "': no values to fit");
  }
  CategoryEncoder enc;
  enc.column = column;
  enc.categories = values;
  std::sort(enc.categories.begin(), enc.categories.end());
  enc.categories.erase(
      std::unique(enc.categories.begin(), enc.categories.end()),
      enc.categories.end());
  return enc;
}

namespace {

enum class ColumnKind { kNumeric, kCategorical, kPort };

struct FeaturePlan {
  std::vector<std::string> names;
  std::vector<std::size_t> raw_index;
  std::vector<ColumnKind> kind;
};

FeaturePlan plan_features(const RawTable& raw, const SchemaConfig& schema) {
  FeaturePlan plan;
  std::vector<std::string> ordered;
  if (!schema.feature_columns.empty()) {
    ordered = schema.feature_columns;
  } else {
    for (const auto& name : raw.column_names) {
      if (name == schema.label_column) continue;
      if (contains(schema.drop_columns, name)) continue;
      ordered.push_back(name);
    }
  }
  if (ordered.empty()) {
    throw std::runtime_error("no feature columns remain after drops");
  }
  for (const auto& name : ordered) {
    plan.names.push_back(name);
    plan.raw_index.push_back(raw.column_index(name));
    if (contains(schema.categorical_columns, name)) {
      plan.kind.push_back(ColumnKind::kCategorical);
    } else if (contains(schema.port_columns, name)) {
      plan.kind.push_back(ColumnKind::kPort);
    } else {
      plan.kind.push_back(ColumnKind::kNumeric);
    }
  }
  return plan;
}

double parse_numeric_cell(const std::string& cell, const std::string& column,
                          std::size_t row) {
  const std::string s = trim(cell);
  double value = 0.0;
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(s.data(), last, value);
  if (s.empty() || res.ec != std::errc() || res.ptr != last) {
    throw std::runtime_error("column '" + column + "', data row " +
                             std::to_string(row + 1) +
                             ": cannot parse numeric value '" + cell + "'");
  }
  return value;
}

EncodedDataset encode_impl(const RawTable& raw, const SchemaConfig& schema,
                           std::vector<CategoryEncoder> encoders) {
  schema.validate();
  const FeaturePlan plan = plan_features(raw, schema);

  EncodedDataset ds;
  ds.feature_names = plan.names;
  ds.encoders = std::move(encoders);
  ds.features = Matrix(raw.row_count(), plan.names.size());

  auto encoder_for = [&ds](const std::string& column) -> const CategoryEncoder& {
    for (const auto& e : ds.encoders) {
      if (e.column == column) return e;
    }
    throw std::runtime_error("no fitted encoder for column '" + column + "'");
  };

  const bool labeled = raw.has_column(schema.label_column);
  std::size_t label_idx = 0;
  if (labeled) {
    label_idx = raw.column_index(schema.label_column);
    ds.labels.reserve(raw.row_count());
  }

  for (std::size_t r = 0; r < raw.row_count(); ++r) {
    const auto& cells = raw.rows[r];
    for (std::size_t f = 0; f < plan.names.size(); ++f) {
      const std::string& cell = cells[plan.raw_index[f]];
      double v = 0.0;
      switch (plan.kind[f]) {
        case ColumnKind::kNumeric:
          v = parse_numeric_cell(cell, plan.names[f], r);
          break;
        case ColumnKind::kCategorical:
          v = static_cast<double>(encoder_for(plan.names[f]).encode(cell));
          break;
        case ColumnKind::kPort:
          v = static_cast<double>(parse_port(cell));
          break;
      }
      ds.features.at(r, f) = v;
    }
    if (labeled) {
      ds.labels.push_back(
          schema.positive_label_values.count(cells[label_idx]) ? 1 : 0);
    }
  }
  return ds;
}

}  // namespace

EncodedDataset encode_table(const RawTable& raw, const SchemaConfig& schema) {
  schema.validate();
  if (!raw.has_column(schema.label_column)) {
    throw std::runtime_error("encode_table: label column '" +
                             schema.label_column + "' not found");
  }
  // Fit one encoder per categorical feature column, in feature order.
  std::vector<CategoryEncoder> encoders;
  const FeaturePlan plan = plan_features(raw, schema);
  for (std::size_t f = 0; f < plan.names.size(); ++f) {
    if (plan.kind[f] != ColumnKind::kCategorical) continue;
    std::vector<std::string> values;
    values.reserve(raw.row_count());
    for (const auto& row : raw.rows) values.push_back(row[plan.raw_index[f]]);
    encoders.push_back(fit_category_encoder(plan.names[f], values));
  }
  return encode_impl(raw, schema, std::move(encoders));
}

EncodedDataset encode_table_with(
    const RawTable& raw, const SchemaConfig& schema,
    const std::vector<CategoryEncoder>& encoders) {
  return encode_impl(raw, schema, encoders);
}

std::pair<std::size_t, std::size_t> EncodedDataset::class_counts() const {
  std::size_t normal = 0, attack = 0;
  for (const int y : labels) {
    if (y == 1) ++attack;
    else ++normal;
  }
  return {normal, attack};
}

EncodedDataset EncodedDataset::select_rows(
    const std::vector<std::size_t>& indices) const {
  EncodedDataset out;
  out.features = features.select_rows(indices);
  out.feature_names = feature_names;
  out.encoders = encoders;
  if (!labels.empty()) {
    out.labels.reserve(indices.size());
    for (const std::size_t i : indices) {
      if (i >= labels.size()) {
        throw std::invalid_argument("select_rows: index out of range");
      }
      out.labels.push_back(labels[i]);
    }
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_split_indices(const std::vector<int>& labels, double train_fraction,
                         std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must be in (0, 1)");
  }
  if (labels.empty()) throw std::invalid_argument("cannot split empty data");

  // Group row indices per class, classes visited in sorted label order.
  std::map<int, std::vector<std::size_t>> per_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    per_class[labels[i]].push_back(i);
  }

  Rng rng(derive_seed(seed, kSplitSalt));
  std::vector<std::size_t> train, test;
  for (auto& [label, idx] : per_class) {
    if (idx.size() < 2) {
      throw std::invalid_argument(
          "stratified split needs at least 2 rows of class " +
          std::to_string(label) + ", got " + std::to_string(idx.size()));
    }
    rng.shuffle(idx);
    auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(idx.size())));
    // Both sides keep at least one row of every class.
    n_train = std::max<std::size_t>(1, std::min(n_train, idx.size() - 1));
    train.insert(train.end(), idx.begin(), idx.begin() + n_train);
    test.insert(test.end(), idx.begin() + n_train, idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

std::pair<EncodedDataset, EncodedDataset> stratified_split(
    const EncodedDataset& data, double train_fraction, std::uint64_t seed) {
  if (data.labels.size() != data.features.rows) {
    throw std::invalid_argument("stratified_split: dataset is unlabeled");
  }
  const auto [train_idx, test_idx] =
      stratified_split_indices(data.labels, train_fraction, seed);
  return {data.select_rows(train_idx), data.select_rows(test_idx)};
}

}  // namespace hcad
