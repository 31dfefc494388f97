// Plain-text, versioned, checksummed ensemble files.
//
// Layout: the first line names the format and version, the second carries a
// CRC-32 of every byte that follows it, and the payload is one record per
// line with space-separated tokens. Strings are escaped so they tokenize
// safely; doubles are written in shortest round-trip form so a loaded
// ensemble predicts bit-identically to the saved one.

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hcad/hybrid.hpp"

namespace hcad {

namespace {

constexpr int kFormatVersion = 1;
constexpr std::string_view kMagic = "hcad-ensemble";

std::uint32_t crc32(std::string_view bytes) {
  static const std::array<std::uint32_t, 256> table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int bit = 0; bit < 8; ++bit) {
        c = (c & 1u) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
      }
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (const unsigned char ch : bytes) {
    crc = table[(crc ^ ch) & 0xFFu] ^ (crc >> 8);
  }
  return crc ^ 0xFFFFFFFFu;
}

std::string hex32(std::uint32_t v) {
  static const char digits[] = "0123456789abcdef";
  std::string out(8, '0');
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xFu];
    v >>= 4;
  }
  return out;
}

// Tokens never contain whitespace: the characters that would break the
// line/token structure are escaped, and the empty string gets a marker of
// its own ("\e").
std::string escape_token(const std::string& s) {
  if (s.empty()) return "\\e";
  std::string out;
  out.reserve(s.size());
  for (const char ch : s) {
    switch (ch) {
      case '\\': out += "\\\\"; break;
      case ' ': out += "\\s"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string unescape_token(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (i + 1 >= s.size()) {
      throw std::runtime_error("ensemble file: dangling escape in token");
    }
    switch (s[++i]) {
      case '\\': out += '\\'; break;
      case 's': out += ' '; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case 't': out += '\t'; break;
      case 'e': break;  // the empty-string marker contributes nothing
      default:
        throw std::runtime_error("ensemble file: unknown escape in token");
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---- writer -------------------------------------------------------------

class PayloadWriter {
 public:
  PayloadWriter& tok(std::string_view raw) {
    if (!at_line_start_) out_ += ' ';
    out_ += raw;
    at_line_start_ = false;
    return *this;
  }
  PayloadWriter& str(const std::string& s) { return tok(escape_token(s)); }
  PayloadWriter& num(double v) { return tok(format_double(v)); }
  PayloadWriter& num(int v) { return tok(std::to_string(v)); }
  PayloadWriter& num(long long v) { return tok(std::to_string(v)); }
  PayloadWriter& num(std::size_t v) { return tok(std::to_string(v)); }
  void end_line() {
    out_ += '\n';
    at_line_start_ = true;
  }

  const std::string& payload() const { return out_; }

 private:
  std::string out_;
  bool at_line_start_ = true;
};

void write_string_list(PayloadWriter& w, std::string_view key,
                       const std::vector<std::string>& values) {
  w.tok(key).num(values.size());
  for (const auto& v : values) w.str(v);
  w.end_line();
}

void write_double_row(PayloadWriter& w, std::string_view key,
                      std::span<const double> values) {
  w.tok(key);
  for (const double v : values) w.num(v);
  w.end_line();
}

void write_tree(PayloadWriter& w, const DecisionTree& tree) {
  w.tok("tree").num(tree.nodes.size());
  w.end_line();
  for (const TreeNode& n : tree.nodes) {
    w.tok("node").num(n.feature).num(n.threshold).num(n.left).num(n.right);
    w.num(n.count0).num(n.count1);
    w.end_line();
  }
}

void write_regression_tree(PayloadWriter& w, const RegressionTree& tree) {
  w.tok("rtree").num(tree.nodes.size());
  w.end_line();
  for (const RegressionTreeNode& n : tree.nodes) {
    w.tok("rnode").num(n.feature).num(n.threshold).num(n.left).num(n.right);
    w.num(n.value);
    w.end_line();
  }
}

void write_model(PayloadWriter& w, const TrainedClassifier& classifier) {
  const auto& model = classifier.model();
  if (const auto* tree = std::get_if<DecisionTree>(&model)) {
    write_tree(w, *tree);
  } else if (const auto* forest = std::get_if<ForestModel>(&model)) {
    w.tok("forest").num(forest->trees.size());
    w.end_line();
    for (const DecisionTree& t : forest->trees) write_tree(w, t);
  } else if (const auto* gnb = std::get_if<GnbModel>(&model)) {
    w.tok("gnb").num(gnb->mean.cols);
    w.end_line();
    write_double_row(w, "log_prior", gnb->log_prior);
    write_double_row(w, "gnb_mean", gnb->mean.row(0));
    write_double_row(w, "gnb_mean", gnb->mean.row(1));
    write_double_row(w, "gnb_var", gnb->variance.row(0));
    write_double_row(w, "gnb_var", gnb->variance.row(1));
  } else if (const auto* gbt = std::get_if<GbtModel>(&model)) {
    // training_loss is a fitting diagnostic, not part of the predictor; it
    // is deliberately not persisted.
    w.tok("gbt").num(gbt->trees.size());
    w.num(gbt->initial_score).num(gbt->learning_rate);
    w.end_line();
    for (const RegressionTree& t : gbt->trees) write_regression_tree(w, t);
  } else if (const auto* knn = std::get_if<KnnModel>(&model)) {
    w.tok("knn").num(knn->k).num(knn->train.rows).num(knn->train.cols);
    w.end_line();
    for (std::size_t i = 0; i < knn->train.rows; ++i) {
      w.tok("krow").num(knn->labels[i]);
      for (const double v : knn->train.row(i)) w.num(v);
      w.end_line();
    }
  } else if (const auto* constant = std::get_if<ConstantModel>(&model)) {
    w.tok("constant").num(constant->label);
    w.end_line();
  } else {
    throw std::logic_error("ensemble file: unhandled model kind");
  }
}

// ---- reader -------------------------------------------------------------

class PayloadReader {
 public:
  explicit PayloadReader(std::string_view payload) : rest_(payload) {}

  // Next line split into tokens; the first token must equal key.
  std::vector<std::string> line(std::string_view key) {
    if (rest_.empty()) {
      throw std::runtime_error("ensemble file: unexpected end of file, "
                               "expected '" + std::string(key) + "'");
    }
    ++line_no_;
    const std::size_t nl = rest_.find('\n');
    std::string_view raw = rest_.substr(0, nl);
    rest_ = (nl == std::string_view::npos) ? std::string_view{}
                                           : rest_.substr(nl + 1);

    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < raw.size()) {
      const std::size_t sp = raw.find(' ', pos);
      const std::size_t len =
          (sp == std::string_view::npos ? raw.size() : sp) - pos;
      if (len > 0) tokens.emplace_back(raw.substr(pos, len));
      pos = (sp == std::string_view::npos) ? raw.size() : sp + 1;
    }
    if (tokens.empty() || tokens[0] != key) {
      throw std::runtime_error(where() + "expected '" + std::string(key) +
                               "', got '" +
                               (tokens.empty() ? "" : tokens[0]) + "'");
    }
    return tokens;
  }

  // First token of the next line without consuming it.
  std::string peek_key() const {
    const std::size_t nl = rest_.find('\n');
    const std::string_view raw = rest_.substr(0, nl);
    const std::size_t sp = raw.find(' ');
    return std::string(raw.substr(0, sp));
  }

  std::string where() const {
    return "ensemble file: line " + std::to_string(line_no_ + 2) + ": ";
  }

  double as_double(const std::vector<std::string>& tokens,
                   std::size_t i) const {
    require(tokens, i);
    double v = 0.0;
    const auto& t = tokens[i];
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
      throw std::runtime_error(where() + "bad number '" + t + "'");
    }
    return v;
  }

  long long as_int(const std::vector<std::string>& tokens,
                   std::size_t i) const {
    require(tokens, i);
    long long v = 0;
    const auto& t = tokens[i];
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
      throw std::runtime_error(where() + "bad integer '" + t + "'");
    }
    return v;
  }

  std::size_t as_count(const std::vector<std::string>& tokens,
                       std::size_t i) const {
    const long long v = as_int(tokens, i);
    if (v < 0) throw std::runtime_error(where() + "negative count");
    return static_cast<std::size_t>(v);
  }

  std::string as_string(const std::vector<std::string>& tokens,
                        std::size_t i) const {
    require(tokens, i);
    return unescape_token(tokens[i]);
  }

 private:
  void require(const std::vector<std::string>& tokens, std::size_t i) const {
    if (i >= tokens.size()) {
      throw std::runtime_error(where() + "missing field");
    }
  }

  std::string_view rest_;
  std::size_t line_no_ = 0;
};

std::vector<std::string> read_string_list(PayloadReader& r,
                                          std::string_view key) {
  const auto tokens = r.line(key);
  const std::size_t n = r.as_count(tokens, 1);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(r.as_string(tokens, 2 + i));
  return out;
}

std::vector<double> read_double_row(PayloadReader& r, std::string_view key,
                                    std::size_t expected) {
  const auto tokens = r.line(key);
  if (tokens.size() != expected + 1) {
    throw std::runtime_error(r.where() + "expected " +
                             std::to_string(expected) + " values after '" +
                             std::string(key) + "'");
  }
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i) out[i] = r.as_double(tokens, 1 + i);
  return out;
}

DecisionTree read_tree(PayloadReader& r) {
  const auto header = r.line("tree");
  const std::size_t n = r.as_count(header, 1);
  DecisionTree tree;
  tree.nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto tokens = r.line("node");
    TreeNode node;
    node.feature = static_cast<int>(r.as_int(tokens, 1));
    node.threshold = r.as_double(tokens, 2);
    node.left = static_cast<int>(r.as_int(tokens, 3));
    node.right = static_cast<int>(r.as_int(tokens, 4));
    node.count0 = r.as_int(tokens, 5);
    node.count1 = r.as_int(tokens, 6);
    tree.nodes.push_back(node);
  }
  return tree;
}

RegressionTree read_regression_tree(PayloadReader& r) {
  const auto header = r.line("rtree");
  const std::size_t n = r.as_count(header, 1);
  RegressionTree tree;
  tree.nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto tokens = r.line("rnode");
    RegressionTreeNode node;
    node.feature = static_cast<int>(r.as_int(tokens, 1));
    node.threshold = r.as_double(tokens, 2);
    node.left = static_cast<int>(r.as_int(tokens, 3));
    node.right = static_cast<int>(r.as_int(tokens, 4));
    node.value = r.as_double(tokens, 5);
    tree.nodes.push_back(node);
  }
  return tree;
}

Matrix read_matrix_row(PayloadReader& r, std::string_view key,
                       std::size_t rows, std::size_t cols) {
  Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    m.append_row(read_double_row(r, key, cols));
  }
  return m;
}

TrainedClassifier read_model(PayloadReader& r, ClassifierKind winner,
                             std::size_t n_features) {
  const std::string key = r.peek_key();
  if (key == "tree") {
    const ClassifierKind kind = (winner == ClassifierKind::kDtEntropy)
                                    ? ClassifierKind::kDtEntropy
                                    : ClassifierKind::kDtGini;
    return TrainedClassifier(ClassifierSpec::defaults(kind), n_features,
                             read_tree(r));
  }
  if (key == "forest") {
    const auto header = r.line("forest");
    const std::size_t n = r.as_count(header, 1);
    ForestModel forest;
    forest.trees.reserve(n);
    for (std::size_t i = 0; i < n; ++i) forest.trees.push_back(read_tree(r));
    return TrainedClassifier(ClassifierSpec::defaults(ClassifierKind::kRf),
                             n_features, std::move(forest));
  }
  if (key == "gnb") {
    const auto header = r.line("gnb");
    const std::size_t d = r.as_count(header, 1);
    GnbModel gnb;
    const auto prior = read_double_row(r, "log_prior", 2);
    gnb.log_prior = {prior[0], prior[1]};
    gnb.mean = read_matrix_row(r, "gnb_mean", 2, d);
    gnb.variance = read_matrix_row(r, "gnb_var", 2, d);
    return TrainedClassifier(ClassifierSpec::defaults(ClassifierKind::kGnb),
                             n_features, std::move(gnb));
  }
  if (key == "gbt") {
    const auto header = r.line("gbt");
    const std::size_t n = r.as_count(header, 1);
    GbtModel gbt;
    gbt.initial_score = r.as_double(header, 2);
    gbt.learning_rate = r.as_double(header, 3);
    gbt.trees.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      gbt.trees.push_back(read_regression_tree(r));
    }
    ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kGbt);
    spec.learning_rate = gbt.learning_rate;
    spec.n_rounds = static_cast<int>(n);
    return TrainedClassifier(spec, n_features, std::move(gbt));
  }
  if (key == "knn") {
    const auto header = r.line("knn");
    KnnModel knn;
    knn.k = static_cast<int>(r.as_int(header, 1));
    const std::size_t rows = r.as_count(header, 2);
    const std::size_t cols = r.as_count(header, 3);
    for (std::size_t i = 0; i < rows; ++i) {
      const auto tokens = r.line("krow");
      if (tokens.size() != cols + 2) {
        throw std::runtime_error(r.where() + "bad krow width");
      }
      knn.labels.push_back(static_cast<int>(r.as_int(tokens, 1)));
      std::vector<double> row(cols);
      for (std::size_t j = 0; j < cols; ++j) row[j] = r.as_double(tokens, 2 + j);
      knn.train.append_row(row);
    }
    ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kKnn);
    spec.knn_k = knn.k;
    return TrainedClassifier(spec, n_features, std::move(knn));
  }
  if (key == "constant") {
    const auto header = r.line("constant");
    const int label = static_cast<int>(r.as_int(header, 1));
    if (label != 0 && label != 1) {
      throw std::runtime_error(r.where() + "constant label must be 0 or 1");
    }
    return make_constant_classifier(label, n_features);
  }
  throw std::runtime_error(r.where() + "unknown model type '" + key + "'");
}

}  // namespace

void save_ensemble(const SpecialistEnsemble& ensemble,
                   const std::string& path) {
  const std::size_t d = ensemble.clusters.standardizer.n_features();
  PayloadWriter w;

  w.tok("schema_label").str(ensemble.schema.label_column);
  w.end_line();
  write_string_list(w, "schema_positive",
                    {ensemble.schema.positive_label_values.begin(),
                     ensemble.schema.positive_label_values.end()});
  write_string_list(w, "schema_drop", ensemble.schema.drop_columns);
  write_string_list(w, "schema_categorical",
                    ensemble.schema.categorical_columns);
  write_string_list(w, "schema_ports", ensemble.schema.port_columns);
  write_string_list(w, "schema_features", ensemble.schema.feature_columns);

  w.tok("encoders").num(ensemble.encoders.size());
  w.end_line();
  for (const CategoryEncoder& enc : ensemble.encoders) {
    w.tok("encoder").str(enc.column).num(enc.categories.size());
    for (const auto& cat : enc.categories) w.str(cat);
    w.end_line();
  }

  w.tok("standardizer").num(d);
  w.end_line();
  write_double_row(w, "mean", ensemble.clusters.standardizer.mean);
  write_double_row(w, "stddev", ensemble.clusters.standardizer.stddev);

  w.tok("clusters").num(ensemble.clusters.k).num(d);
  w.num(ensemble.clusters.wcss).num(ensemble.clusters.iterations_run);
  w.end_line();
  for (std::size_t i = 0; i < ensemble.clusters.centroids.rows; ++i) {
    write_double_row(w, "centroid", ensemble.clusters.centroids.row(i));
  }
  w.tok("curve").num(ensemble.clusters.curve.size());
  w.end_line();
  for (const WcssPoint& p : ensemble.clusters.curve) {
    w.tok("curve_point").num(p.k).num(p.wcss);
    w.end_line();
  }

  if (ensemble.specialists.size() != ensemble.selections.size()) {
    throw std::invalid_argument(
        "save_ensemble: specialists and selections disagree");
  }
  w.tok("specialists").num(ensemble.specialists.size());
  w.end_line();
  for (std::size_t i = 0; i < ensemble.specialists.size(); ++i) {
    const SelectionRecord& rec = ensemble.selections[i];
    w.tok("selection").tok(to_string(rec.winner));
    w.num(rec.tie_broken ? 1 : 0).num(rec.validation_row_count);
    w.num(rec.normal_count).num(rec.attack_count);
    w.num(rec.accuracies.size());
    for (const auto& [kind, acc] : rec.accuracies) {
      w.tok(to_string(kind)).num(acc);
    }
    w.end_line();
    write_model(w, ensemble.specialists[i]);
  }
  w.tok("end");
  w.end_line();

  const std::string& payload = w.payload();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "checksum " << hex32(crc32(payload)) << '\n';
  out << payload;
  out.flush();
  if (!out) {
    throw std::runtime_error("failed while writing '" + path + "'");
  }
}

SpecialistEnsemble load_ensemble(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string contents = buffer.str();

  // Header line: magic + version.
  std::size_t nl = contents.find('\n');
  if (nl == std::string::npos) {
    throw std::runtime_error("ensemble file: missing header");
  }
  {
    std::istringstream header(contents.substr(0, nl));
    std::string magic;
    int version = -1;
    header >> magic >> version;
    if (magic != kMagic) {
      throw std::runtime_error("ensemble file: bad magic '" + magic + "'");
    }
    if (version != kFormatVersion) {
      throw std::runtime_error("ensemble file: unsupported format version " +
                               std::to_string(version));
    }
  }

  // Checksum line guards the payload that follows it.
  const std::size_t checksum_start = nl + 1;
  nl = contents.find('\n', checksum_start);
  if (nl == std::string::npos) {
    throw std::runtime_error("ensemble file: missing checksum line");
  }
  const std::string_view payload =
      std::string_view(contents).substr(nl + 1);
  {
    std::istringstream line(contents.substr(checksum_start,
                                            nl - checksum_start));
    std::string key, stored;
    line >> key >> stored;
    if (key != "checksum" || stored.size() != 8) {
      throw std::runtime_error("ensemble file: malformed checksum line");
    }
    if (stored != hex32(crc32(payload))) {
      throw std::runtime_error("ensemble file: checksum mismatch");
    }
  }

  PayloadReader r(payload);
  SpecialistEnsemble ensemble;

  {
    const auto tokens = r.line("schema_label");
    ensemble.schema.label_column = r.as_string(tokens, 1);
  }
  for (const std::string& v : read_string_list(r, "schema_positive")) {
    ensemble.schema.positive_label_values.insert(v);
  }
  ensemble.schema.drop_columns = read_string_list(r, "schema_drop");
  ensemble.schema.categorical_columns =
      read_string_list(r, "schema_categorical");
  ensemble.schema.port_columns = read_string_list(r, "schema_ports");
  ensemble.schema.feature_columns = read_string_list(r, "schema_features");

  {
    const auto tokens = r.line("encoders");
    const std::size_t n = r.as_count(tokens, 1);
    ensemble.encoders.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto enc_tokens = r.line("encoder");
      CategoryEncoder enc;
      enc.column = r.as_string(enc_tokens, 1);
      const std::size_t n_cats = r.as_count(enc_tokens, 2);
      enc.categories.reserve(n_cats);
      for (std::size_t j = 0; j < n_cats; ++j) {
        enc.categories.push_back(r.as_string(enc_tokens, 3 + j));
      }
      ensemble.encoders.push_back(std::move(enc));
    }
  }

  std::size_t d = 0;
  {
    const auto tokens = r.line("standardizer");
    d = r.as_count(tokens, 1);
    ensemble.clusters.standardizer.mean = read_double_row(r, "mean", d);
    ensemble.clusters.standardizer.stddev = read_double_row(r, "stddev", d);
  }

  {
    const auto tokens = r.line("clusters");
    ensemble.clusters.k = static_cast<int>(r.as_int(tokens, 1));
    const std::size_t stored_d = r.as_count(tokens, 2);
    if (stored_d != d) {
      throw std::runtime_error(r.where() +
                               "cluster width disagrees with standardizer");
    }
    ensemble.clusters.wcss = r.as_double(tokens, 3);
    ensemble.clusters.iterations_run = static_cast<int>(r.as_int(tokens, 4));
    if (ensemble.clusters.k <= 0) {
      throw std::runtime_error(r.where() + "cluster count must be positive");
    }
    ensemble.clusters.centroids = read_matrix_row(
        r, "centroid", static_cast<std::size_t>(ensemble.clusters.k), d);
  }
  {
    const auto tokens = r.line("curve");
    const std::size_t n = r.as_count(tokens, 1);
    ensemble.clusters.curve.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto pt = r.line("curve_point");
      WcssPoint point;
      point.k = static_cast<int>(r.as_int(pt, 1));
      point.wcss = r.as_double(pt, 2);
      ensemble.clusters.curve.push_back(point);
    }
  }

  {
    const auto tokens = r.line("specialists");
    const std::size_t n = r.as_count(tokens, 1);
    if (n != static_cast<std::size_t>(ensemble.clusters.k)) {
      throw std::runtime_error(r.where() +
                               "specialist count disagrees with clusters");
    }
    ensemble.specialists.reserve(n);
    ensemble.selections.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto sel = r.line("selection");
      SelectionRecord rec;
      rec.cluster_id = static_cast<int>(i);
      rec.winner = classifier_kind_from_string(r.as_string(sel, 1));
      rec.tie_broken = r.as_int(sel, 2) != 0;
      rec.validation_row_count = r.as_count(sel, 3);
      rec.normal_count = r.as_count(sel, 4);
      rec.attack_count = r.as_count(sel, 5);
      const std::size_t n_accs = r.as_count(sel, 6);
      for (std::size_t j = 0; j < n_accs; ++j) {
        const ClassifierKind kind =
            classifier_kind_from_string(r.as_string(sel, 7 + 2 * j));
        rec.accuracies[kind] = r.as_double(sel, 8 + 2 * j);
      }
      ensemble.specialists.push_back(read_model(r, rec.winner, d));
      ensemble.selections.push_back(std::move(rec));
    }
  }
  r.line("end");
  return ensemble;
}

}  // namespace hcad
