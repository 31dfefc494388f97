#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <hcad/flowdata.hpp>

#include "testutil.hpp"

using namespace hcad;

namespace {

SchemaConfig tiny_schema() {
  SchemaConfig s;
  s.label_column = "attack";
  s.positive_label_values = {"1"};
  s.drop_columns = {"id"};
  s.categorical_columns = {"proto"};
  s.port_columns = {"sport"};
  return s;
}

RawTable tiny_table() {
  RawTable t;
  t.column_names = {"id", "proto", "sport", "dur", "attack"};
  t.rows = {
      {"1", "tcp", "80", "1.5", "1"},
      {"2", "udp", "0x1F90", "2.0", "0"},  // 0x1F90 = 8080
      {"3", "tcp", "443", "0.25", "1"},
      {"4", "arp", "junk", "-3.5", "0"},
  };
  return t;
}

}  // namespace

TEST_CASE("parse_port handles decimal, hex, and garbage") {
  CHECK(parse_port("80") == 80);
  CHECK(parse_port("  443 ") == 443);
  CHECK(parse_port("0x0303") == 771);
  CHECK(parse_port("0X1F") == 31);
  CHECK(parse_port("0") == 0);
  CHECK(parse_port("") == -1);
  CHECK(parse_port("  ") == -1);
  CHECK(parse_port("-5") == -1);
  CHECK(parse_port("80a") == -1);
  CHECK(parse_port("0x") == -1);
  CHECK(parse_port("0xZZ") == -1);
  CHECK(parse_port("port") == -1);
}

TEST_CASE("schema validation catches contradictions") {
  SchemaConfig s = tiny_schema();
  CHECK_NOTHROW(s.validate());

  SchemaConfig no_label = s;
  no_label.label_column.clear();
  CHECK_THROWS_AS(no_label.validate(), std::invalid_argument);

  SchemaConfig no_positive = s;
  no_positive.positive_label_values.clear();
  CHECK_THROWS_AS(no_positive.validate(), std::invalid_argument);

  SchemaConfig label_dropped = s;
  label_dropped.drop_columns.push_back("attack");
  CHECK_THROWS_AS(label_dropped.validate(), std::invalid_argument);

  SchemaConfig cat_and_port = s;
  cat_and_port.port_columns.push_back("proto");
  CHECK_THROWS_AS(cat_and_port.validate(), std::invalid_argument);

  SchemaConfig feature_dropped = s;
  feature_dropped.feature_columns = {"id"};
  CHECK_THROWS_AS(feature_dropped.validate(), std::invalid_argument);

  SchemaConfig label_feature = s;
  label_feature.feature_columns = {"attack"};
  CHECK_THROWS_AS(label_feature.validate(), std::invalid_argument);
}

TEST_CASE("schema parse reads key=value lines with comments") {
  std::istringstream in(
      "# flow schema\n"
      "label_column = attack\n"
      "positive_labels = 1, yes\n"
      "\n"
      "drop = id, seq\n"
      "categorical = proto\n"
      "ports = sport, dport\n");
  const SchemaConfig s = SchemaConfig::parse(in);
  CHECK(s.label_column == "attack");
  CHECK(s.positive_label_values == std::set<std::string>{"1", "yes"});
  CHECK(s.drop_columns == std::vector<std::string>{"id", "seq"});
  CHECK(s.categorical_columns == std::vector<std::string>{"proto"});
  CHECK(s.port_columns == std::vector<std::string>{"sport", "dport"});
  CHECK(s.feature_columns.empty());
}

TEST_CASE("schema parse rejects malformed lines and unknown keys") {
  std::istringstream no_eq("label_column attack\n");
  CHECK_THROWS_WITH_AS(SchemaConfig::parse(no_eq),
                       doctest::Contains("line 1"), std::runtime_error);
  std::istringstream bad_key("label_column=a\npositive_labels=1\nnope=1\n");
  CHECK_THROWS_WITH_AS(SchemaConfig::parse(bad_key),
                       doctest::Contains("unknown key"), std::runtime_error);
}

TEST_CASE("schema save/from_file round-trip") {
  testutil::TempDir dir("schema");
  SchemaConfig s = tiny_schema();
  s.feature_columns = {"dur", "proto", "sport"};
  const std::string path = dir.file("flow.schema");
  s.save(path);
  const SchemaConfig back = SchemaConfig::from_file(path);
  CHECK(back.label_column == s.label_column);
  CHECK(back.positive_label_values == s.positive_label_values);
  CHECK(back.drop_columns == s.drop_columns);
  CHECK(back.categorical_columns == s.categorical_columns);
  CHECK(back.port_columns == s.port_columns);
  CHECK(back.feature_columns == s.feature_columns);
}

TEST_CASE("load_table reads headers and enforces row widths") {
  testutil::TempDir dir("load");
  const std::string path = dir.file("flows.csv");
  testutil::spit(path,
                 "id,proto,sport,dur,attack\n"
                 "1,tcp,80,1.5,1\n"
                 "2,\"udp,v2\",81,2.5,0\n");
  const RawTable t = load_table(path, tiny_schema());
  REQUIRE(t.row_count() == 2);
  CHECK(t.column_names.size() == 5);
  CHECK(t.rows[1][1] == "udp,v2");  // quoted comma survives
  CHECK(t.column_index("dur") == 3);
  CHECK(t.has_column("proto"));
  CHECK_FALSE(t.has_column("nope"));
  CHECK_THROWS(t.column_index("nope"));

  testutil::spit(path, "id,proto,sport,dur,attack\n1,tcp,80,1.5\n");
  CHECK_THROWS_WITH_AS(load_table(path, tiny_schema()),
                       doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("load_table can require or skip the label column") {
  testutil::TempDir dir("label");
  const std::string path = dir.file("unlabeled.csv");
  testutil::spit(path, "id,proto,sport,dur\n1,tcp,80,1.5\n");
  CHECK_THROWS(load_table(path, tiny_schema(), true));
  const RawTable t = load_table(path, tiny_schema(), false);
  CHECK(t.row_count() == 1);
}

TEST_CASE("category encoder sorts and is order independent") {
  const CategoryEncoder a =
      fit_category_encoder("proto", {"udp", "tcp", "udp", "arp"});
  const CategoryEncoder b =
      fit_category_encoder("proto", {"arp", "udp", "tcp"});
  CHECK(a.categories == b.categories);
  CHECK(a.categories == std::vector<std::string>{"arp", "tcp", "udp"});
  CHECK(a.encode("arp") == 0);
  CHECK(a.encode("tcp") == 1);
  CHECK(a.encode("udp") == 2);
  CHECK(a.encode("icmp") == a.unseen_code());
  CHECK(a.unseen_code() == 3);
  CHECK(a.decode(1) == "tcp");
}

TEST_CASE("encode_table maps columns by kind") {
  const EncodedDataset ds = encode_table(tiny_table(), tiny_schema());
  // id dropped, attack is the label: proto, sport, dur remain in table order.
  CHECK(ds.feature_names == std::vector<std::string>{"proto", "sport", "dur"});
  REQUIRE(ds.size() == 4);
  REQUIRE(ds.features.cols == 3);
  CHECK(ds.labels == std::vector<int>{1, 0, 1, 0});

  // proto categories sort to arp=0, tcp=1, udp=2.
  CHECK(ds.features.at(0, 0) == 1.0);
  CHECK(ds.features.at(1, 0) == 2.0);
  CHECK(ds.features.at(3, 0) == 0.0);
  // ports: decimal, hex, and garbage -> -1.
  CHECK(ds.features.at(0, 1) == 80.0);
  CHECK(ds.features.at(1, 1) == 8080.0);
  CHECK(ds.features.at(3, 1) == -1.0);
  // numeric column parsed as double.
  CHECK(ds.features.at(2, 2) == 0.25);
  CHECK(ds.features.at(3, 2) == -3.5);

  const auto [normal, attack] = ds.class_counts();
  CHECK(normal == 2);
  CHECK(attack == 2);
}

TEST_CASE("encode_table honours an explicit feature list") {
  SchemaConfig s = tiny_schema();
  s.feature_columns = {"dur", "proto"};
  const EncodedDataset ds = encode_table(tiny_table(), s);
  CHECK(ds.feature_names == std::vector<std::string>{"dur", "proto"});
  CHECK(ds.features.cols == 2);
  CHECK(ds.features.at(0, 0) == 1.5);
  CHECK(ds.features.at(0, 1) == 1.0);
}

TEST_CASE("encode_table rejects unparseable numerics with context") {
  RawTable t = tiny_table();
  t.rows[2][3] = "fast";
  CHECK_THROWS_WITH_AS(encode_table(t, tiny_schema()),
                       doctest::Contains("data row 3"), std::runtime_error);
}

TEST_CASE("encode_table_with reuses encoders and tolerates missing labels") {
  const EncodedDataset fitted = encode_table(tiny_table(), tiny_schema());

  RawTable unlabeled;
  unlabeled.column_names = {"id", "proto", "sport", "dur"};
  unlabeled.rows = {{"9", "icmp", "53", "4.0"}, {"10", "tcp", "22", "1.0"}};
  const EncodedDataset ds =
      encode_table_with(unlabeled, tiny_schema(), fitted.encoders);
  CHECK(ds.labels.empty());
  REQUIRE(ds.size() == 2);
  // icmp was never seen while fitting: it gets the unseen bucket.
  CHECK(ds.features.at(0, 0) == 3.0);
  CHECK(ds.features.at(1, 0) == 1.0);
}

TEST_CASE("select_rows keeps features, labels, and metadata aligned") {
  const EncodedDataset ds = encode_table(tiny_table(), tiny_schema());
  const EncodedDataset sub = ds.select_rows({2, 0});
  REQUIRE(sub.size() == 2);
  CHECK(sub.labels == std::vector<int>{1, 1});
  CHECK(sub.features.at(0, 1) == 443.0);
  CHECK(sub.features.at(1, 1) == 80.0);
  CHECK(sub.feature_names == ds.feature_names);
  CHECK(sub.encoders.size() == ds.encoders.size());
}

TEST_CASE("stratified split preserves class proportions") {
  std::vector<int> labels;
  for (int i = 0; i < 80; ++i) labels.push_back(1);
  for (int i = 0; i < 20; ++i) labels.push_back(0);

  const auto [train, test] = stratified_split_indices(labels, 0.7, 42);
  CHECK(train.size() + test.size() == 100);

  auto count_class = [&](const std::vector<std::size_t>& idx, int cls) {
    return std::count_if(idx.begin(), idx.end(),
                         [&](std::size_t i) { return labels[i] == cls; });
  };
  CHECK(count_class(train, 1) == 56);  // 0.7 * 80
  CHECK(count_class(train, 0) == 14);  // 0.7 * 20
  CHECK(count_class(test, 1) == 24);
  CHECK(count_class(test, 0) == 6);

  std::set<std::size_t> seen(train.begin(), train.end());
  seen.insert(test.begin(), test.end());
  CHECK(seen.size() == 100);  // disjoint and complete
}

TEST_CASE("stratified split is seeded and deterministic") {
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) labels.push_back(i % 3 == 0 ? 0 : 1);
  const auto a = stratified_split_indices(labels, 0.5, 7);
  const auto b = stratified_split_indices(labels, 0.5, 7);
  const auto c = stratified_split_indices(labels, 0.5, 8);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.first != c.first);
}

TEST_CASE("stratified split guarantees a row per class per side") {
  // 2 normals in 12 rows at an extreme fraction: each side still gets one.
  std::vector<int> labels = {0, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1};
  const auto [train, test] = stratified_split_indices(labels, 0.9, 1);
  auto has_class = [&](const std::vector<std::size_t>& idx, int cls) {
    return std::any_of(idx.begin(), idx.end(),
                       [&](std::size_t i) { return labels[i] == cls; });
  };
  CHECK(has_class(train, 0));
  CHECK(has_class(test, 0));
  CHECK(has_class(train, 1));
  CHECK(has_class(test, 1));
}

TEST_CASE("stratified split rejects bad input") {
  std::vector<int> ok = {0, 0, 1, 1};
  CHECK_THROWS_AS(stratified_split_indices(ok, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(stratified_split_indices(ok, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(stratified_split_indices({}, 0.5, 1), std::invalid_argument);
  std::vector<int> lone = {0, 1, 1, 1};
  CHECK_THROWS_AS(stratified_split_indices(lone, 0.5, 1),
                  std::invalid_argument);
}

TEST_CASE("stratified_split splits the dataset itself") {
  const EncodedDataset ds = encode_table(tiny_table(), tiny_schema());
  const auto [train, test] = stratified_split(ds, 0.5, 3);
  CHECK(train.size() == 2);
  CHECK(test.size() == 2);
  const auto [train_n, train_a] = train.class_counts();
  CHECK(train_n == 1);
  CHECK(train_a == 1);
}
