#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include <hcad/csv.hpp>
#include <hcad/matrix.hpp>
#include <hcad/rng.hpp>

using namespace hcad;

TEST_CASE("mix64 is deterministic and spreads nearby inputs") {
  CHECK(mix64(1) == mix64(1));
  CHECK(mix64(1) != mix64(2));
  CHECK(derive_seed(7, 0x73706c6974ULL) == derive_seed(7, 0x73706c6974ULL));
  CHECK(derive_seed(7, 1) != derive_seed(7, 2));
  CHECK(derive_seed(7, 1) != derive_seed(8, 1));
  CHECK(derive_seed(7, 1, 2) != derive_seed(7, 1, 3));
  CHECK(derive_seed(7, 1, 2) != derive_seed(7, 1));
}

TEST_CASE("rng streams are reproducible and disjoint per seed") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff_seed_differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    if (x != b.next_u64()) all_equal = false;
    if (x != c.next_u64()) any_diff_seed_differs = true;
  }
  CHECK(all_equal);
  CHECK(any_diff_seed_differs);
}

TEST_CASE("next_unit stays in [0, 1)") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("next_normal has roughly standard moments") {
  Rng rng(11);
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.next_normal();
    CHECK(std::isfinite(x));
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.05);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("next_index covers its range and nothing else") {
  Rng rng(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const std::size_t idx = rng.next_index(7);
    REQUIRE(idx < 7);
    ++counts[idx];
  }
  for (const int c : counts) CHECK(c > 700);  // crude uniformity
}

TEST_CASE("shuffle produces a permutation") {
  Rng rng(9);
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  rng.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
  bool moved = false;
  for (int i = 0; i < 100; ++i) moved |= v[static_cast<std::size_t>(i)] != i;
  CHECK(moved);
}

TEST_CASE("sample_without_replacement is ascending, distinct, in range") {
  Rng rng(13);
  const auto s = rng.sample_without_replacement(50, 20);
  REQUIRE(s.size() == 20);
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i] < 50);
    if (i > 0) CHECK(s[i] > s[i - 1]);
    seen.insert(s[i]);
  }
  CHECK(seen.size() == 20);

  const auto all = Rng(1).sample_without_replacement(10, 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(all[i] == i);
}

TEST_CASE("matrix append and row views") {
  Matrix m;
  const std::vector<double> r0 = {1.0, 2.0, 3.0};
  const std::vector<double> r1 = {4.0, 5.0, 6.0};
  m.append_row(r0);
  m.append_row(r1);
  REQUIRE(m.rows == 2);
  REQUIRE(m.cols == 3);
  CHECK(m.at(1, 2) == 6.0);
  CHECK(m.row(0)[1] == 2.0);

  const Matrix sel = m.select_rows({1, 0, 1});
  REQUIRE(sel.rows == 3);
  CHECK(sel.at(0, 0) == 4.0);
  CHECK(sel.at(1, 0) == 1.0);
  CHECK(sel.at(2, 0) == 4.0);
}

TEST_CASE("squared_distance matches the direct formula") {
  const std::vector<double> a = {1.0, -2.0, 0.5};
  const std::vector<double> b = {0.0, 1.0, 0.5};
  CHECK(squared_distance(a, b) == doctest::Approx(1.0 + 9.0).epsilon(1e-12));
  CHECK(squared_distance(a, a) == 0.0);
}

TEST_CASE("csv round-trips quoted cells") {
  std::vector<std::string> cells = {"plain", "with,comma", "with\"quote",
                                    "multi\nline", ""};
  std::ostringstream out;
  csv::write_record(out, cells);

  std::istringstream in(out.str());
  std::vector<std::string> back;
  std::size_t lines = 0;
  REQUIRE(csv::read_record(in, back, lines));
  CHECK(back == cells);
  CHECK(lines == 2);  // the embedded newline consumes a physical line
  CHECK_FALSE(csv::read_record(in, back, lines));
}

TEST_CASE("csv escape quotes only when needed") {
  CHECK(csv::escape("abc") == "abc");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("a\"b") == "\"a\"\"b\"");
  CHECK(csv::escape("a\nb") == "\"a\nb\"");
}

TEST_CASE("csv reads unquoted records line by line") {
  std::istringstream in("a,b,c\n1,2,3\n");
  std::vector<std::string> cells;
  std::size_t lines = 0;
  REQUIRE(csv::read_record(in, cells, lines));
  CHECK(cells == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(csv::read_record(in, cells, lines));
  CHECK(cells == std::vector<std::string>{"1", "2", "3"});
  CHECK(lines == 2);
  CHECK_FALSE(csv::read_record(in, cells, lines));
}
