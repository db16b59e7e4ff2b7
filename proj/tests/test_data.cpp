#include <doctest.h>

#include <numeric>
#include <sstream>

#include "driftml/data.hpp"
#include "driftml/stagger.hpp"
#include "fixtures.hpp"

using namespace driftml;

TEST_CASE("four-row csv infers one numeric and one categorical feature") {
  std::istringstream in("a,b,y\n1.0,red,0\n2.5,green,1\n-3,red,1\n0,green,0\n");
  const auto t = read_csv(in, std::nullopt, "y");
  REQUIRE(t.schema.feature_count() == 2);
  CHECK(t.schema.feature(0).kind == FeatureKind::Numeric);
  CHECK(t.schema.feature(1).kind == FeatureKind::Categorical);
  CHECK(t.schema.feature(1).levels == std::vector<std::string>{"red", "green"});
  CHECK(t.schema.label().classes == std::vector<std::string>{"0", "1"});
  REQUIRE(t.batch.size() == 4);
  CHECK(t.batch.instances[1].values[0] == 2.5);
  CHECK(t.batch.instances[1].values[1] == 1.0);
  CHECK(t.batch.labels() == std::vector<int>{0, 1, 1, 0});
}

TEST_CASE("label column may sit anywhere and quoted fields keep commas") {
  std::istringstream in("y,name,v\nyes,\"x, y\",1\nno,z,?\n");
  const auto t = read_csv(in, std::nullopt, "y");
  CHECK(t.schema.feature(0).levels == std::vector<std::string>{"x, y", "z"});
  CHECK(is_missing(t.batch.instances[1].values[1]));
  CHECK(t.schema.label().classes == std::vector<std::string>{"no", "yes"});
}

TEST_CASE("unseen categorical level against a schema hint") {
  Schema hint({{"a", FeatureKind::Numeric, {}}, {"b", FeatureKind::Categorical, {"red", "green"}}}, {"y", {"0", "1"}});
  std::istringstream in("a,b,y\n1.5,purple,0\n");
  const auto t = read_csv(in, hint, "y");
  REQUIRE(t.batch.size() == 1);
  CHECK(is_unseen(t.batch.instances[0].values[1]));
  CHECK(t.batch.instances[0].values[0] == 1.5);
}

TEST_CASE("csv errors") {
  SUBCASE("missing label column") {
    std::istringstream in("a,b\n1,2\n");
    CHECK_THROWS_AS(read_csv(in, std::nullopt, "y"), DataError);
  }
  SUBCASE("ragged row") {
    std::istringstream in("a,y\n1,0\n2\n");
    CHECK_THROWS_AS(read_csv(in, std::nullopt, "y"), DataError);
  }
  SUBCASE("class outside the hinted set") {
    Schema hint({{"a", FeatureKind::Numeric, {}}}, {"y", {"0", "1"}});
    std::istringstream in("a,y\n1,2\n");
    CHECK_THROWS_AS(read_csv(in, hint, "y"), DataError);
  }
}

TEST_CASE("split_stream sizes") {
  const auto data = fixtures::linear_batch(10, 1);
  const auto parts = split_stream(data, 3);
  std::vector<std::size_t> sizes;
  for (const auto& p : parts) sizes.push_back(p.size());
  CHECK(sizes == std::vector<std::size_t>{3, 3, 3, 1});
  for (std::size_t i = 0; i < parts.size(); ++i) CHECK(parts[i].index == i);

  const auto five = fixtures::linear_batch(5, 2);
  const auto one = split_stream(five, 5);
  REQUIRE(one.size() == 1);
  CHECK(fingerprint(one[0]) == fingerprint(five));

  CHECK_THROWS(split_stream(data, 0));
}

TEST_CASE("70000 generated instances split into ten equal batches") {
  const auto data = generate_stagger(default_stagger_config(70000, 3));
  const auto parts = split_stream(data, 7000);
  REQUIRE(parts.size() == 10);
  for (const auto& p : parts) CHECK(p.size() == 7000);
}

TEST_CASE("split then concatenate is the identity") {
  for (std::size_t size : {1u, 4u, 7u, 50u, 64u}) {
    const auto data = fixtures::mixed_batch(50, size);
    const auto parts = split_stream(data, size);
    const auto joined = concatenate(parts);
    CHECK(fingerprint(joined) == fingerprint(data));
    CHECK(joined.size() == data.size());
  }
}

TEST_CASE("write_csv output reads back to the same batch") {
  const auto data = fixtures::mixed_batch(40, 9);
  std::stringstream ss;
  write_csv(ss, data);
  const auto t = read_csv(ss, *data.schema, "y");
  CHECK(fingerprint(t.batch) == fingerprint(data));
}

TEST_CASE("without_labels strips every label and keeps values") {
  const auto data = fixtures::linear_batch(20, 4);
  const auto hidden = data.without_labels();
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK_FALSE(hidden.instances[i].label.has_value());
    CHECK(hidden.instances[i].values == data.instances[i].values);
  }
  CHECK_THROWS_AS(hidden.labels(), DataError);
}

TEST_CASE("schema rejects duplicates and single-class labels") {
  CHECK_THROWS_AS(Schema({{"a", FeatureKind::Numeric, {}}, {"a", FeatureKind::Numeric, {}}}, {"y", {"0", "1"}}),
                  DataError);
  CHECK_THROWS_AS(Schema({{"a", FeatureKind::Numeric, {}}}, {"y", {"0"}}), DataError);
}
