#include <doctest.h>

#include <cmath>

#include "vropt/bench.hpp"
#include "vropt/dataset.hpp"

using namespace vropt;

TEST_CASE("parse_libsvm transcribes indices, values and labels") {
  const SparseDataset ds = parse_libsvm("+1 1:0.5 3:-2\n");
  CHECK(ds.size() == 1);
  CHECK(ds.dim == 3);
  CHECK(ds.labels[0] == 1.0);
  REQUIRE(ds.rows[0].indices.size() == 2);
  CHECK(ds.rows[0].indices[0] == 0);
  CHECK(ds.rows[0].indices[1] == 2);
  CHECK(ds.rows[0].values[0] == 0.5);
  CHECK(ds.rows[0].values[1] == -2.0);
  CHECK(ds.rows[0].squared_norm == doctest::Approx(4.25).epsilon(1e-14));
}

TEST_CASE("parse_libsvm maps labels by sign") {
  const SparseDataset ds = parse_libsvm("2 1:1\n4 2:1\n0 1:1\n-3 1:1\n");
  CHECK(ds.labels == std::vector<double>{1.0, 1.0, -1.0, -1.0});
}

TEST_CASE("parse_libsvm rejects an empty stream") {
  CHECK_THROWS_WITH_AS(parse_libsvm("\n  \n"), "empty dataset", parse_error);
}

TEST_CASE("parse errors carry line numbers") {
  SUBCASE("malformed value") {
    try {
      parse_libsvm("+1 1:x\n");
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line_no == 1);
    }
  }
  SUBCASE("non-increasing index") {
    try {
      parse_libsvm("+1 1:1\n-1 2:1 2:3\n");
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line_no == 2);
    }
  }
  SUBCASE("index below one") { CHECK_THROWS_AS(parse_libsvm("+1 0:1\n"), parse_error); }
  SUBCASE("missing colon") { CHECK_THROWS_AS(parse_libsvm("+1 7\n"), parse_error); }
}

TEST_CASE("comment lines and blank lines are skipped") {
  const SparseDataset ds = parse_libsvm("# header\n\n+1 2:1\n");
  CHECK(ds.size() == 1);
  CHECK(ds.dim == 2);
}

TEST_CASE("dim override extends but never shrinks") {
  CHECK(parse_libsvm("+1 3:1\n", 10).dim == 10);
  CHECK(parse_libsvm("+1 3:1\n", 2).dim == 3);
}

TEST_CASE("explicit zeros are not stored") {
  const SparseDataset ds = parse_libsvm("+1 1:0 2:5\n");
  REQUIRE(ds.rows[0].indices.size() == 1);
  CHECK(ds.rows[0].indices[0] == 1);
  CHECK(ds.dim == 2);
}

TEST_CASE("normalize_rows") {
  SUBCASE("3-4-5 triangle") {
    const SparseDataset ds = normalize_rows(parse_libsvm("+1 1:3 2:4\n"));
    CHECK(ds.rows[0].values[0] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(ds.rows[0].values[1] == doctest::Approx(0.8).epsilon(1e-14));
  }
  SUBCASE("identity on unit rows") {
    const SparseDataset ds = normalize_rows(parse_libsvm("+1 1:1\n"));
    CHECK(ds.rows[0].values[0] == 1.0);
  }
  SUBCASE("zero rows stay zero, no NaN") {
    SparseDataset ds = parse_libsvm("+1 1:0\n+1 1:1\n");
    ds = normalize_rows(std::move(ds));
    CHECK(ds.rows[0].values.empty());
    CHECK(ds.rows[0].squared_norm == 0.0);
  }
  SUBCASE("norms within 1e-12 of one on a random dataset") {
    SyntheticSpec spec;
    spec.n = 50;
    spec.d = 12;
    spec.density = 0.6;
    SparseDataset ds = gen_synthetic(spec, 3);
    for (auto& row : ds.rows)
      for (auto& v : row.values) v *= 7.25;  // denormalize
    for (auto& row : ds.rows) row.recompute_norm();
    ds = normalize_rows(std::move(ds));
    for (const auto& row : ds.rows)
      CHECK(std::abs(std::sqrt(row.squared_norm) - 1.0) < 1e-12);
  }
}

TEST_CASE("missing files raise parse errors") {
  CHECK_THROWS_AS(load_libsvm_file("/nonexistent/path/data.libsvm"), parse_error);
}

TEST_CASE("parse-serialize round trip is the identity on parsed datasets") {
  SyntheticSpec spec;
  spec.n = 40;
  spec.d = 9;
  spec.density = 0.5;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const SparseDataset ds = gen_synthetic(spec, seed);
    const SparseDataset again = parse_libsvm(to_libsvm(ds), ds.dim);
    REQUIRE(again.size() == ds.size());
    CHECK(again.dim == ds.dim);
    CHECK(again.labels == ds.labels);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(again.rows[i].indices == ds.rows[i].indices);
      CHECK(again.rows[i].values == ds.rows[i].values);
    }
    // idempotence: one more round trip changes nothing
    const SparseDataset third = parse_libsvm(to_libsvm(again), again.dim);
    for (std::size_t i = 0; i < ds.size(); ++i)
      CHECK(third.rows[i].values == again.rows[i].values);
  }
}
