// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include <doctest.h>

#include <cmath>

#include "embedding.hpp"
#include "errors.hpp"
#include "rng.hpp"

using namespace pasa;

namespace {

Embedding random_unit(Rng& rng, size_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = rng.next_gaussian();
  return Embedding::unit(std::move(v));
}

}  // namespace

TEST_CASE("cosine identity and orthogonality") {
  Rng rng(11);
  Embedding v = random_unit(rng, 16);
  CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> e1(8, 0.0), e2(8, 0.0);
  e1[0] = 1.0;
  e2[1] = 1.0;
  CHECK(cosine_similarity(Embedding::require_unit(e1), Embedding::require_unit(e2)) == 0.0);
}

TEST_CASE("cosine of 45 degrees is 1/sqrt(2)") {
  std::vector<double> a(8, 0.0), b(8, 0.0);
  a[0] = 1.0;
  a[1] = 1.0;
  b[0] = 1.0;
  double sim = cosine_similarity(Embedding::unit(a), Embedding::unit(b));
  CHECK(sim == doctest::Approx(0.7071067812).epsilon(1e-9));
}

TEST_CASE("normalize 3-4-5") {
  Embedding e = Embedding::unit({3.0, 4.0, 0.0});
  CHECK(e.components()[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(e.components()[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(e.components()[2] == 0.0);
}

TEST_CASE("normalize is idempotent on unit vectors") {
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    Embedding e = random_unit(rng, 32);
    std::vector<double> copy(e.components().begin(), e.components().end());
    Embedding again = Embedding::unit(std::move(copy));
    for (size_t d = 0; d < e.dim(); ++d) {
      CHECK(std::fabs(again.components()[d] - e.components()[d]) <= 1e-12);
    }
  }
}

TEST_CASE("normalize rejects bad input") {
  CHECK_THROWS_AS(Embedding::unit({0.0, 0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(Embedding::unit({}), ValidationError);
  CHECK_THROWS_AS(Embedding::unit({1.0, std::nan("")}), ValidationError);
  CHECK_THROWS_AS(Embedding::require_unit({0.5, 0.5}), ValidationError);
  std::vector<double> a(4, 0.0), b(6, 0.0);
  a[0] = b[0] = 1.0;
  CHECK_THROWS_AS(
      cosine_similarity(Embedding::require_unit(a), Embedding::require_unit(b)), ValidationError);
}

TEST_CASE("cosine is symmetric and bounded for random unit vectors") {
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    Embedding a = random_unit(rng, 24);
    Embedding b = random_unit(rng, 24);
    double ab = cosine_similarity(a, b);
    double ba = cosine_similarity(b, a);
    CHECK(ab == ba);
    CHECK(ab >= -1.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("similarity rounding fixes threshold comparisons") {
  // 9-decimal rounding: values within 5e-10 of the threshold round onto it.
  CHECK(meets_threshold(0.7, 0.7));
  CHECK(meets_threshold(0.7000000004, 0.7));
  CHECK(meets_threshold(0.6999999996, 0.7));
  CHECK_FALSE(meets_threshold(0.699999999, 0.7));
  CHECK(round_similarity(0.123456789123) == doctest::Approx(0.123456789).epsilon(1e-15));
}
