// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "errors.hpp"
#include "exact_index.hpp"
#include "generators.hpp"

using namespace pasa;
using pasa::testgen::random_unit_embedding;

TEST_CASE("empty index matches nothing") {
  ExactIndex index(8);
  Rng rng(21);
  CHECK(index.match(random_unit_embedding(rng, 8)).empty());
}

TEST_CASE("below-threshold candidate is excluded") {
  ExactIndex index(4);
  index.insert("sub-1", Embedding::require_unit({1, 0, 0, 0}), 0.7);
  // cos = 0.69 < 0.7
  std::vector<double> q = {0.69, std::sqrt(1 - 0.69 * 0.69), 0, 0};
  CHECK(index.match(Embedding::unit(q)).empty());
  // at the threshold it matches (inclusive >=)
  std::vector<double> q2 = {0.7, std::sqrt(1 - 0.49), 0, 0};
  auto matches = index.match(Embedding::unit(q2));
  REQUIRE(matches.size() == 1);
  CHECK(matches[0].subscription_id == "sub-1");
}

TEST_CASE("exact_match equals an independent linear scan") {
  // The oracle here is written from scratch: no index code involved.
  Rng rng(22);
  const size_t dim = 16;
  struct Entry {
    std::string id;
    Embedding e;
    double threshold;
  };
  std::vector<Entry> entries;
  ExactIndex index(dim);
  for (int i = 0; i < 100; ++i) {
    Entry entry{"s" + std::to_string(i), random_unit_embedding(rng, dim),
                0.1 + 0.8 * rng.next_unit()};
    index.insert(entry.id, entry.e, entry.threshold);
    entries.push_back(std::move(entry));
  }

  for (int trial = 0; trial < 50; ++trial) {
    Embedding query = random_unit_embedding(rng, dim);
    std::vector<MatchCandidate> expected;
    for (const auto& entry : entries) {
      double dot_product = 0.0;
      for (size_t d = 0; d < dim; ++d) {
        dot_product += query.components()[d] * entry.e.components()[d];
      }
      double rounded = std::round(dot_product * 1e9) / 1e9;
      if (rounded >= entry.threshold) expected.push_back({entry.id, rounded});
    }
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
      if (a.similarity != b.similarity) return a.similarity > b.similarity;
      return a.subscription_id < b.subscription_id;
    });

    auto actual = index.match(query);
    REQUIRE(actual.size() == expected.size());
    for (size_t i = 0; i < actual.size(); ++i) {
      CHECK(actual[i].subscription_id == expected[i].subscription_id);
      CHECK(actual[i].similarity == expected[i].similarity);
    }
  }
}

TEST_CASE("results are insensitive to insertion order") {
  Rng rng(23);
  const size_t dim = 8;
  std::vector<std::pair<Embedding, double>> entries;
  for (int i = 0; i < 30; ++i) {
    entries.emplace_back(random_unit_embedding(rng, dim), 0.2);
  }
  ExactIndex forward(dim), backward(dim);
  for (size_t i = 0; i < entries.size(); ++i) {
    forward.insert("s" + std::to_string(i), entries[i].first, entries[i].second);
  }
  for (size_t i = entries.size(); i-- > 0;) {
    backward.insert("s" + std::to_string(i), entries[i].first, entries[i].second);
  }
  for (int trial = 0; trial < 20; ++trial) {
    Embedding query = random_unit_embedding(rng, dim);
    auto a = forward.match(query);
    auto b = backward.match(query);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].subscription_id == b[i].subscription_id);
      CHECK(a[i].similarity == b[i].similarity);
    }
  }
}

TEST_CASE("insert and remove state errors") {
  ExactIndex index(4);
  Embedding e = Embedding::require_unit({1, 0, 0, 0});
  index.insert("a", e, 0.5);
  CHECK_THROWS_AS(index.insert("a", e, 0.5), StateError);
  index.remove("a");
  CHECK_THROWS_AS(index.remove("a"), StateError);
  CHECK_THROWS_AS(index.insert("b", Embedding::require_unit({1, 0}), 0.5), ValidationError);
}
