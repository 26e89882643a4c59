#include <cmath>
#include <random>

#include <doctest.h>

#include "argprobe/error.hpp"
#include "argprobe/metrics.hpp"
#include "support/fixtures.hpp"

using namespace argprobe;
using fixtures::brute_force_auc;

namespace {

std::vector<double> draw(std::mt19937_64& rng, std::size_t n, int levels) {
  std::uniform_int_distribution<int> pick(0, levels - 1);
  std::vector<double> v(n);
  for (auto& x : v) x = pick(rng) * 0.5 - 2.0;
  return v;
}

}  // namespace

TEST_CASE("documented examples") {
  CHECK(auc(std::vector{3.0}, std::vector{1.0, 2.0}) == 1.0);
  CHECK(auc(std::vector{1.0}, std::vector{1.0, 1.0}) == 0.5);
  CHECK(auc(std::vector{2.0, 1.0}, std::vector{2.0, 0.0}) == 0.625);
  CHECK(brute_force_auc({2.0, 1.0}, {2.0, 0.0}) == 0.625);
}

TEST_CASE("empty sides are errors") {
  std::vector<double> none, one{1.0};
  CHECK_THROWS_AS(auc(none, one), Error);
  CHECK_THROWS_AS(auc(one, none), Error);
}

TEST_CASE("ROC integration equals the pairwise statistic") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 3000; ++i) {
    std::size_t np = 1 + rng() % 5, nn = 1 + rng() % 8;
    int levels = 2 + static_cast<int>(rng() % 6);
    auto p = draw(rng, np, levels), n = draw(rng, nn, levels);
    CHECK(std::abs(auc(p, n) - brute_force_auc(p, n)) < 1e-9);
  }
}

TEST_CASE("constant and strict-max scores are exact") {
  for (std::size_t nn : {2u, 6u}) {
    std::vector<double> p{0.3}, n(nn, 0.3);
    CHECK(auc(p, n) == 0.5);
    for (std::size_t k = 0; k < nn; ++k) n[k] = -static_cast<double>(k);
    p[0] = 1.0;
    CHECK(auc(p, n) == 1.0);
    p[0] = -100.0;
    CHECK(auc(p, n) == 0.0);
  }
}

TEST_CASE("swapping sides complements the AUC") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    auto p = draw(rng, 1 + rng() % 4, 4), n = draw(rng, 1 + rng() % 7, 4);
    CHECK(auc(p, n) + auc(n, p) == 1.0);
  }
}

TEST_CASE("invariant under strictly increasing transforms") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    auto p = draw(rng, 1, 5), n = draw(rng, 6, 5);
    auto base = auc(p, n);
    auto map = [&](auto f) {
      std::vector<double> tp, tn;
      for (double x : p) tp.push_back(f(x));
      for (double x : n) tn.push_back(f(x));
      return auc(tp, tn);
    };
    CHECK(map([](double x) { return std::exp(x); }) == base);
    CHECK(map([](double x) { return 3.0 * x - 11.0; }) == base);
  }
}

TEST_CASE("roc curve endpoints") {
  auto pts = roc_curve(std::vector{2.0, 1.0}, std::vector{2.0, 0.0});
  REQUIRE(pts.size() >= 2);
  CHECK(pts.front().false_positive_rate == 0.0);
  CHECK(pts.front().true_positive_rate == 0.0);
  CHECK(pts.back().false_positive_rate == 1.0);
  CHECK(pts.back().true_positive_rate == 1.0);
}

TEST_CASE("pearson") {
  std::vector<double> x{1, 2, 3}, y{1, 2, 4};
  CHECK(std::abs(pearson(x, y) - 9.0 / std::sqrt(84.0)) < 1e-9);
  CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  std::vector<double> neg{-1, -2, -3};
  CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-15));
  std::vector<double> flat{2, 2, 2};
  CHECK_THROWS_AS(pearson(x, flat), Error);
  std::vector<double> shorter{1, 2};
  CHECK_THROWS_AS(pearson(x, shorter), Error);
  std::vector<double> one{1};
  CHECK_THROWS_AS(pearson(one, one), Error);
}
