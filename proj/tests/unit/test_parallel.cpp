#include <doctest.h>

#include <random>

#include "viscoflow/parallel.hpp"

using namespace viscoflow;

namespace {

std::vector<double> noisy(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = U(rng) * std::pow(10.0, 8.0 * U(rng));
  return v;
}

}  // namespace

TEST_CASE("deterministic_sum is thread-count independent") {
  const auto v = noisy(100003);
  const int saved = thread_count();
  set_thread_count(1);
  const double s1 = deterministic_sum(v);
  set_thread_count(3);
  const double s3 = deterministic_sum(v);
  set_thread_count(8);
  const double s8 = deterministic_sum(v);
  set_thread_count(saved);
  CHECK(s1 == s3);
  CHECK(s1 == s8);

  long double ref = 0.0L;
  for (double x : v) ref += x;
  double mag = 0.0;
  for (double x : v) mag += std::abs(x);
  CHECK(std::abs(s1 - static_cast<double>(ref)) <= 1e-12 * mag);
}

TEST_CASE("deterministic_sum small cases") {
  CHECK(deterministic_sum(std::vector<double>{}) == 0.0);
  CHECK(deterministic_sum(std::vector<double>{1.5}) == 1.5);
  std::vector<double> ones(5000, 1.0);
  CHECK(deterministic_sum(ones) == 5000.0);
}

TEST_CASE("parallel_for visits each index once") {
  std::vector<int> hits(12345, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  });
  for (int h : hits) REQUIRE(h == 1);
}

TEST_CASE("max_of") {
  CHECK(max_of(0, [](std::size_t) { return 5.0; }) == 0.0);
  CHECK(max_of(10000, [](std::size_t i) { return i == 7777 ? 3.0 : 1.0; }) == 3.0);
}
