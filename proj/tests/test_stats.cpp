#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "portcba/stats.hpp"

using namespace portcba;

TEST_CASE("summarize computes mean, sample stddev and t-based half width") {
  const std::vector<double> values = {2, 4, 4, 4, 5, 5, 7, 9};
  const auto s = summarize(values);
  CHECK(s.n_reps == 8);
  CHECK(s.mean == Catch::Approx(5.0));
  CHECK(s.stddev == Catch::Approx(2.138089935).margin(1e-6));
  // t(7, 0.975) = 2.364624...
  CHECK(s.ci_half_width == Catch::Approx(2.3646243 * 2.138089935 / std::sqrt(8.0)).margin(1e-6));
}

TEST_CASE("identical values collapse the interval") {
  const std::vector<double> values(10, 3.5);
  const auto s = summarize(values);
  CHECK(s.stddev == 0.0);
  CHECK(s.ci_half_width == 0.0);
}

TEST_CASE("single value has no spread; empty input is an error") {
  const std::vector<double> one = {42.0};
  const auto s = summarize(one);
  CHECK(s.mean == 42.0);
  CHECK(s.stddev == 0.0);
  CHECK(s.ci_half_width == 0.0);
  CHECK_THROWS_AS(summarize(std::vector<double>{}), ConfigError);
}

TEST_CASE("student t quantiles match reference values") {
  CHECK(student_t_975(2) == Catch::Approx(4.3026527297).margin(1e-8));
  CHECK(student_t_975(4) == Catch::Approx(2.7764451052).margin(1e-8));
  CHECK(student_t_975(9) == Catch::Approx(2.2621571629).margin(1e-8));
  CHECK(student_t_975(17) == Catch::Approx(2.1098155778).margin(1e-8));
}

TEST_CASE("required replications floors at 3 for zero variance") {
  ReplicationSummary pilot{10, 100.0, 0.0, 0.0};
  CHECK(required_replications(pilot, 0.05) == 3);
}

TEST_CASE("required replications iterates the t inequality") {
  // mean 100, sd 10, 5% precision: n=18 is the first n with
  // t(n-1,.975)/sqrt(n) <= 0.5 (t(17)=2.10982, sqrt(18)=4.24264).
  ReplicationSummary pilot{10, 100.0, 10.0, 0.0};
  CHECK(required_replications(pilot, 0.05) == 18);
  // tighter precision needs more
  CHECK(required_replications(pilot, 0.02) > 18);
}

TEST_CASE("required replications rejects degenerate pilots") {
  CHECK_THROWS_AS(required_replications({2, 100.0, 10.0, 0.0}, 0.05), ConfigError);
  CHECK_THROWS_AS(required_replications({10, 0.0, 10.0, 0.0}, 0.05), ConfigError);
  CHECK_THROWS_AS(required_replications({10, 100.0, 10.0, 0.0}, 0.0), ConfigError);
}
