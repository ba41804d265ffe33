#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eventpulse/csv.hpp"
#include "eventpulse/ingest.hpp"
#include "eventpulse/rng.hpp"
#include "eventpulse/serialize.hpp"
#include "eventpulse/zeta.hpp"
#include "oracles.hpp"

using namespace eventpulse;

TEST_CASE("hurwitz zeta matches known constants") {
  const double pi = 3.14159265358979323846;
  CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-12));
  CHECK(hurwitz_zeta(2.0, 0.5) == doctest::Approx(pi * pi / 2.0).epsilon(1e-12));
  CHECK(hurwitz_zeta(4.0, 1.0) == doctest::Approx(std::pow(pi, 4) / 90.0).epsilon(1e-12));
  CHECK(hurwitz_zeta(3.0, 1.0) == doctest::Approx(1.2020569031595943).epsilon(1e-12));
  CHECK(hurwitz_zeta(1.5, 1.0) == doctest::Approx(2.6123753486854883).epsilon(1e-12));
  CHECK(hurwitz_zeta(2.5, 1.0) == doctest::Approx(1.3414872572509171).epsilon(1e-12));
}

TEST_CASE("hurwitz zeta agrees with brute-force summation on a grid") {
  for (double s : {1.4, 1.9, 2.5, 3.3, 4.7, 5.9}) {
    for (double q : {1.0, 2.0, 5.0, 17.0, 96.0, 1500.0}) {
      const double expected = oracles::zeta_bruteforce(s, q);
      CHECK(hurwitz_zeta(s, q) == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}

TEST_CASE("hurwitz zeta rejects out-of-domain arguments") {
  CHECK_THROWS_AS(hurwitz_zeta(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), std::invalid_argument);
}

TEST_CASE("splitmix64 reproduces the reference stream") {
  SplitMix64 rng(0);
  CHECK(rng.next_u64() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next_u64() == 0x06C45D188009454FULL);

  SplitMix64 a(42);
  SplitMix64 b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("splitmix64 uniformity smoke test") {
  SplitMix64 rng(20240901);
  const int n = 100000;
  const int bins = 20;
  std::vector<int> counts(bins, 0);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    ++counts[static_cast<int>(u * bins)];
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));

  const double expected = static_cast<double>(n) / bins;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // chi2 has 19 degrees of freedom; 50 is far in the tail.
  CHECK(chi2 < 50.0);
}

TEST_CASE("exponential draws have the requested mean") {
  SplitMix64 rng(7);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.next_exponential(3.0);
  CHECK(sum / n == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("csv split handles quoting") {
  CHECK(csv::split("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(csv::split("a,,c") == std::vector<std::string>{"a", "", "c"});
  CHECK(csv::split("\"x,y\",z") == std::vector<std::string>{"x,y", "z"});
  CHECK(csv::split("\"he said \"\"hi\"\"\",2") ==
        std::vector<std::string>{"he said \"hi\"", "2"});
  CHECK(csv::split("") == std::vector<std::string>{""});
}

TEST_CASE("csv read_rows skips comments and keeps line numbers") {
  std::istringstream in("# a comment\nh1,h2\n\n# mid comment\n1,2\r\n3,4\n");
  const auto rows = csv::read_rows(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].line == 2);
  CHECK(rows[0].fields == std::vector<std::string>{"h1", "h2"});
  CHECK(rows[1].line == 5);
  CHECK(rows[1].fields == std::vector<std::string>{"1", "2"});
  CHECK(rows[2].line == 6);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 111.19492664455873, 4677.0, 1e-300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("fit records serialize infinities as the string \"inf\"") {
  CityFitRecord rec;
  rec.city_id = "tiny";
  rec.interval_fit = {2.5, 3, 1.18, kInf};
  PowerLawFit pl;
  pl.alpha = 2.2;
  pl.x_min = 2;
  pl.n_tail = 40;
  rec.deaths_power_law = pl;

  const auto j = fit_record_to_json(rec);
  CHECK(j.at("ci_upper").get<std::string>() == "inf");
  CHECK(j.at("deaths_exponential").is_null());

  const auto back = fit_record_from_json(j);
  CHECK(std::isinf(back.interval_fit.ci_upper));
  CHECK(back.interval_fit.mu_hat == 2.5);
  CHECK(back.interval_fit.n == 3);
  REQUIRE(back.deaths_power_law.has_value());
  CHECK(back.deaths_power_law->alpha == 2.2);
  CHECK(back.deaths_power_law->x_min == 2);
  CHECK(!back.deaths_exponential.has_value());
}

TEST_CASE("series CSV round-trips through its metadata comment") {
  City c;
  c.id = "rt";
  c.name = "Round, Trip"; // comma survives the JSON metadata
  c.country = "XY";
  c.lat = 12.5;
  c.lon = -33.25;
  c.population = 123456;
  std::vector<EventRecord> events = {{3, 12.5, -33.25, 2}, {9, 12.49, -33.26, 0}};
  const auto series = build_city_series(c, events, 4677);

  std::istringstream in(series_to_csv(series));
  const auto back = series_from_csv(in, "fallback");
  CHECK(back.city.id == "rt");
  CHECK(back.city.name == "Round, Trip");
  CHECK(back.city.population == 123456);
  CHECK(back.span_days == 4677);
  CHECK(back.attack_count == 2);
  CHECK(back.intervals == std::vector<std::int64_t>{6});
  CHECK(back.events[0].lat == series.events[0].lat);
}
