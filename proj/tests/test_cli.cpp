// End-to-end tests of the eventpulse binary. The binary path comes from the
// EVENTPULSE_BIN environment variable (set by the ctest wiring).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "eventpulse/ingest.hpp"
#include "eventpulse/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eventpulse;

namespace {

std::string binary() {
  const char* bin = std::getenv("EVENTPULSE_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "EVENTPULSE_BIN must point at the CLI binary");
  return bin;
}

int run(const std::string& args) {
  const std::string cmd = binary() + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

int run_capture(const std::string& args, const fs::path& log) {
  const std::string cmd = binary() + " " + args + " >" + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("eventpulse_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

json load_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

const std::string kFixtureGazetteer =
    "id,name,country,lat,lon,population\n"
    "alpha,Alpha,AA,10.0,10.0,100000\n"
    "beta,Beta,BB,-20.0,60.0,250000\n"
    "gamma,Gamma,CC,45.0,-100.0,50000\n";

std::string fixture_events() {
  // ten events scattered near the three fixture cities
  std::ostringstream ev;
  ev << "day,lat,lon,deaths\n";
  ev << "0,10.1,10.0,1\n";
  ev << "2,9.9,10.2,0\n";
  ev << "3,10.0,9.8,4\n";
  ev << "5,-20.1,60.1,2\n";
  ev << "8,-19.8,59.9,1\n";
  ev << "9,-20.0,60.0,0\n";
  ev << "11,45.2,-100.1,3\n";
  ev << "12,44.9,-99.8,1\n";
  ev << "15,45.0,-100.0,2\n";
  ev << "20,10.0,10.1,1\n";
  return ev.str();
}

} // namespace

TEST_CASE("ingest writes one series per hit city and a faithful cluster report") {
  TempDir tmp;
  write(tmp.path / "events.csv", fixture_events());
  write(tmp.path / "cities.csv", kFixtureGazetteer);

  const int rc = run("ingest --events " + (tmp / "events.csv") + " --gazetteer " +
                     (tmp / "cities.csv") + " --out " + (tmp / "out"));
  CHECK(rc == 0);

  int series_files = 0;
  for (const auto& e : fs::directory_iterator(tmp.path / "out" / "series")) {
    if (e.path().extension() == ".csv") ++series_files;
  }
  CHECK(series_files == 3);

  // assignments must equal a brute-force nearest scan over the fixture
  const auto report = load_json(tmp.path / "out" / "cluster_report.json");
  std::istringstream ev_in(fixture_events());
  const auto events = parse_events(ev_in);
  std::istringstream gaz_in(kFixtureGazetteer);
  const auto cities = parse_gazetteer(gaz_in);
  for (std::size_t i = 0; i < events.size(); ++i) {
    std::size_t best = 0;
    double best_d = great_circle_km(events[i].lat, events[i].lon, cities[0].lat, cities[0].lon);
    for (std::size_t j = 1; j < cities.size(); ++j) {
      const double d = great_circle_km(events[i].lat, events[i].lon, cities[j].lat, cities[j].lon);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    CHECK(report.at("assignments").at(std::to_string(i)).get<std::string>() ==
          cities[best].id);
  }
  CHECK(report.at("tool_version").is_string());
  CHECK(report.at("config_echo").is_object());

  // round-trip: the series file reloads into the same city
  std::ifstream series_in(tmp.path / "out" / "series" / "alpha.csv");
  const auto series = series_from_csv(series_in, "fallback");
  CHECK(series.city.id == "alpha");
  CHECK(series.city.population == 100000);
  CHECK(series.attack_count == 4);
  CHECK(series.span_days == 20);
}

TEST_CASE("ingest error paths use exit code 2") {
  TempDir tmp;
  write(tmp.path / "events.csv", fixture_events());
  CHECK(run("ingest --events " + (tmp / "events.csv") + " --gazetteer " +
            (tmp / "missing.csv") + " --out " + (tmp / "out")) == 2);

  write(tmp.path / "empty.csv", "day,lat,lon,deaths\n");
  const fs::path log = tmp.path / "log.txt";
  const int rc = run_capture("ingest --events " + (tmp / "empty.csv") + " --gazetteer " +
                                 (tmp / "cities.csv") + " --out " + (tmp / "out"),
                             log);
  CHECK(rc == 2);
  std::ifstream log_in(log);
  std::stringstream ss;
  ss << log_in.rdbuf();
  CHECK(ss.str().find("no events") != std::string::npos);
}

TEST_CASE("full pipeline on a synthetic city: fit, predict, spectrogram") {
  TempDir tmp;
  REQUIRE(run("synth --out " + (tmp / "events.csv") + " --out-gazetteer " +
              (tmp / "cities.csv") + " --cities 2 --seed 7 --span 4677 --mu 3") == 0);
  REQUIRE(run("ingest --events " + (tmp / "events.csv") + " --gazetteer " +
              (tmp / "cities.csv") + " --out " + (tmp / "out")) == 0);

  SUBCASE("fit then predict") {
    REQUIRE(run("fit --series-dir " + (tmp / "out/series") + " --out " +
                (tmp / "fits.json")) == 0);
    const auto fits = load_json(tmp.path / "fits.json");
    REQUIRE(fits.at("cities").size() == 2);
    for (const auto& c : fits.at("cities")) {
      // documented schema: every record carries these keys
      for (const char* key :
           {"city_id", "n", "mu_hat", "ci_lower", "ci_upper", "alpha", "x_min", "n_tail"}) {
        CHECK(c.contains(key));
      }
      CHECK(c.at("mu_hat").get<double>() > 0.0);
    }

    REQUIRE(run("predict --fits " + (tmp / "fits.json") + " --series-dir " +
                (tmp / "out/series") + " --out " + (tmp / "pred_ml.json")) == 0);
    const auto pred = load_json(tmp.path / "pred_ml.json");
    for (const auto& c : pred.at("cities")) {
      const double mu = c.at("mu").get<double>();
      CHECK(c.at("quantiles").at("p50").get<double>() ==
            doctest::Approx(mu * std::log(2.0)).epsilon(1e-12));
      CHECK(c.at("entropy_nats").get<double>() ==
            doctest::Approx(1.0 + std::log(mu)).epsilon(1e-12));
      CHECK(!c.at("kl_nats").is_null());
    }

    // CNML with a couple thousand observations sits within 1e-3 of ML
    REQUIRE(run("predict --fits " + (tmp / "fits.json") + " --mode cnml --out " +
                (tmp / "pred_cnml.json")) == 0);
    const auto cnml = load_json(tmp.path / "pred_cnml.json");
    for (std::size_t i = 0; i < pred.at("cities").size(); ++i) {
      const double ml_p50 = pred.at("cities")[i].at("quantiles").at("p50").get<double>();
      const double mu = pred.at("cities")[i].at("mu").get<double>();
      const double cn_p50 = cnml.at("cities")[i].at("quantiles").at("p50").get<double>();
      CHECK(std::abs(cn_p50 - ml_p50) / mu < 1e-3);
    }
  }

  SUBCASE("fit with an impossible threshold exits 3") {
    CHECK(run("fit --series-dir " + (tmp / "out/series") + " --out " +
              (tmp / "fits.json") + " --min-events 1000000") == 3);
  }

  SUBCASE("spectrogram frame geometry follows the flags") {
    const auto series_path = fs::path(tmp.path / "out" / "series" / "c000.csv");
    REQUIRE(fs::exists(series_path));
    REQUIRE(run("spectrogram --series " + series_path.string() + " --out-dir " +
                (tmp / "spectra")) == 0);

    std::ifstream csv_in(tmp.path / "spectra" / "c000_spectrogram.csv");
    std::string line;
    int rows = 0;
    int header_cols = 0;
    while (std::getline(csv_in, line)) {
      if (rows == 0) {
        header_cols = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
      }
      ++rows;
    }
    // span 4677 -> 4678 daily bins -> floor((4678-128)/120)+1 = 38 frames
    CHECK(rows - 1 == 38);
    CHECK(header_cols == 66); // day column + 65 one-sided bins

    const auto bands = load_json(tmp.path / "spectra" / "c000_bands.json");
    CHECK(bands.at("trends").size() == 2);
    CHECK(bands.at("n_frames").get<int>() == 38);

    // a shorter window changes the frame count: floor((4678-64)/120)+1 = 39
    REQUIRE(run("spectrogram --series " + series_path.string() + " --out-dir " +
                (tmp / "spectra64") + " --window 64 --fft 64") == 0);
    const auto bands64 = load_json(tmp.path / "spectra64" / "c000_bands.json");
    CHECK(bands64.at("n_frames").get<int>() == 39);

    // overlap reading of the hop: hop = 128 - 120 = 8
    REQUIRE(run("spectrogram --series " + series_path.string() + " --out-dir " +
                (tmp / "spectra_ov") + " --overlap 120") == 0);
    const auto bands_ov = load_json(tmp.path / "spectra_ov" / "c000_bands.json");
    CHECK(bands_ov.at("n_frames").get<int>() == (4678 - 128) / 8 + 1);
  }
}

TEST_CASE("predict without fits exits 2") {
  TempDir tmp;
  CHECK(run("predict --fits " + (tmp / "nope.json") + " --out " + (tmp / "p.json")) == 2);
}

TEST_CASE("spectrogram on a too-short series exits 3 naming the requirement") {
  TempDir tmp;
  std::ostringstream ev;
  ev << "day,lat,lon,deaths\n";
  for (int d = 0; d < 40; ++d) ev << d << ",1,1,0\n";
  write(tmp.path / "short.csv", ev.str());

  const fs::path log = tmp.path / "log.txt";
  const int rc = run_capture(
      "spectrogram --series " + (tmp / "short.csv") + " --out-dir " + (tmp / "s"), log);
  CHECK(rc == 3);
  std::ifstream log_in(log);
  std::stringstream ss;
  ss << log_in.rdbuf();
  CHECK(ss.str().find("128") != std::string::npos);
}

TEST_CASE("report aggregates whatever stages ran") {
  TempDir tmp;
  REQUIRE(run("synth --out " + (tmp / "events.csv") + " --out-gazetteer " +
              (tmp / "cities.csv") + " --cities 3 --seed 9 --span 2000 --mu 4") == 0);
  REQUIRE(run("ingest --events " + (tmp / "events.csv") + " --gazetteer " +
              (tmp / "cities.csv") + " --out " + (tmp / "out")) == 0);
  REQUIRE(run("fit --series-dir " + (tmp / "out/series") + " --out " +
              (tmp / "out/fits.json") + " --min-events 50") == 0);
  REQUIRE(run("report --dir " + (tmp / "out")) == 0);

  std::ifstream md_in(tmp.path / "out" / "report.md");
  std::stringstream md;
  md << md_in.rdbuf();
  CHECK(md.str().find("## Fits") != std::string::npos);
  CHECK(md.str().find("## Clustering") != std::string::npos);

  CHECK(run("report --dir " + (tmp / "nothing_here")) == 2);
}

TEST_CASE("unknown flags exit with the input-error code") {
  CHECK(run("fit --no-such-flag") == 2);
  CHECK(run("") == 2);
}
