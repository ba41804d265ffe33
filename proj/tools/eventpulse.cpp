// eventpulse command-line front-end: synth -> ingest -> fit -> predict ->
// spectrogram -> report, with file handoffs between stages.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "eventpulse/distfit.hpp"
#include "eventpulse/errors.hpp"
#include "eventpulse/ingest.hpp"
#include "eventpulse/predict.hpp"
#include "eventpulse/rng.hpp"
#include "eventpulse/serialize.hpp"
#include "eventpulse/spectral.hpp"
#include "eventpulse/synth.hpp"
#include "eventpulse/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eventpulse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitInsufficientData = 3;

json with_provenance(json config_echo) {
  json j;
  j["tool_version"] = kToolVersion;
  j["config_echo"] = std::move(config_echo);
  return j;
}

std::string sanitize_filename(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot read " + path.string());
  return in;
}

std::vector<fs::path> sorted_csv_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw input_error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<CitySeries> load_series_dir(const fs::path& dir) {
  std::vector<CitySeries> series;
  for (const auto& path : sorted_csv_files(dir)) {
    auto in = open_input(path);
    series.push_back(series_from_csv(in, path.stem().string()));
  }
  if (series.empty()) throw input_error("no series files in " + dir.string());
  return series;
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

struct IngestOptions {
  std::string events_path;
  std::string gazetteer_path;
  std::string out_dir = "out";
};

int cmd_ingest(const IngestOptions& opt) {
  auto events_in = open_input(opt.events_path);
  const auto events = parse_events(events_in);
  if (events.empty()) throw input_error("no events in " + opt.events_path);

  auto gaz_in = open_input(opt.gazetteer_path);
  const auto cities = parse_gazetteer(gaz_in);

  const auto [series, report] = cluster_to_cities(events, cities);

  const fs::path out_dir(opt.out_dir);
  const fs::path series_dir = out_dir / "series";
  std::map<std::string, int> name_uses;
  for (const auto& s : series) {
    std::string stem = sanitize_filename(s.city.id);
    const int n = ++name_uses[stem];
    if (n > 1) stem += "_" + std::to_string(n);
    write_file_atomic(series_dir / (stem + ".csv"), series_to_csv(s));
  }

  json j = with_provenance({{"events", opt.events_path},
                            {"gazetteer", opt.gazetteer_path},
                            {"out", opt.out_dir}});
  j.update(cluster_report_to_json(report));
  j["n_events"] = events.size();
  j["n_cities_hit"] = series.size();
  write_file_atomic(out_dir / "cluster_report.json", j.dump(2) + "\n");

  std::cout << "clustered " << events.size() << " events to " << series.size()
            << " cities; mean distance " << format_double(report.mean_distance_km)
            << " km (max " << format_double(report.max_distance_km) << " km)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitOptions {
  std::string series_dir;
  std::string out_path = "fits.json";
  std::size_t min_events = kDefaultMinEvents;
};

int cmd_fit(const FitOptions& opt) {
  const auto all_series = load_series_dir(opt.series_dir);
  const auto kept = filter_sufficient(all_series, opt.min_events);

  json skipped = json::array();
  for (const auto& s : all_series) {
    if (s.attack_count < opt.min_events) {
      skipped.push_back({{"city_id", s.city.id},
                         {"n_events", s.attack_count},
                         {"reason", "below min_events"}});
    }
  }
  if (kept.empty()) {
    throw insufficient_data("no city passes the min-events filter (" +
                            std::to_string(opt.min_events) + ")");
  }

  std::vector<std::optional<CityFitRecord>> records(kept.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(kept.size()); ++i) {
    const auto& s = kept[i];
    try {
      CityFitRecord rec;
      rec.city_id = s.city.id;
      const std::vector<double> intervals(s.intervals.begin(), s.intervals.end());
      rec.interval_fit = fit_exponential(intervals);
      try {
        rec.deaths_power_law = fit_power_law(s.deaths_per_attack);
      } catch (const insufficient_data&) {
        // deaths too sparse or degenerate for a tail fit; leave null
      }
      try {
        const std::vector<double> deaths(s.deaths_per_attack.begin(),
                                         s.deaths_per_attack.end());
        rec.deaths_exponential = fit_exponential(deaths);
      } catch (const insufficient_data&) {
      }
      records[i] = std::move(rec);
    } catch (const insufficient_data&) {
      records[i] = std::nullopt; // degenerate intervals; reported below
    }
  }

  json cities_json = json::array();
  std::vector<CitySeries> fitted_series;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (records[i]) {
      cities_json.push_back(fit_record_to_json(*records[i]));
      fitted_series.push_back(kept[i]);
    } else {
      skipped.push_back({{"city_id", kept[i].city.id},
                         {"n_events", kept[i].attack_count},
                         {"reason", "degenerate intervals"}});
    }
  }
  if (cities_json.empty()) {
    throw insufficient_data("no city has fittable interval data");
  }

  json regressions;
  try {
    regressions["interval_attack"] = regression_to_json(interval_attack_regression(fitted_series));
  } catch (const insufficient_data&) {
    regressions["interval_attack"] = nullptr;
  }
  try {
    regressions["population"] = regression_to_json(population_correlation(fitted_series));
  } catch (const insufficient_data&) {
    regressions["population"] = nullptr;
  }

  json j = with_provenance({{"series_dir", opt.series_dir},
                            {"out", opt.out_path},
                            {"min_events", opt.min_events}});
  j["cities"] = std::move(cities_json);
  j["skipped"] = std::move(skipped);
  j["regressions"] = std::move(regressions);
  write_file_atomic(opt.out_path, j.dump(2) + "\n");

  std::cout << "fitted " << fitted_series.size() << " cities ("
            << all_series.size() - fitted_series.size() << " skipped) -> "
            << opt.out_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

struct PredictOptions {
  std::string fits_path;
  std::string out_path = "predictions.json";
  std::string series_dir; // optional; enables the empirical K-L column
  std::string mode = "ml";
  std::vector<double> quantiles = {0.1, 0.5, 0.9};
  std::size_t bins = 32;
};

int cmd_predict(const PredictOptions& opt) {
  auto fits_in = open_input(opt.fits_path);
  json fits_json;
  try {
    fits_in >> fits_json;
  } catch (const json::exception& e) {
    throw input_error("bad fits file " + opt.fits_path + ": " + e.what());
  }
  if (!fits_json.contains("cities")) {
    throw input_error("fits file has no 'cities' array: " + opt.fits_path);
  }

  const PredictiveMode mode =
      opt.mode == "cnml" ? PredictiveMode::CNML : PredictiveMode::ML;

  std::map<std::string, CitySeries> by_id;
  if (!opt.series_dir.empty()) {
    for (auto& s : load_series_dir(opt.series_dir)) {
      by_id.emplace(s.city.id, std::move(s));
    }
  }

  json cities_json = json::array();
  for (const auto& cj : fits_json.at("cities")) {
    const CityFitRecord rec = fit_record_from_json(cj);
    const PredictiveDensity density{mode, rec.interval_fit.mu_hat, rec.interval_fit.n};

    json q_json;
    for (double q : opt.quantiles) {
      const int pct = static_cast<int>(std::lround(q * 100.0));
      q_json["p" + std::to_string(pct)] = quantile_next(q, density);
    }

    const double entropy = exponential_entropy(rec.interval_fit.mu_hat);
    json city_out = {{"city_id", rec.city_id},
                     {"mode", opt.mode == "cnml" ? "cnml" : "ml"},
                     {"mu", rec.interval_fit.mu_hat},
                     {"n", rec.interval_fit.n},
                     {"quantiles", std::move(q_json)},
                     {"entropy_nats", entropy},
                     {"entropy_bits", nats_to_bits(entropy)}};

    city_out["kl_nats"] = nullptr;
    city_out["kl_bits"] = nullptr;
    const auto it = by_id.find(rec.city_id);
    if (it != by_id.end()) {
      try {
        const std::vector<double> intervals(it->second.intervals.begin(),
                                            it->second.intervals.end());
        const double kl = kl_empirical(intervals, rec.interval_fit.mu_hat, opt.bins);
        city_out["kl_nats"] = kl;
        city_out["kl_bits"] = nats_to_bits(kl);
      } catch (const insufficient_data&) {
      }
    }
    cities_json.push_back(std::move(city_out));
  }

  json j = with_provenance({{"fits", opt.fits_path},
                            {"series_dir", opt.series_dir},
                            {"mode", opt.mode},
                            {"quantiles", opt.quantiles},
                            {"bins", opt.bins}});
  j["cities"] = std::move(cities_json);
  write_file_atomic(opt.out_path, j.dump(2) + "\n");

  std::cout << "predictions for " << j["cities"].size() << " cities -> " << opt.out_path
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// spectrogram
// ---------------------------------------------------------------------------

struct SpectrogramOptions {
  std::string series_path;
  std::string series_dir;
  std::string out_dir = "spectra";
  std::size_t window = 128;
  std::size_t hop = 120;
  std::size_t overlap = 0; // when set, hop = window - overlap
  bool overlap_set = false;
  std::size_t fft_points = 128;
  std::string weighting = "attacks";
  std::vector<double> band_low = {kLowBandLo, kLowBandHi};
  std::vector<double> band_high = {kHighBandLo, kHighBandHi};
  bool raw = false;
  bool svg = false;
};

std::string spectrogram_svg(const Spectrogram& spec) {
  const std::size_t frames = spec.magnitudes_sq.size();
  const std::size_t bins = spec.freqs.size();
  const int cell_w = 8;
  const int cell_h = 4;
  double max_mag = 0.0;
  for (const auto& frame : spec.magnitudes_sq) {
    for (double v : frame) max_mag = std::max(max_mag, v);
  }
  const double floor_db = -60.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << frames * cell_w
      << "\" height=\"" << bins * cell_h << "\">\n";
  for (std::size_t m = 0; m < frames; ++m) {
    for (std::size_t k = 0; k < bins; ++k) {
      double level = 0.0;
      if (max_mag > 0.0 && spec.magnitudes_sq[m][k] > 0.0) {
        const double db = 10.0 * std::log10(spec.magnitudes_sq[m][k] / max_mag);
        level = std::clamp(1.0 - db / floor_db, 0.0, 1.0);
      }
      const int r = static_cast<int>(255.0 * level);
      const int g = static_cast<int>(64.0 * level);
      const int b = static_cast<int>(255.0 * (1.0 - level));
      // frequency axis points up: bin 0 at the bottom
      svg << "<rect x=\"" << m * cell_w << "\" y=\"" << (bins - 1 - k) * cell_h
          << "\" width=\"" << cell_w << "\" height=\"" << cell_h << "\" fill=\"rgb(" << r
          << "," << g << "," << b << ")\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

int cmd_spectrogram(const SpectrogramOptions& opt) {
  if (opt.series_path.empty() == opt.series_dir.empty()) {
    throw input_error("pass exactly one of --series or --series-dir");
  }
  if (opt.band_low.size() != 2 || opt.band_high.size() != 2) {
    throw input_error("band options need two values: lo hi");
  }
  std::size_t hop = opt.hop;
  if (opt.overlap_set) {
    if (opt.overlap >= opt.window) throw input_error("overlap must be < window");
    hop = opt.window - opt.overlap;
  }

  std::vector<CitySeries> series;
  if (!opt.series_path.empty()) {
    auto in = open_input(opt.series_path);
    series.push_back(series_from_csv(in, fs::path(opt.series_path).stem().string()));
  } else {
    series = load_series_dir(opt.series_dir);
  }

  const Weighting weighting =
      opt.weighting == "deaths" ? Weighting::Deaths : Weighting::Attacks;
  const fs::path out_dir(opt.out_dir);
  const json config = {{"window", opt.window},
                       {"hop", hop},
                       {"fft", opt.fft_points},
                       {"weighting", opt.weighting},
                       {"band_low", opt.band_low},
                       {"band_high", opt.band_high},
                       {"raw", opt.raw}};

  std::size_t processed = 0;
  std::string last_error;
  for (const auto& s : series) {
    DailySeries daily = bin_daily(s, weighting);
    if (!opt.raw) daily = demean(std::move(daily));
    Spectrogram spec;
    try {
      spec = stft(daily, opt.window, hop, opt.fft_points);
    } catch (const insufficient_data& e) {
      last_error = e.what();
      if (series.size() > 1) {
        std::cerr << "skipping " << s.city.id << ": " << e.what() << "\n";
        continue;
      }
      throw;
    }
    const std::string stem = sanitize_filename(s.city.id);
    write_file_atomic(out_dir / (stem + "_spectrogram.csv"), spectrogram_to_csv(spec));

    json bands = with_provenance(config);
    bands["city_id"] = s.city.id;
    bands["n_frames"] = spec.magnitudes_sq.size();
    json trends = json::array();
    trends.push_back(band_trend_to_json(
        band_growth(spec, opt.band_low[0], opt.band_low[1], Band::Low)));
    trends.push_back(band_trend_to_json(
        band_growth(spec, opt.band_high[0], opt.band_high[1], Band::High)));
    bands["trends"] = std::move(trends);
    write_file_atomic(out_dir / (stem + "_bands.json"), bands.dump(2) + "\n");

    if (opt.svg) {
      write_file_atomic(out_dir / (stem + "_spectrogram.svg"), spectrogram_svg(spec));
    }
    ++processed;
  }
  if (processed == 0) throw insufficient_data(last_error.empty() ? "no series" : last_error);

  std::cout << "wrote spectrograms for " << processed << " series -> " << opt.out_dir
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthOptions {
  std::string out_events = "events.csv";
  std::string out_gazetteer;
  std::size_t n_cities = 1;
  std::uint64_t seed = 1;
  std::int64_t span_days = 4677;
  double mu = 3.0;
  double count_min = 0.0; // when both set, per-city target counts are
  double count_max = 0.0; // log-spaced over [count_min, count_max]
  double alpha = 2.5;
  std::int64_t x_min = 1;
  double rate_ramp = 0.0;
  double scatter_km = 0.0;
};

int cmd_synth(const SynthOptions& opt) {
  if (opt.n_cities < 1) throw input_error("need at least one city");
  if ((opt.count_min > 0.0) != (opt.count_max > 0.0)) {
    throw input_error("pass both --count-min and --count-max or neither");
  }

  // Deterministic synthetic gazetteer: cities on a latitude ladder with a
  // golden-angle longitude walk, populations independent of everything else.
  std::vector<City> cities;
  SplitMix64 pop_rng(opt.seed ^ 0x9E3779B97F4A7C15ULL);
  for (std::size_t i = 0; i < opt.n_cities; ++i) {
    City c;
    std::string num = std::to_string(i);
    c.id = "c" + std::string(num.size() < 3 ? 3 - num.size() : 0, '0') + num;
    c.name = "Synth " + num;
    c.country = "ZZ";
    c.lat = -60.0 + 120.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(opt.n_cities);
    c.lon = std::fmod(137.50776405003785 * static_cast<double>(i), 360.0) - 180.0;
    c.population = 10000 + static_cast<std::int64_t>(pop_rng.next_u64() % 4990000);
    cities.push_back(std::move(c));
  }

  std::vector<GeneratorSpec> specs;
  for (std::size_t i = 0; i < opt.n_cities; ++i) {
    GeneratorSpec spec;
    spec.seed = opt.seed;
    spec.alpha = opt.alpha;
    spec.x_min = opt.x_min;
    spec.span_days = opt.span_days;
    spec.rate_ramp = opt.rate_ramp;
    if (opt.count_min > 0.0) {
      const double frac = opt.n_cities == 1
                              ? 0.0
                              : static_cast<double>(i) / static_cast<double>(opt.n_cities - 1);
      const double target = opt.count_min * std::pow(opt.count_max / opt.count_min, frac);
      spec.mu = static_cast<double>(opt.span_days) / target;
    } else {
      spec.mu = opt.mu;
    }
    specs.push_back(spec);
  }

  const auto fleet = gen_fleet(specs, cities);

  std::vector<EventRecord> events;
  SplitMix64 scatter_rng(opt.seed ^ 0x5CA77E12D4B8F00DULL);
  for (const auto& s : fleet) {
    for (EventRecord ev : s.events) {
      if (opt.scatter_km > 0.0) {
        const double bearing = scatter_rng.next_double() * 2.0 * 3.14159265358979323846;
        const double dist = scatter_rng.next_double() * opt.scatter_km;
        const double dlat = dist / 111.19492664455873 * std::cos(bearing);
        double dlon = 0.0;
        const double coslat = std::cos(ev.lat * 3.14159265358979323846 / 180.0);
        if (coslat > 1e-6) {
          dlon = dist / (111.19492664455873 * coslat) * std::sin(bearing);
        }
        ev.lat = std::clamp(ev.lat + dlat, -90.0, 90.0);
        ev.lon = ev.lon + dlon;
        if (ev.lon > 180.0) ev.lon -= 360.0;
        if (ev.lon < -180.0) ev.lon += 360.0;
      }
      events.push_back(ev);
    }
  }
  std::sort(events.begin(), events.end(), [](const EventRecord& a, const EventRecord& b) {
    return std::tie(a.day, a.lat, a.lon, a.deaths) < std::tie(b.day, b.lat, b.lon, b.deaths);
  });

  const json config = {{"cities", opt.n_cities}, {"seed", opt.seed},
                       {"span", opt.span_days},  {"mu", opt.mu},
                       {"count_min", opt.count_min}, {"count_max", opt.count_max},
                       {"alpha", opt.alpha},     {"x_min", opt.x_min},
                       {"rate_ramp", opt.rate_ramp}, {"scatter_km", opt.scatter_km}};

  std::string out = "# generated by " + std::string(kToolName) + " " + kToolVersion +
                    " synth\n# rng=" + kRngAlgorithm + " seed=" + std::to_string(opt.seed) +
                    "\n# config " + config.dump() + "\n";
  out += "day,lat,lon,deaths\n";
  for (const auto& ev : events) {
    out += std::to_string(ev.day) + "," + format_double(ev.lat) + "," +
           format_double(ev.lon) + "," + std::to_string(ev.deaths) + "\n";
  }
  write_file_atomic(opt.out_events, out);

  if (!opt.out_gazetteer.empty()) {
    std::string gaz = "# generated by " + std::string(kToolName) + " " + kToolVersion +
                      " synth\nid,name,country,lat,lon,population\n";
    for (const auto& c : cities) {
      gaz += c.id + "," + c.name + "," + c.country + "," + format_double(c.lat) + "," +
             format_double(c.lon) + "," + std::to_string(c.population) + "\n";
    }
    write_file_atomic(opt.out_gazetteer, gaz);
  }

  std::cout << "generated " << events.size() << " events across " << opt.n_cities
            << " cities -> " << opt.out_events << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportOptions {
  std::string dir = "out";
  std::string out_path;
};

std::optional<json> try_load_json(const fs::path& path) {
  if (!fs::is_regular_file(path)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  json j;
  try {
    in >> j;
  } catch (const json::exception&) {
    return std::nullopt;
  }
  return j;
}

std::string fmt_num(const json& j) {
  if (j.is_null()) return "-";
  if (j.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", j.get<double>());
    return buf;
  }
  return j.dump();
}

int cmd_report(const ReportOptions& opt) {
  const fs::path dir(opt.dir);
  const fs::path out_path =
      opt.out_path.empty() ? dir / "report.md" : fs::path(opt.out_path);

  const auto cluster = try_load_json(dir / "cluster_report.json");
  const auto fits = try_load_json(dir / "fits.json");
  const auto predictions = try_load_json(dir / "predictions.json");

  std::vector<json> band_files;
  if (fs::is_directory(dir / "spectra")) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir / "spectra")) {
      if (entry.path().filename().string().ends_with("_bands.json")) {
        paths.push_back(entry.path());
      }
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) {
      if (auto j = try_load_json(p)) band_files.push_back(std::move(*j));
    }
  }

  if (!cluster && !fits && !predictions && band_files.empty()) {
    throw input_error("no analysis outputs found under " + dir.string());
  }

  std::ostringstream md;
  md << "# eventpulse report\n\ntool version " << kToolVersion << "\n";

  if (cluster) {
    md << "\n## Clustering\n\n";
    md << "- events: " << fmt_num(cluster->value("n_events", json())) << "\n";
    md << "- cities hit: " << fmt_num(cluster->value("n_cities_hit", json())) << "\n";
    md << "- mean assignment distance: " << fmt_num(cluster->at("mean_distance_km"))
       << " km\n";
    md << "- max assignment distance: " << fmt_num(cluster->at("max_distance_km"))
       << " km\n";
  }

  if (fits) {
    md << "\n## Fits\n\n";
    md << "| city | n | mu_hat (days) | 95% CI | alpha | x_min |\n";
    md << "|------|---|---------------|--------|-------|-------|\n";
    for (const auto& c : fits->at("cities")) {
      md << "| " << c.at("city_id").get<std::string>() << " | " << fmt_num(c.at("n"))
         << " | " << fmt_num(c.at("mu_hat")) << " | [" << fmt_num(c.at("ci_lower")) << ", "
         << fmt_num(c.at("ci_upper")) << "] | " << fmt_num(c.at("alpha")) << " | "
         << fmt_num(c.at("x_min")) << " |\n";
    }
    const auto& reg = fits->at("regressions");
    md << "\n### Cross-city regressions\n\n";
    if (!reg.at("interval_attack").is_null()) {
      const auto& r = reg.at("interval_attack");
      md << "- interval parameter vs span/attacks: slope " << fmt_num(r.at("slope"))
         << ", intercept " << fmt_num(r.at("intercept")) << ", adjusted R2 "
         << fmt_num(r.at("adj_r2")) << " over " << fmt_num(r.at("k")) << " cities\n";
    }
    if (!reg.at("population").is_null()) {
      const auto& r = reg.at("population");
      md << "- attacks vs population: adjusted R2 " << fmt_num(r.at("adj_r2"))
         << " (near zero means city size does not explain attack counts)\n";
    }
    if (!fits->at("skipped").empty()) {
      md << "\nskipped " << fits->at("skipped").size() << " cities below the data threshold\n";
    }
  }

  if (predictions) {
    md << "\n## Next-event predictions\n\n";
    md << "| city | mode | p10 | p50 | p90 | entropy (nats / bits) | K-L loss (nats / bits) |\n";
    md << "|------|------|-----|-----|-----|----------------------|------------------------|\n";
    for (const auto& c : predictions->at("cities")) {
      const auto& q = c.at("quantiles");
      md << "| " << c.at("city_id").get<std::string>() << " | "
         << c.at("mode").get<std::string>() << " | " << fmt_num(q.value("p10", json()))
         << " | " << fmt_num(q.value("p50", json())) << " | " << fmt_num(q.value("p90", json()))
         << " | " << fmt_num(c.at("entropy_nats")) << " / " << fmt_num(c.at("entropy_bits"))
         << " | " << fmt_num(c.at("kl_nats")) << " / " << fmt_num(c.at("kl_bits")) << " |\n";
    }
  }

  if (!band_files.empty()) {
    md << "\n## Spectral band trends\n\n";
    md << "| city | band | f range (cycles/day) | G (per year) | stderr |\n";
    md << "|------|------|----------------------|--------------|--------|\n";
    for (const auto& b : band_files) {
      for (const auto& t : b.at("trends")) {
        md << "| " << b.at("city_id").get<std::string>() << " | "
           << t.at("band").get<std::string>() << " | [" << fmt_num(t.at("f_lo")) << ", "
           << fmt_num(t.at("f_hi")) << "] | " << fmt_num(t.at("G")) << " | "
           << fmt_num(t.at("stderr")) << " |\n";
      }
    }
  }

  write_file_atomic(out_path, md.str());
  std::cout << "report -> " << out_path.string() << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"statistical analysis of geo-tagged incident streams"};
  app.require_subcommand(1);
  app.fallthrough(true);

  int jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (overrides EVENTPULSE_JOBS)");

  IngestOptions ingest_opt;
  auto* ingest = app.add_subcommand("ingest", "cluster events to cities, write series files");
  ingest->add_option("--events", ingest_opt.events_path, "events CSV")->required();
  ingest->add_option("--gazetteer", ingest_opt.gazetteer_path, "gazetteer CSV")->required();
  ingest->add_option("--out", ingest_opt.out_dir, "output directory");

  FitOptions fit_opt;
  auto* fit = app.add_subcommand("fit", "fit interval and death-toll distributions");
  fit->add_option("--series-dir", fit_opt.series_dir, "directory of series CSVs")->required();
  fit->add_option("--out", fit_opt.out_path, "fits JSON path");
  fit->add_option("--min-events", fit_opt.min_events, "sufficiency threshold (default 97)");

  PredictOptions predict_opt;
  auto* predict = app.add_subcommand("predict", "next-event quantiles, entropy, K-L loss");
  predict->add_option("--fits", predict_opt.fits_path, "fits JSON from `fit`")->required();
  predict->add_option("--out", predict_opt.out_path, "predictions JSON path");
  predict->add_option("--series-dir", predict_opt.series_dir,
                      "series dir (enables empirical K-L)");
  predict->add_option("--mode", predict_opt.mode, "ml or cnml")
      ->check(CLI::IsMember({"ml", "cnml"}));
  predict->add_option("--quantiles", predict_opt.quantiles, "quantiles in (0,1)");
  predict->add_option("--bins", predict_opt.bins, "histogram bins for empirical K-L");

  SpectrogramOptions spec_opt;
  auto* spectro = app.add_subcommand("spectrogram", "STFT spectrogram and band trends");
  spectro->add_option("--series", spec_opt.series_path, "one series CSV");
  spectro->add_option("--series-dir", spec_opt.series_dir, "directory of series CSVs");
  spectro->add_option("--out-dir", spec_opt.out_dir, "output directory");
  spectro->add_option("--window", spec_opt.window, "window size in days (default 128)");
  spectro->add_option("--hop", spec_opt.hop, "hop in days (default 120)");
  auto* overlap_flag = spectro->add_option(
      "--overlap", spec_opt.overlap,
      "window overlap in days; alternative reading of the hop (hop = window - overlap)");
  spectro->add_option("--fft", spec_opt.fft_points, "FFT points (default 128)");
  spectro->add_option("--weighting", spec_opt.weighting, "attacks or deaths")
      ->check(CLI::IsMember({"attacks", "deaths"}));
  spectro->add_option("--band-low", spec_opt.band_low, "low band edges, cycles/day")
      ->expected(2);
  spectro->add_option("--band-high", spec_opt.band_high, "high band edges, cycles/day")
      ->expected(2);
  spectro->add_flag("--raw", spec_opt.raw, "keep the DC component (no mean removal)");
  spectro->add_flag("--svg", spec_opt.svg, "also write an SVG heatmap");

  SynthOptions synth_opt;
  auto* synth = app.add_subcommand("synth", "generate a seeded synthetic event stream");
  synth->add_option("--out", synth_opt.out_events, "events CSV to write");
  synth->add_option("--out-gazetteer", synth_opt.out_gazetteer, "gazetteer CSV to write");
  synth->add_option("--cities", synth_opt.n_cities, "number of cities");
  synth->add_option("--seed", synth_opt.seed, "base RNG seed");
  synth->add_option("--span", synth_opt.span_days, "observation window, days");
  synth->add_option("--mu", synth_opt.mu, "mean inter-event interval, days");
  synth->add_option("--count-min", synth_opt.count_min,
                    "fleet mode: smallest target attack count");
  synth->add_option("--count-max", synth_opt.count_max,
                    "fleet mode: largest target attack count");
  synth->add_option("--alpha", synth_opt.alpha, "death-toll power-law exponent");
  synth->add_option("--xmin", synth_opt.x_min, "death-toll tail cutoff");
  synth->add_option("--rate-ramp", synth_opt.rate_ramp,
                    "fractional rate increase across the span");
  synth->add_option("--scatter-km", synth_opt.scatter_km,
                    "jitter events around the city center, km");

  ReportOptions report_opt;
  auto* report = app.add_subcommand("report", "aggregate JSON outputs into Markdown");
  report->add_option("--dir", report_opt.dir, "run directory");
  report->add_option("--out", report_opt.out_path, "report path (default <dir>/report.md)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  if (jobs == 0) {
    if (const char* env = std::getenv("EVENTPULSE_JOBS")) {
      jobs = std::atoi(env);
    }
  }
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#endif

  spec_opt.overlap_set = overlap_flag->count() > 0;

  try {
    if (ingest->parsed()) return cmd_ingest(ingest_opt);
    if (fit->parsed()) return cmd_fit(fit_opt);
    if (predict->parsed()) return cmd_predict(predict_opt);
    if (spectro->parsed()) return cmd_spectrogram(spec_opt);
    if (synth->parsed()) return cmd_synth(synth_opt);
    if (report->parsed()) return cmd_report(report_opt);
  } catch (const insufficient_data& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficientData;
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
