#include "eventpulse/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "eventpulse/csv.hpp"
#include "eventpulse/errors.hpp"
#include "eventpulse/ingest.hpp"

namespace eventpulse {

using nlohmann::json;

std::string format_double(double v) { return json(v).dump(); }

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot write " + tmp.string());
    out << content;
    if (!out.good()) throw input_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

json inf_aware(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

double inf_aware_get(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw input_error("bad numeric field '" + s + "'");
  }
  return j.get<double>();
}

} // namespace

json fit_record_to_json(const CityFitRecord& rec) {
  json j;
  j["city_id"] = rec.city_id;
  j["n"] = rec.interval_fit.n;
  j["mu_hat"] = rec.interval_fit.mu_hat;
  j["ci_lower"] = rec.interval_fit.ci_lower;
  j["ci_upper"] = inf_aware(rec.interval_fit.ci_upper);
  if (rec.deaths_power_law) {
    j["alpha"] = rec.deaths_power_law->alpha;
    j["x_min"] = rec.deaths_power_law->x_min;
    j["n_tail"] = rec.deaths_power_law->n_tail;
  } else {
    j["alpha"] = nullptr;
    j["x_min"] = nullptr;
    j["n_tail"] = nullptr;
  }
  if (rec.deaths_exponential) {
    j["deaths_exponential"] = {
        {"mu_hat", rec.deaths_exponential->mu_hat},
        {"n", rec.deaths_exponential->n},
        {"ci_lower", rec.deaths_exponential->ci_lower},
        {"ci_upper", inf_aware(rec.deaths_exponential->ci_upper)},
    };
  } else {
    j["deaths_exponential"] = nullptr;
  }
  return j;
}

CityFitRecord fit_record_from_json(const json& j) {
  CityFitRecord rec;
  rec.city_id = j.at("city_id").get<std::string>();
  rec.interval_fit.n = j.at("n").get<std::size_t>();
  rec.interval_fit.mu_hat = j.at("mu_hat").get<double>();
  rec.interval_fit.ci_lower = inf_aware_get(j.at("ci_lower"));
  rec.interval_fit.ci_upper = inf_aware_get(j.at("ci_upper"));
  if (j.contains("alpha") && !j.at("alpha").is_null()) {
    PowerLawFit p;
    p.alpha = j.at("alpha").get<double>();
    p.x_min = j.at("x_min").get<std::int64_t>();
    p.n_tail = j.at("n_tail").get<std::size_t>();
    rec.deaths_power_law = p;
  }
  if (j.contains("deaths_exponential") && !j.at("deaths_exponential").is_null()) {
    const json& d = j.at("deaths_exponential");
    ExponentialFit f;
    f.mu_hat = d.at("mu_hat").get<double>();
    f.n = d.at("n").get<std::size_t>();
    f.ci_lower = inf_aware_get(d.at("ci_lower"));
    f.ci_upper = inf_aware_get(d.at("ci_upper"));
    rec.deaths_exponential = f;
  }
  return rec;
}

json cluster_report_to_json(const ClusterReport& report) {
  json assignments = json::object();
  for (const auto& [idx, id] : report.assignments) {
    assignments[std::to_string(idx)] = id;
  }
  return json{{"mean_distance_km", report.mean_distance_km},
              {"max_distance_km", report.max_distance_km},
              {"assignments", std::move(assignments)}};
}

json regression_to_json(const RegressionSummary& s) {
  return json{{"slope", s.slope},
              {"intercept", s.intercept},
              {"adj_r2", s.adj_r2},
              {"k", s.k},
              {"v", s.v}};
}

json band_trend_to_json(const BandTrend& t) {
  return json{{"band", t.band == Band::Low ? "low" : "high"},
              {"f_lo", t.f_lo},
              {"f_hi", t.f_hi},
              {"G", t.growth_per_year},
              {"stderr", t.stderr_per_year}};
}

std::string series_to_csv(const CitySeries& series) {
  json meta;
  meta["id"] = series.city.id;
  meta["name"] = series.city.name;
  meta["country"] = series.city.country;
  meta["lat"] = series.city.lat;
  meta["lon"] = series.city.lon;
  meta["population"] = series.city.population;
  meta["span_days"] = series.span_days;

  std::string out = "# city " + meta.dump() + "\n";
  out += "day,lat,lon,deaths\n";
  for (const auto& ev : series.events) {
    out += std::to_string(ev.day) + "," + format_double(ev.lat) + "," +
           format_double(ev.lon) + "," + std::to_string(ev.deaths) + "\n";
  }
  return out;
}

CitySeries series_from_csv(std::istream& in, const std::string& fallback_id) {
  City city;
  city.id = fallback_id;
  std::int64_t span = -1;

  const auto comments = csv::read_leading_comments(in);
  for (const auto& line : comments) {
    const std::string prefix = "# city ";
    if (line.rfind(prefix, 0) == 0) {
      const json meta = json::parse(line.substr(prefix.size()));
      city.id = meta.at("id").get<std::string>();
      city.name = meta.value("name", std::string{});
      city.country = meta.value("country", std::string{});
      city.lat = meta.value("lat", 0.0);
      city.lon = meta.value("lon", 0.0);
      city.population = meta.value("population", std::int64_t{0});
      span = meta.value("span_days", std::int64_t{-1});
    }
  }

  auto events = parse_events(in);
  if (events.empty()) throw input_error("series has no events");
  return build_city_series(city, std::move(events), span);
}

std::string spectrogram_to_csv(const Spectrogram& spec) {
  std::string out = "day";
  for (double f : spec.freqs) out += "," + format_double(f);
  out += "\n";
  for (std::size_t m = 0; m < spec.magnitudes_sq.size(); ++m) {
    out += std::to_string(spec.frame_starts[m]);
    for (double v : spec.magnitudes_sq[m]) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

} // namespace eventpulse
