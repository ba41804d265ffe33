#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eventpulse/types.hpp"

namespace eventpulse {

// Shortest round-trip decimal representation (what JSON emission uses),
// so CSV and JSON outputs are byte-stable across runs.
std::string format_double(double v);

// Write-temp-then-rename so readers never observe partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// Per-city fit bundle as stored in fits.json. Deaths are fitted both ways
// (power law and exponential); either fit may be absent for degenerate
// death data.
struct CityFitRecord {
  std::string city_id;
  ExponentialFit interval_fit;
  std::optional<PowerLawFit> deaths_power_law;
  std::optional<ExponentialFit> deaths_exponential;
};

// {city_id, n, mu_hat, ci_lower, ci_upper, alpha, x_min, n_tail, ...};
// infinities are serialized as the string "inf".
nlohmann::json fit_record_to_json(const CityFitRecord& rec);
CityFitRecord fit_record_from_json(const nlohmann::json& j);

nlohmann::json cluster_report_to_json(const ClusterReport& report);

nlohmann::json regression_to_json(const RegressionSummary& s);

nlohmann::json band_trend_to_json(const BandTrend& t);

// Series CSV: a `# city {...}` metadata comment followed by the events
// table. The payload is itself a valid events CSV (comments are ignored by
// the event parser).
std::string series_to_csv(const CitySeries& series);
CitySeries series_from_csv(std::istream& in, const std::string& fallback_id);

// Spectrogram CSV: header row `day,<f0>,<f1>,...` then one row per frame
// with the frame-start day first.
std::string spectrogram_to_csv(const Spectrogram& spec);

} // namespace eventpulse
