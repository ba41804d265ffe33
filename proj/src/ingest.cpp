#include "eventpulse/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <unordered_set>

#include "eventpulse/csv.hpp"
#include "eventpulse/errors.hpp"

namespace eventpulse {

namespace {

constexpr double kEarthRadiusKm = 6371.0;
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegPerKm = 180.0 / (kPi * kEarthRadiusKm);

double deg2rad(double d) { return d * (kPi / 180.0); }

[[noreturn]] void fail_line(std::size_t line, const std::string& msg) {
  throw input_error("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& s, std::size_t line, const char* what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e || !std::isfinite(v)) {
    fail_line(line, std::string("bad ") + what + " value '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& s, std::size_t line, const char* what) {
  std::int64_t v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e) {
    fail_line(line, std::string("bad ") + what + " value '" + s + "'");
  }
  return v;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool leap_year(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

std::int64_t parse_iso_date(const std::string& s, std::size_t line) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    fail_line(line, "bad date value '" + s + "' (expected yyyy-mm-dd)");
  }
  const std::int64_t y = parse_int(s.substr(0, 4), line, "date");
  const std::int64_t m = parse_int(s.substr(5, 2), line, "date");
  const std::int64_t d = parse_int(s.substr(8, 2), line, "date");
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12) fail_line(line, "bad date value '" + s + "'");
  int dim = kDays[m - 1];
  if (m == 2 && leap_year(y)) dim = 29;
  if (d < 1 || d > dim) fail_line(line, "bad date value '" + s + "'");
  return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return header.size();
}

const std::string& field(const csv::Row& row, std::size_t col) {
  if (col >= row.fields.size()) {
    fail_line(row.line, "row has too few fields");
  }
  return row.fields[col];
}

void check_coords(double lat, double lon, std::size_t line) {
  if (!(lat >= -90.0 && lat <= 90.0)) fail_line(line, "latitude out of range");
  if (!(lon >= -180.0 && lon <= 180.0)) fail_line(line, "longitude out of range");
}

} // namespace

std::vector<EventRecord> parse_events(std::istream& in) {
  const auto rows = csv::read_rows(in);
  if (rows.empty()) throw input_error("events file is empty");

  const auto& header = rows.front().fields;
  const std::size_t c_day = find_column(header, "day");
  const std::size_t c_date = find_column(header, "date");
  const std::size_t c_lat = find_column(header, "lat");
  const std::size_t c_lon = find_column(header, "lon");
  const std::size_t c_deaths = find_column(header, "deaths");
  const bool by_date = c_day >= header.size();
  if ((by_date && c_date >= header.size()) || c_lat >= header.size() ||
      c_lon >= header.size() || c_deaths >= header.size()) {
    throw input_error("events header must contain day (or date), lat, lon, deaths");
  }

  std::vector<EventRecord> events;
  events.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    EventRecord ev;
    if (by_date) {
      ev.day = parse_iso_date(field(row, c_date), row.line);
    } else {
      ev.day = parse_int(field(row, c_day), row.line, "day");
      if (ev.day < 0) fail_line(row.line, "negative day");
    }
    ev.lat = parse_double(field(row, c_lat), row.line, "lat");
    ev.lon = parse_double(field(row, c_lon), row.line, "lon");
    check_coords(ev.lat, ev.lon, row.line);
    ev.deaths = parse_int(field(row, c_deaths), row.line, "deaths");
    if (ev.deaths < 0) fail_line(row.line, "negative deaths");
    events.push_back(ev);
  }

  if (by_date && !events.empty()) {
    std::int64_t min_day = events.front().day;
    for (const auto& ev : events) min_day = std::min(min_day, ev.day);
    for (auto& ev : events) ev.day -= min_day;
  }
  return events;
}

std::vector<City> parse_gazetteer(std::istream& in) {
  const auto rows = csv::read_rows(in);
  if (rows.empty()) throw input_error("gazetteer file is empty");

  const auto& header = rows.front().fields;
  const std::size_t c_id = find_column(header, "id");
  const std::size_t c_name = find_column(header, "name");
  const std::size_t c_country = find_column(header, "country");
  const std::size_t c_lat = find_column(header, "lat");
  const std::size_t c_lon = find_column(header, "lon");
  const std::size_t c_pop = find_column(header, "population");
  if (c_id >= header.size() || c_name >= header.size() || c_country >= header.size() ||
      c_lat >= header.size() || c_lon >= header.size() || c_pop >= header.size()) {
    throw input_error("gazetteer header must contain id,name,country,lat,lon,population");
  }
  if (rows.size() == 1) throw input_error("gazetteer has no cities");

  std::vector<City> cities;
  cities.reserve(rows.size() - 1);
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    City c;
    c.id = field(row, c_id);
    if (c.id.empty()) fail_line(row.line, "empty city id");
    if (!seen.insert(c.id).second) {
      fail_line(row.line, "duplicate city id '" + c.id + "'");
    }
    c.name = field(row, c_name);
    c.country = field(row, c_country);
    c.lat = parse_double(field(row, c_lat), row.line, "lat");
    c.lon = parse_double(field(row, c_lon), row.line, "lon");
    check_coords(c.lat, c.lon, row.line);
    const std::string& pop = field(row, c_pop);
    c.population = pop.empty() ? 0 : parse_int(pop, row.line, "population");
    if (c.population < 0) fail_line(row.line, "negative population");
    cities.push_back(std::move(c));
  }
  return cities;
}

double great_circle_km(double lat_a, double lon_a, double lat_b, double lon_b) {
  const double phi_a = deg2rad(lat_a);
  const double phi_b = deg2rad(lat_b);
  const double sin_dphi = std::sin(0.5 * deg2rad(lat_b - lat_a));
  const double sin_dlam = std::sin(0.5 * deg2rad(lon_b - lon_a));
  const double h = sin_dphi * sin_dphi +
                   std::cos(phi_a) * std::cos(phi_b) * sin_dlam * sin_dlam;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

CityIndex::CityIndex(const std::vector<City>& cities, double cell_deg)
    : cities_(&cities), cell_deg_(cell_deg) {
  if (cities.empty()) throw input_error("empty gazetteer");
  if (!(cell_deg > 0.0)) throw std::invalid_argument("cell_deg must be > 0");
  nrows_ = static_cast<int>(std::ceil(180.0 / cell_deg_));
  ncols_ = static_cast<int>(std::ceil(360.0 / cell_deg_));
  cells_.resize(static_cast<std::size_t>(nrows_) * ncols_);
  for (std::size_t i = 0; i < cities.size(); ++i) {
    const int r = row_of(cities[i].lat);
    const int c = col_of(cities[i].lon);
    cells_[static_cast<std::size_t>(r) * ncols_ + c].push_back(
        static_cast<std::uint32_t>(i));
  }
}

int CityIndex::row_of(double lat) const {
  int r = static_cast<int>(std::floor((lat + 90.0) / cell_deg_));
  return std::clamp(r, 0, nrows_ - 1);
}

int CityIndex::col_of(double lon) const {
  int c = static_cast<int>(std::floor((lon + 180.0) / cell_deg_));
  return ((c % ncols_) + ncols_) % ncols_;
}

std::size_t CityIndex::nearest(double lat, double lon, double* dist_km) const {
  const auto& cities = *cities_;
  double best_d = kInf;
  std::size_t best_i = cities.size();

  std::vector<bool> visited(cells_.size(), false);
  auto scan_cell = [&](int r, int c) {
    if (r < 0 || r >= nrows_) return;
    c = ((c % ncols_) + ncols_) % ncols_;
    const std::size_t idx = static_cast<std::size_t>(r) * ncols_ + c;
    if (visited[idx]) return;
    visited[idx] = true;
    for (std::uint32_t i : cells_[idx]) {
      const double d = great_circle_km(lat, lon, cities[i].lat, cities[i].lon);
      if (d < best_d || (d == best_d && (best_i >= cities.size() ||
                                         cities[i].id < cities[best_i].id))) {
        best_d = d;
        best_i = i;
      }
    }
  };

  // Expand square rings until at least one candidate is found.
  const int r0 = row_of(lat);
  const int c0 = col_of(lon);
  const int max_ring = std::max(nrows_, ncols_);
  for (int ring = 0; ring <= max_ring && best_i >= cities.size(); ++ring) {
    for (int dr = -ring; dr <= ring; ++dr) {
      if (std::abs(dr) == ring) {
        for (int dc = -ring; dc <= ring; ++dc) scan_cell(r0 + dr, c0 + dc);
      } else {
        scan_cell(r0 + dr, c0 - ring);
        scan_cell(r0 + dr, c0 + ring);
      }
    }
  }

  // Refine: scan the bounding rectangle of the spherical cap around the
  // query with angular radius = best distance, until the best stops moving.
  // The cap's longitude extent is asin(sin(sigma)/cos(lat)) unless it
  // reaches a pole, in which case all longitudes qualify.
  for (;;) {
    const double prev_best = best_d;
    const std::size_t prev_i = best_i;
    const double sigma_deg = best_d * kDegPerKm * (1.0 + 1e-12) + 1e-9;
    const double lat_lo = std::max(-90.0, lat - sigma_deg);
    const double lat_hi = std::min(90.0, lat + sigma_deg);
    double dlon_deg = 180.0;
    if (std::abs(lat) + sigma_deg < 90.0) {
      const double s = std::sin(deg2rad(sigma_deg)) / std::cos(deg2rad(lat));
      dlon_deg = s >= 1.0 ? 180.0 : std::asin(s) * (180.0 / kPi) + 1e-9;
    }
    const int r_lo = row_of(lat_lo);
    const int r_hi = row_of(lat_hi);
    int c_lo = 0, c_hi = ncols_ - 1;
    if (dlon_deg < 180.0) {
      const int span = static_cast<int>(std::ceil(dlon_deg / cell_deg_)) + 1;
      if (2 * span + 1 < ncols_) {
        c_lo = c0 - span;
        c_hi = c0 + span;
      }
    }
    for (int r = r_lo; r <= r_hi; ++r) {
      for (int c = c_lo; c <= c_hi; ++c) scan_cell(r, c);
    }
    if (best_d == prev_best && best_i == prev_i) break;
  }

  if (dist_km) *dist_km = best_d;
  return best_i;
}

CitySeries build_city_series(const City& city, std::vector<EventRecord> events,
                             std::int64_t span_days) {
  if (events.empty()) throw std::invalid_argument("build_city_series: no events");
  std::sort(events.begin(), events.end(), [](const EventRecord& a, const EventRecord& b) {
    return std::tie(a.day, a.lat, a.lon, a.deaths) < std::tie(b.day, b.lat, b.lon, b.deaths);
  });
  CitySeries s;
  s.city = city;
  s.attack_count = events.size();
  s.intervals.reserve(events.size() - 1);
  s.deaths_per_attack.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0) s.intervals.push_back(events[i].day - events[i - 1].day);
    s.deaths_per_attack.push_back(events[i].deaths);
  }
  s.span_days = span_days >= 0 ? span_days : events.back().day;
  s.events = std::move(events);
  return s;
}

namespace {

std::pair<std::vector<CitySeries>, ClusterReport> cluster_impl(
    const std::vector<EventRecord>& events, const std::vector<City>& cities,
    bool use_index) {
  if (cities.empty()) throw input_error("empty gazetteer");
  if (events.empty()) throw input_error("no events");

  const std::size_t n = events.size();
  std::vector<std::size_t> assigned(n);
  std::vector<double> dist(n);

  if (use_index) {
    const CityIndex index(cities);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      assigned[i] = index.nearest(events[i].lat, events[i].lon, &dist[i]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double best_d = kInf;
      std::size_t best_j = cities.size();
      for (std::size_t j = 0; j < cities.size(); ++j) {
        const double d =
            great_circle_km(events[i].lat, events[i].lon, cities[j].lat, cities[j].lon);
        if (d < best_d || (d == best_d && (best_j >= cities.size() ||
                                           cities[j].id < cities[best_j].id))) {
          best_d = d;
          best_j = j;
        }
      }
      assigned[i] = best_j;
      dist[i] = best_d;
    }
  }

  ClusterReport report;
  double sum = 0.0;
  double mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += dist[i];
    mx = std::max(mx, dist[i]);
    report.assignments[i] = cities[assigned[i]].id;
  }
  report.mean_distance_km = sum / static_cast<double>(n);
  report.max_distance_km = mx;

  std::int64_t min_day = events.front().day;
  std::int64_t max_day = events.front().day;
  for (const auto& ev : events) {
    min_day = std::min(min_day, ev.day);
    max_day = std::max(max_day, ev.day);
  }
  const std::int64_t span = max_day - min_day;

  std::vector<std::vector<EventRecord>> per_city(cities.size());
  for (std::size_t i = 0; i < n; ++i) {
    EventRecord ev = events[i];
    ev.day -= min_day;
    per_city[assigned[i]].push_back(ev);
  }

  std::vector<CitySeries> series;
  for (std::size_t j = 0; j < cities.size(); ++j) {
    if (per_city[j].empty()) continue;
    series.push_back(build_city_series(cities[j], std::move(per_city[j]), span));
  }
  std::sort(series.begin(), series.end(),
            [](const CitySeries& a, const CitySeries& b) { return a.city.id < b.city.id; });
  return {std::move(series), std::move(report)};
}

} // namespace

std::pair<std::vector<CitySeries>, ClusterReport> cluster_to_cities(
    const std::vector<EventRecord>& events, const std::vector<City>& cities) {
  return cluster_impl(events, cities, true);
}

std::pair<std::vector<CitySeries>, ClusterReport> cluster_to_cities_bruteforce(
    const std::vector<EventRecord>& events, const std::vector<City>& cities) {
  return cluster_impl(events, cities, false);
}

std::vector<CitySeries> filter_sufficient(std::vector<CitySeries> series,
                                          std::size_t min_events) {
  if (min_events < 2) throw std::invalid_argument("min_events must be >= 2");
  std::erase_if(series, [min_events](const CitySeries& s) {
    return s.attack_count < min_events;
  });
  return series;
}

} // namespace eventpulse
