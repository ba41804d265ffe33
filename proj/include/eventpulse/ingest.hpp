#pragma once

#include <cstddef>
#include <istream>
#include <utility>
#include <vector>

#include "eventpulse/types.hpp"

namespace eventpulse {

// Parses the events CSV. Header must contain `day,lat,lon,deaths` columns
// (any order, extras ignored), or `date` (ISO-8601 yyyy-mm-dd) instead of
// `day`, in which case days are counted from the earliest date in the file.
// Rows are returned in input order. Throws input_error naming the offending
// line on malformed rows, out-of-range coordinates or negative deaths.
std::vector<EventRecord> parse_events(std::istream& in);

// Parses a gazetteer CSV with header `id,name,country,lat,lon,population`.
// A blank population field means unknown (0). Throws input_error on
// duplicate ids or an empty file.
std::vector<City> parse_gazetteer(std::istream& in);

// Haversine great-circle distance in km, Earth radius 6371.0 km.
double great_circle_km(double lat_a, double lon_a, double lat_b, double lon_b);

// Uniform lat/lon grid over the globe for nearest-city queries. Candidate
// cells are pruned by expanding rings; the stopping bound is the exact
// bounding rectangle of the spherical cap of the best distance so far, so
// results match the brute-force scan bit for bit (same tie-break: smallest
// distance, then lexicographically smallest id).
class CityIndex {
 public:
  explicit CityIndex(const std::vector<City>& cities, double cell_deg = 2.0);

  // Index into the cities vector passed at construction.
  std::size_t nearest(double lat, double lon, double* dist_km = nullptr) const;

 private:
  const std::vector<City>* cities_;
  double cell_deg_;
  int nrows_;
  int ncols_;
  std::vector<std::vector<std::uint32_t>> cells_;

  int row_of(double lat) const;
  int col_of(double lon) const;
};

// Builds one city's series from its (unordered) events. Events are sorted
// by (day, lat, lon, deaths) so the result is independent of input order.
// span_days < 0 means "use the last event day".
CitySeries build_city_series(const City& city, std::vector<EventRecord> events,
                             std::int64_t span_days = -1);

// Assigns every event to its nearest city and builds per-city series.
// Event days are rebased so the earliest event is day 0, and every series
// gets span_days = (latest - earliest event day), the dataset-wide window.
// Cities with no events are omitted. Output is sorted by city id.
std::pair<std::vector<CitySeries>, ClusterReport> cluster_to_cities(
    const std::vector<EventRecord>& events, const std::vector<City>& cities);

// Serial reference: exhaustive nearest scan per event. Kept for testing and
// benchmarking; must produce identical output to cluster_to_cities.
std::pair<std::vector<CitySeries>, ClusterReport> cluster_to_cities_bruteforce(
    const std::vector<EventRecord>& events, const std::vector<City>& cities);

// Keeps series with attack_count >= min_events. The default 97 is the
// smallest n with 1.96/sqrt(n) <= 0.2 (ML estimation error under 20%).
std::vector<CitySeries> filter_sufficient(std::vector<CitySeries> series,
                                          std::size_t min_events = kDefaultMinEvents);

} // namespace eventpulse
