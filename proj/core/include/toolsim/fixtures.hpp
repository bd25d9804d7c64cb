#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolsim/message.hpp"

namespace toolsim {

struct LocationFixture {
  std::string name;
  std::string address;
  double latitude = 0.0;
  double longitude = 0.0;
};

struct WeatherFixture {
  std::string location;  // a LocationFixture name
  double current_temperature = 0.0;  // degrees Celsius
  double low = 0.0;
  double high = 0.0;
  double humidity = 0.0;  // percent
  std::string condition;
};

struct StockFixture {
  std::string symbol;
  std::string name;
  double price = 0.0;
  std::string currency_code;
};

struct HolidayFixture {
  std::string name;
  int year = 0;
  std::int64_t timestamp = 0;  // 00:00:00 UTC of the day
};

struct FxRate {
  std::string from;
  std::string to;
  double rate = 0.0;
};

struct UnitTables {
  std::map<std::string, double> length;  // factor to meters
  std::map<std::string, double> mass;  // factor to kilograms
  std::vector<std::string> temperature;
};

/// Knowledge data behind the lookup tools. Loaded from versioned JSON files
/// (`schema_version` 1); see docs/fixtures.md for the layout.
struct CatalogFixtures {
  std::vector<LocationFixture> locations;
  std::vector<WeatherFixture> weather;
  std::vector<StockFixture> stocks;
  std::vector<HolidayFixture> holidays;
  std::vector<FxRate> fx_rates;
  UnitTables units;

  /// Weather entry for `location`, matched case-insensitively.
  const WeatherFixture* weather_for(std::string_view location) const;
  const LocationFixture* location_named(std::string_view name) const;
  std::optional<double> fx_rate(std::string_view from, std::string_view to) const;
};

/// Parses one fixture document; `kind` is the file stem ("locations", ...).
/// Throws std::runtime_error on a wrong schema_version or malformed entry.
void load_fixture_document(CatalogFixtures& into, std::string_view kind, const Json& doc);

CatalogFixtures load_fixtures(const std::filesystem::path& dir);

/// The fixture set compiled into the library (checksum-verified at build time).
const CatalogFixtures& embedded_fixtures();

inline constexpr std::string_view kFixtureKinds[] = {"locations", "weather", "stocks", "holidays", "fx_rates", "units"};

}  // namespace toolsim
