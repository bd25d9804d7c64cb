#include "toolsim/fixtures.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "toolsim/assets.hpp"

namespace toolsim {

namespace {

constexpr int kFixtureSchemaVersion = 1;

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

const WeatherFixture* CatalogFixtures::weather_for(std::string_view location) const {
  for (const auto& w : weather) {
    if (iequals(w.location, location)) return &w;
  }
  return nullptr;
}

const LocationFixture* CatalogFixtures::location_named(std::string_view name) const {
  for (const auto& l : locations) {
    if (iequals(l.name, name)) return &l;
  }
  return nullptr;
}

std::optional<double> CatalogFixtures::fx_rate(std::string_view from, std::string_view to) const {
  const auto f = upper(from);
  const auto t = upper(to);
  if (f == t) return 1.0;
  for (const auto& r : fx_rates) {
    if (r.from == f && r.to == t) return r.rate;
    if (r.from == t && r.to == f) return 1.0 / r.rate;
  }
  // Pivot through USD when no direct pair is listed.
  if (f != "USD" && t != "USD") {
    auto to_usd = fx_rate(f, "USD");
    auto from_usd = fx_rate("USD", t);
    if (to_usd && from_usd) return *to_usd * *from_usd;
  }
  return std::nullopt;
}

void load_fixture_document(CatalogFixtures& into, std::string_view kind, const Json& doc) {
  const int version = doc.value("schema_version", 0);
  if (version != kFixtureSchemaVersion) {
    throw std::runtime_error("fixture '" + std::string(kind) + "' has schema_version " + std::to_string(version) +
                             ", expected " + std::to_string(kFixtureSchemaVersion));
  }
  try {
    if (kind == "locations") {
      for (const auto& e : doc.at("locations")) {
        into.locations.push_back({e.at("name").get<std::string>(), e.value("address", std::string{}),
                                  e.at("latitude").get<double>(), e.at("longitude").get<double>()});
      }
    } else if (kind == "weather") {
      for (const auto& e : doc.at("weather")) {
        into.weather.push_back({e.at("location").get<std::string>(), e.at("current_temperature").get<double>(),
                                e.at("low").get<double>(), e.at("high").get<double>(), e.at("humidity").get<double>(),
                                e.value("condition", std::string{})});
      }
    } else if (kind == "stocks") {
      for (const auto& e : doc.at("stocks")) {
        into.stocks.push_back({e.at("symbol").get<std::string>(), e.at("name").get<std::string>(),
                               e.at("price").get<double>(), e.at("currency_code").get<std::string>()});
      }
    } else if (kind == "holidays") {
      for (const auto& e : doc.at("holidays")) {
        into.holidays.push_back(
            {e.at("name").get<std::string>(), e.at("year").get<int>(), e.at("timestamp").get<std::int64_t>()});
      }
    } else if (kind == "fx_rates") {
      for (const auto& e : doc.at("fx_rates")) {
        into.fx_rates.push_back(
            {upper(e.at("from").get<std::string>()), upper(e.at("to").get<std::string>()), e.at("rate").get<double>()});
      }
    } else if (kind == "units") {
      into.units.length = doc.at("length").get<std::map<std::string, double>>();
      into.units.mass = doc.at("mass").get<std::map<std::string, double>>();
      into.units.temperature = doc.at("temperature").get<std::vector<std::string>>();
    } else {
      throw std::runtime_error("unknown fixture kind '" + std::string(kind) + "'");
    }
  } catch (const Json::exception& e) {
    throw std::runtime_error("malformed fixture '" + std::string(kind) + "': " + e.what());
  }
}

CatalogFixtures load_fixtures(const std::filesystem::path& dir) {
  CatalogFixtures out;
  for (auto kind : kFixtureKinds) {
    const auto path = dir / (std::string(kind) + ".json");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    load_fixture_document(out, kind, Json::parse(buffer.str()));
  }
  return out;
}

const CatalogFixtures& embedded_fixtures() {
  static const CatalogFixtures fixtures = [] {
    CatalogFixtures out;
    for (auto kind : kFixtureKinds) {
      const auto name = "fixtures/" + std::string(kind) + ".json";
      auto text = embedded_asset(name);
      if (!text) throw std::runtime_error("fixture " + name + " is not embedded");
      load_fixture_document(out, kind, Json::parse(*text));
    }
    return out;
  }();
  return fixtures;
}

}  // namespace toolsim
