// Fixture-backed lookups (map, weather, stock, holiday, currency). All of
// them except get_current_location stand in for online services and so
// need wifi.

#include <cctype>
#include <limits>

#include "catalog_internal.hpp"

namespace toolsim::detail {

namespace {

StateRequirement needs_wifi() {
  return {"wifi", true, "ConnectionError", "wifi is not on", std::nullopt};
}

Json location_json(const LocationFixture& l) {
  return Json{{"name", l.name}, {"address", l.address}, {"latitude", l.latitude}, {"longitude", l.longitude}};
}

// Letters and digits only, so "christmas" finds "Christmas Day" and "new years" finds "New Year's Day".
std::string fold(std::string_view s) {
  std::string out;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace

void add_knowledge_tools(ToolList& tools, std::shared_ptr<const CatalogFixtures> fixtures) {
  ToolSchema search_location =
      make_schema("search_location", "map", "Search for places by name or address.",
                  {required_arg("location", ArgKind::String, "Place name or part of an address.")},
                  "List of places with name, address, latitude and longitude.",
                  {"ConnectionError", "NoMatchError"}, {"wifi"}, {});
  search_location.requires_state.push_back(needs_wifi());
  tools.push_back({std::move(search_location), [fixtures](const Json& args, const WorldState&) {
                     const auto query = args.at("location").get<std::string>();
                     Json hits = Json::array();
                     for (const auto& l : fixtures->locations) {
                       if (contains_ci(l.name, query) || contains_ci(l.address, query)) hits.push_back(location_json(l));
                     }
                     if (hits.empty()) raise(ToolErrorKind::NoMatchError, "no place matches '" + query + "'");
                     return returning(std::move(hits));
                   }});

  ToolSchema current = make_schema("get_current_location", "map", "Get the device's current latitude and longitude.", {},
                                   "Object with latitude and longitude.", {"PermissionError"},
                                   {"location_service", "current_location"}, {});
  current.requires_state.push_back(
      {"location_service", true, "PermissionError", "location service is not on", std::nullopt});
  tools.push_back({std::move(current), [](const Json&, const WorldState& pre) {
                     return returning(Json(pre.current_location));
                   }});

  ToolSchema weather = make_schema(
      "search_weather_around_lat_lon", "weather", "Get current weather at the known location nearest to a coordinate.",
      {required_arg("latitude", ArgKind::Latitude, "Latitude of the point of interest."),
       required_arg("longitude", ArgKind::Longitude, "Longitude of the point of interest.")},
      "Object with location, current_temperature (Celsius), low, high, humidity (percent) and condition.",
      {"ConnectionError", "ValueError", "NoMatchError"}, {"wifi"}, {});
  weather.requires_state.push_back(needs_wifi());
  tools.push_back({std::move(weather), [fixtures](const Json& args, const WorldState&) {
                     const double lat = args.at("latitude").get<double>();
                     const double lon = args.at("longitude").get<double>();
                     check_coordinates(lat, lon);
                     const WeatherFixture* best = nullptr;
                     double best_km = std::numeric_limits<double>::infinity();
                     for (const auto& w : fixtures->weather) {
                       const auto* place = fixtures->location_named(w.location);
                       if (place == nullptr) continue;
                       const double km = haversine_km(lat, lon, place->latitude, place->longitude);
                       if (km < best_km) {
                         best_km = km;
                         best = &w;
                       }
                     }
                     if (best == nullptr) raise(ToolErrorKind::NoMatchError, "no weather data available");
                     return returning(Json{{"location", best->location},
                                           {"current_temperature", best->current_temperature},
                                           {"low", best->low},
                                           {"high", best->high},
                                           {"humidity", best->humidity},
                                           {"condition", best->condition}});
                   }});

  ToolSchema stock = make_schema("search_stock", "stock", "Look up the latest stock price by ticker symbol or company name.",
                                 {required_arg("query", ArgKind::String, "Ticker symbol or company name.")},
                                 "Object with symbol, name, price and currency_code.",
                                 {"ConnectionError", "NoMatchError"}, {"wifi"}, {});
  stock.requires_state.push_back(needs_wifi());
  tools.push_back({std::move(stock), [fixtures](const Json& args, const WorldState&) {
                     const auto query = args.at("query").get<std::string>();
                     const StockFixture* hit = nullptr;
                     for (const auto& s : fixtures->stocks) {
                       if (equals_ci(s.symbol, query)) {
                         hit = &s;
                         break;
                       }
                       if (hit == nullptr && contains_ci(s.name, query)) hit = &s;
                     }
                     if (hit == nullptr) raise(ToolErrorKind::NoMatchError, "no stock matches '" + query + "'");
                     return returning(Json{{"symbol", hit->symbol},
                                           {"name", hit->name},
                                           {"price", hit->price},
                                           {"currency_code", hit->currency_code}});
                   }});

  ToolSchema holiday = make_schema(
      "search_holiday", "holiday", "Find the date of a holiday as a unix timestamp (midnight UTC).",
      {required_arg("holiday_name", ArgKind::String, "Holiday name, e.g. Christmas Day."),
       optional_arg("year", ArgKind::Number, "Year to search; defaults to the current year.")},
      "Unix timestamp of the holiday.", {"ConnectionError", "NoMatchError"}, {"wifi", "clock"}, {});
  holiday.requires_state.push_back(needs_wifi());
  tools.push_back({std::move(holiday), [fixtures](const Json& args, const WorldState& pre) {
                     const auto name = args.at("holiday_name").get<std::string>();
                     const auto year_arg = opt_number(args, "year");
                     const auto year = year_arg ? static_cast<std::int64_t>(*year_arg)
                                                : datetime_from_timestamp(pre.clock_timestamp).year;
                     const auto needle = fold(name);
                     for (const auto& h : fixtures->holidays) {
                       if (h.year == year && !needle.empty() && fold(h.name).find(needle) != std::string::npos) {
                         return returning(h.timestamp);
                       }
                     }
                     raise(ToolErrorKind::NoMatchError,
                           "no holiday matches '" + name + "' in " + std::to_string(year));
                   }});

  ToolSchema currency = make_schema(
      "convert_currency", "conversion", "Convert an amount between currencies using ISO 4217 codes.",
      {required_arg("amount", ArgKind::Number, "Amount in the source currency."),
       required_arg("from_currency_code", ArgKind::String, "ISO 4217 code of the source currency, e.g. USD."),
       required_arg("to_currency_code", ArgKind::String, "ISO 4217 code of the target currency, e.g. EUR.")},
      "Amount in the target currency.", {"ConnectionError", "ValueError"}, {"wifi"}, {});
  currency.requires_state.push_back(needs_wifi());
  tools.push_back({std::move(currency), [fixtures](const Json& args, const WorldState&) {
                     const auto from = args.at("from_currency_code").get<std::string>();
                     const auto to = args.at("to_currency_code").get<std::string>();
                     const auto rate = fixtures->fx_rate(from, to);
                     if (!rate) raise(ToolErrorKind::ValueError, "no exchange rate from '" + from + "' to '" + to + "'");
                     return returning(args.at("amount").get<double>() * *rate);
                   }});
}

}  // namespace toolsim::detail
