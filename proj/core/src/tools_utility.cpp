// Offline utilities: clock and calendar arithmetic, distance, unit conversion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>

#include "catalog_internal.hpp"

namespace toolsim {

namespace {

constexpr double kEarthRadiusKm = 6371.0;
constexpr std::int64_t kSecondsPerDay = 86400;

constexpr const char* kWeekdays[] = {"Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  const double dlat = radians(lat2 - lat1);
  const double dlon = radians(lon2 - lon1);
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(radians(lat1)) * std::cos(radians(lat2)) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

DatetimeInfo datetime_from_timestamp(std::int64_t ts) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{ts}};
  const auto day_point = floor<days>(tp);
  const year_month_day ymd{day_point};
  const auto secs = (tp - day_point).count();
  DatetimeInfo info;
  info.year = static_cast<int>(ymd.year());
  info.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
  info.day = static_cast<int>(static_cast<unsigned>(ymd.day()));
  info.hour = static_cast<int>(secs / 3600);
  info.minute = static_cast<int>(secs % 3600 / 60);
  info.second = static_cast<int>(secs % 60);
  info.weekday = kWeekdays[weekday{day_point}.c_encoding()];
  return info;
}

std::int64_t timestamp_from_datetime(std::int64_t year, int month, int day, int hour, int minute, int second) {
  using namespace std::chrono;
  if (year < 1 || year > 9999) detail::raise(ToolErrorKind::ValueError, "year must be in [1, 9999]");
  if (month < 1 || month > 12) detail::raise(ToolErrorKind::ValueError, "month must be in [1, 12]");
  const year_month_day ymd{std::chrono::year{static_cast<int>(year)}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(std::max(day, 0))}};
  if (day < 1 || !ymd.ok()) {
    detail::raise(ToolErrorKind::ValueError, "day " + std::to_string(day) + " does not exist in " +
                                                 std::to_string(year) + "-" + std::to_string(month));
  }
  if (hour < 0 || hour > 23) detail::raise(ToolErrorKind::ValueError, "hour must be in [0, 23]");
  if (minute < 0 || minute > 59) detail::raise(ToolErrorKind::ValueError, "minute must be in [0, 59]");
  if (second < 0 || second > 59) detail::raise(ToolErrorKind::ValueError, "second must be in [0, 59]");
  const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days_since_epoch) * kSecondsPerDay + hour * 3600 + minute * 60 + second;
}

namespace detail {

namespace {

int whole(const Json& args, const char* key, int fallback) {
  auto v = opt_number(args, key);
  if (!v) return fallback;
  if (std::trunc(*v) != *v || std::fabs(*v) > 1e9) {
    raise(ToolErrorKind::ValueError, std::string(key) + " must be a whole number");
  }
  return static_cast<int>(*v);
}

Json datetime_json(const DatetimeInfo& info) {
  return Json{{"year", info.year},     {"month", info.month},   {"day", info.day},        {"hour", info.hour},
              {"minute", info.minute}, {"second", info.second}, {"weekday", info.weekday}};
}

void add_time_tools(ToolList& tools) {
  tools.push_back({make_schema("get_current_timestamp", "time", "Get the current time as a unix timestamp.", {},
                               "Current unix timestamp in seconds.", {}, {"clock"}, {}),
                   [](const Json&, const WorldState& pre) { return returning(pre.clock_timestamp); }});

  tools.push_back(
      {make_schema("timestamp_to_datetime_info", "time",
                   "Convert a unix timestamp to UTC year, month, day, hour, minute, second and weekday.",
                   {required_arg("timestamp", ArgKind::Timestamp, "Unix timestamp in seconds.")},
                   "Object with year, month, day, hour, minute, second and weekday.", {}, {}, {}),
       [](const Json& args, const WorldState&) {
         return returning(datetime_json(datetime_from_timestamp(args.at("timestamp").get<std::int64_t>())));
       }});

  tools.push_back({make_schema("datetime_info_to_timestamp", "time", "Convert a UTC calendar date and time to a unix timestamp.",
                               {required_arg("year", ArgKind::Number, "Year, e.g. 2024."),
                                required_arg("month", ArgKind::Number, "Month, 1 to 12."),
                                required_arg("day", ArgKind::Number, "Day of month."),
                                optional_arg("hour", ArgKind::Number, "Hour, 0 to 23.", 0),
                                optional_arg("minute", ArgKind::Number, "Minute, 0 to 59.", 0),
                                optional_arg("second", ArgKind::Number, "Second, 0 to 59.", 0)},
                               "Unix timestamp in seconds.", {"ValueError"}, {}, {}),
                   [](const Json& args, const WorldState&) {
                     return returning(timestamp_from_datetime(whole(args, "year", 0), whole(args, "month", 0),
                                                              whole(args, "day", 0), whole(args, "hour", 0),
                                                              whole(args, "minute", 0), whole(args, "second", 0)));
                   }});

  tools.push_back(
      {make_schema("shift_timestamp", "time", "Shift a unix timestamp by a number of days, hours, minutes and seconds.",
                   {required_arg("timestamp", ArgKind::Timestamp, "Unix timestamp in seconds."),
                    optional_arg("days", ArgKind::Number, "Days to add, may be negative.", 0),
                    optional_arg("hours", ArgKind::Number, "Hours to add, may be negative.", 0),
                    optional_arg("minutes", ArgKind::Number, "Minutes to add, may be negative.", 0),
                    optional_arg("seconds", ArgKind::Number, "Seconds to add, may be negative.", 0)},
                   "Shifted unix timestamp in seconds.", {"ValueError"}, {}, {}),
       [](const Json& args, const WorldState&) {
         const double delta = args.at("days").get<double>() * kSecondsPerDay + args.at("hours").get<double>() * 3600 +
                              args.at("minutes").get<double>() * 60 + args.at("seconds").get<double>();
         if (!std::isfinite(delta) || std::trunc(delta) != delta || std::fabs(delta) > 1e15) {
           raise(ToolErrorKind::ValueError, "shift must amount to a whole number of seconds");
         }
         return returning(args.at("timestamp").get<std::int64_t>() + static_cast<std::int64_t>(delta));
       }});

  tools.push_back({make_schema("timestamp_diff", "time",
                               "Difference timestamp_1 - timestamp_0 as whole days plus remaining seconds.",
                               {required_arg("timestamp_0", ArgKind::Timestamp, "Start unix timestamp."),
                                required_arg("timestamp_1", ArgKind::Timestamp, "End unix timestamp.")},
                               "Object with days and seconds; both negative when timestamp_1 is earlier.", {}, {}, {}),
                   [](const Json& args, const WorldState&) {
                     const auto diff =
                         args.at("timestamp_1").get<std::int64_t>() - args.at("timestamp_0").get<std::int64_t>();
                     return returning(Json{{"days", diff / kSecondsPerDay}, {"seconds", diff % kSecondsPerDay}});
                   }});
}

void add_math_tools(ToolList& tools) {
  tools.push_back(
      {make_schema("calculate_lat_lon_distance", "math", "Distance in kilometers between two latitude/longitude points.",
                   {required_arg("latitude_0", ArgKind::Latitude, "Latitude of the first point."),
                    required_arg("longitude_0", ArgKind::Longitude, "Longitude of the first point."),
                    required_arg("latitude_1", ArgKind::Latitude, "Latitude of the second point."),
                    required_arg("longitude_1", ArgKind::Longitude, "Longitude of the second point.")},
                   "Distance in kilometers.", {"ValueError"}, {}, {}),
       [](const Json& args, const WorldState&) {
         const double lat0 = args.at("latitude_0").get<double>();
         const double lon0 = args.at("longitude_0").get<double>();
         const double lat1 = args.at("latitude_1").get<double>();
         const double lon1 = args.at("longitude_1").get<double>();
         check_coordinates(lat0, lon0);
         check_coordinates(lat1, lon1);
         return returning(haversine_km(lat0, lon0, lat1, lon1));
       }});
}

// Accepts canonical names, common abbreviations and plural forms.
std::string canonical_unit(std::string_view raw) {
  static const std::map<std::string, std::string> aliases = {
      {"m", "meter"},         {"meters", "meter"},       {"metre", "meter"},       {"metres", "meter"},
      {"km", "kilometer"},    {"kilometers", "kilometer"}, {"kilometre", "kilometer"}, {"kilometres", "kilometer"},
      {"cm", "centimeter"},   {"centimeters", "centimeter"}, {"mm", "millimeter"},  {"millimeters", "millimeter"},
      {"mi", "mile"},         {"miles", "mile"},         {"yd", "yard"},           {"yards", "yard"},
      {"ft", "foot"},         {"feet", "foot"},          {"in", "inch"},           {"inches", "inch"},
      {"kg", "kilogram"},     {"kilograms", "kilogram"}, {"g", "gram"},            {"grams", "gram"},
      {"mg", "milligram"},    {"milligrams", "milligram"}, {"lb", "pound"},        {"lbs", "pound"},
      {"pounds", "pound"},    {"oz", "ounce"},           {"ounces", "ounce"},      {"c", "celsius"},
      {"f", "fahrenheit"},    {"k", "kelvin"},
  };
  auto name = lower(raw);
  auto it = aliases.find(name);
  return it == aliases.end() ? name : it->second;
}

double to_kelvin(double v, const std::string& unit) {
  if (unit == "celsius") return v + 273.15;
  if (unit == "fahrenheit") return (v - 32.0) * 5.0 / 9.0 + 273.15;
  return v;
}

double from_kelvin(double v, const std::string& unit) {
  if (unit == "celsius") return v - 273.15;
  if (unit == "fahrenheit") return (v - 273.15) * 9.0 / 5.0 + 32.0;
  return v;
}

void add_unit_tool(ToolList& tools, std::shared_ptr<const CatalogFixtures> fixtures) {
  tools.push_back(
      {make_schema("unit_conversion", "conversion", "Convert an amount between units of length, mass or temperature.",
                   {required_arg("amount", ArgKind::Number, "Amount to convert."),
                    required_arg("from_unit", ArgKind::String, "Source unit, e.g. mile, kilogram, fahrenheit."),
                    required_arg("to_unit", ArgKind::String, "Target unit.")},
                   "Converted amount.", {"ValueError"}, {}, {}),
       [fixtures](const Json& args, const WorldState&) {
         const double amount = args.at("amount").get<double>();
         const auto from = canonical_unit(args.at("from_unit").get<std::string>());
         const auto to = canonical_unit(args.at("to_unit").get<std::string>());
         const auto& u = fixtures->units;
         for (const auto* table : {&u.length, &u.mass}) {
           auto f = table->find(from);
           auto t = table->find(to);
           if (f != table->end() && t != table->end()) return returning(amount * f->second / t->second);
         }
         const auto is_temp = [&](const std::string& name) {
           return std::find(u.temperature.begin(), u.temperature.end(), name) != u.temperature.end();
         };
         if (is_temp(from) && is_temp(to)) return returning(from_kelvin(to_kelvin(amount, from), to));
         raise(ToolErrorKind::ValueError, "cannot convert from '" + from + "' to '" + to + "'");
       }});
}

}  // namespace

void add_utility_tools(ToolList& tools) {
  add_time_tools(tools);
  add_math_tools(tools);
}

void add_unit_conversion_tool(ToolList& tools, std::shared_ptr<const CatalogFixtures> fixtures) {
  add_unit_tool(tools, std::move(fixtures));
}

}  // namespace detail

}  // namespace toolsim
