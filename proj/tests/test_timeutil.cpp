#include <ctime>
#include <random>

#include "doctest.h"
#include "trajkit/timeutil.hpp"

using namespace trajkit::timeutil;

TEST_CASE("civil conversion agrees with the C library") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> dist(-4'000'000'000LL, 8'000'000'000LL);
  for (int i = 0; i < 20000; ++i) {
    const std::int64_t t = i == 0 ? 0 : dist(rng);
    const std::time_t tt = static_cast<std::time_t>(t);
    std::tm tm{};
    REQUIRE(gmtime_r(&tt, &tm) != nullptr);
    const auto d = civil_from_days(floor_days(t));
    REQUIRE(d.year == tm.tm_year + 1900);
    REQUIRE(d.month == static_cast<unsigned>(tm.tm_mon + 1));
    REQUIRE(d.day == static_cast<unsigned>(tm.tm_mday));
    REQUIRE(days_from_civil(d.year, d.month, d.day) == floor_days(t));

    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    if (tm.tm_year + 1900 >= 1000 && tm.tm_year + 1900 <= 9999) {
      REQUIRE(format_iso8601(t) == buf);
      REQUIRE(parse_iso8601(buf) == t);
    }
  }
}

TEST_CASE("ISO-8601 parsing") {
  CHECK(parse_iso8601("1970-01-01T00:00:00") == 0);
  CHECK(parse_iso8601("2021-08-02T10:00:00Z") == 1627898400);
  CHECK(parse_iso8601("2020-02-29T12:00:00") == 1582977600);
  CHECK_FALSE(parse_iso8601("2021-02-29T00:00:00"));
  CHECK_FALSE(parse_iso8601("2021-01-01 00:00:00"));
  CHECK_FALSE(parse_iso8601("2021-01-01T24:00:00"));
  CHECK_FALSE(parse_iso8601("2021-01-01T00:00:00+02"));
}

TEST_CASE("epoch parsing and format detection") {
  CHECK(parse_epoch("1609459200") == 1609459200);
  CHECK(parse_epoch("-5") == -5);
  CHECK_FALSE(parse_epoch("12.5"));
  CHECK_FALSE(parse_epoch(""));
  CHECK(detect_format("1609459200") == TimestampFormat::Epoch);
  CHECK(detect_format("2021-01-01T00:00:00") == TimestampFormat::Iso8601);
}
