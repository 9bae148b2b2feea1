#include <cmath>
#include <cstdlib>
#include <string>

#include <doctest.h>

#include "ramanwt/csv.hpp"
#include "ramanwt/error.hpp"
#include "ramanwt/rng.hpp"

using namespace ramanwt;

TEST_CASE("fmt_num output parses back to the exact double") {
  const double cases[] = {0.0,   1.0,  -1.0,       0.1,   1.0 / 3.0, 2.0 / 3.0, 1e-300,
                          1e300, kPi,  -12345.678, 1e-17, 0.3,       255.0};
  for (double v : cases) CHECK(std::strtod(fmt_num(v).c_str(), nullptr) == v);

  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-20.0, 20.0));
    CHECK(std::strtod(fmt_num(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("fmt_num prefers the short form when it round-trips") {
  CHECK(fmt_num(0.5) == "0.5");
  CHECK(fmt_num(1.0) == "1");
  CHECK(fmt_num(0.1) == "0.1");
  CHECK(fmt_num(-2.0) == "-2");
}

TEST_CASE("fmt_num spells out non-finite values") {
  CHECK(fmt_num(std::nan("")) == "nan");
  CHECK(fmt_num(HUGE_VAL) == "inf");
  CHECK(fmt_num(-HUGE_VAL) == "-inf");
}

TEST_CASE("fmt_int writes plain decimal integers") {
  CHECK(fmt_int(0) == "0");
  CHECK(fmt_int(-42) == "-42");
  CHECK(fmt_int(9007199254740993ll) == "9007199254740993");
}

TEST_CASE("csv writer emits rows verbatim and checks the column count") {
  CsvWriter csv({"a", "b"});
  csv.row({"1", "x"});
  csv.row({"2", ""});
  CHECK(csv.str() == "a,b\n1,x\n2,\n");
  CHECK_THROWS_AS(csv.row({"only-one"}), Error);
}

TEST_CASE("parse_csv splits rows and fields") {
  const auto rows = parse_csv("a,b\n1,x\n2,\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"a", "b"});
  CHECK(rows[1] == std::vector<std::string>{"1", "x"});
  CHECK(rows[2] == std::vector<std::string>{"2", ""});
}

TEST_CASE("parse_csv tolerates a missing trailing newline and CR line ends") {
  const auto rows = parse_csv("a,b\r\n1,2");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == std::vector<std::string>{"1", "2"});
}
