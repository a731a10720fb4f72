#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "multigiant/errors.hpp"
#include "multigiant/spec_io.hpp"

using namespace multigiant;

namespace {

const char* kBipartite = R"({"parts": 2, "atoms": [
  {"part": 1, "degree": [0, 1], "mass": "1/4"},
  {"part": 1, "degree": [0, 3], "mass": "1/4"},
  {"part": 2, "degree": [2, 0], "mass": "1/2"}]})";

std::string parse_error_field(std::string_view text) {
  try {
    parse_spec(text);
  } catch (const ParseError& e) {
    return e.field();
  }
  return "<no error>";
}

} // namespace

TEST_CASE("parse the bipartite spec") {
  const auto spec = parse_spec(kBipartite);
  CHECK(spec == fixtures::bipartite());
  CHECK(spec.is_exact());
}

TEST_CASE("spec round trip") {
  for (const auto& spec : {fixtures::bipartite(), fixtures::tripartite(), fixtures::disjoint_bipartite()}) {
    CHECK(parse_spec(dump_spec(spec)) == spec);
  }
  const DegreeSpec approx(1, {{0, {1}, Mass::approximate(0.1)}, {0, {3}, Mass::approximate(0.9)}});
  const auto back = parse_spec(dump_spec(approx));
  CHECK_FALSE(back.is_exact());
  CHECK(back == approx);
}

TEST_CASE("spec files on disk") {
  const auto path = std::filesystem::temp_directory_path() / "multigiant_spec_io_test.json";
  save_spec(fixtures::tripartite(), path);
  CHECK(load_spec(path) == fixtures::tripartite());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_spec(path), Error);
}

TEST_CASE("malformed specs name the offending field") {
  CHECK(parse_error_field(R"({"parts": 2, "atoms": [], "extra": 1})") == "extra");
  CHECK(parse_error_field(R"({"atoms": []})") == "parts");
  CHECK(parse_error_field(R"({"parts": 1, "atoms": [{"part": 1, "degree": [1]}]})") == "atoms[0].mass");
  CHECK(parse_error_field(R"({"parts": 1, "atoms": [{"part": 1, "degree": [1], "mass": -0.5}]})") == "atoms[0].mass");
  CHECK(parse_error_field(R"({"parts": 1, "atoms": [{"part": 1.5, "degree": [1], "mass": 1}]})") == "atoms[0].part");
  CHECK(parse_error_field(R"({"parts": 1, "atoms": [{"part": 1, "degree": [1], "mass": 1, "x": 0}]})") ==
        "atoms[0].x");
  CHECK(parse_error_field(R"({"parts": 1, "atoms": [
      {"part": 1, "degree": [1], "mass": "1/2"},
      {"part": 1, "degree": [1], "mass": "1/2"}]})") == "atoms[1]");
}

TEST_CASE("syntax errors report a line") {
  try {
    parse_spec("{\n  \"parts\": 2,\n  \"atoms\": [,]\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("sequence files") {
  const auto seq = realize_sequence(fixtures::bipartite(), 10);
  CHECK(parse_sequence(dump_sequence(seq)) == seq);
  CHECK_THROWS_AS(parse_sequence(R"({"parts": 1, "n": 3, "atoms": [{"part": 1, "degree": [2], "count": 2}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_sequence(R"({"parts": 1, "n": 2, "atoms": [{"part": 1, "degree": [2], "count": -2}]})"),
                  ParseError);
  const auto ok = parse_sequence(R"({"parts": 1, "n": 2, "atoms": [{"part": 1, "degree": [2], "count": 2}]})");
  CHECK(ok.n() == 2);
}
