#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hyperem/acceptance.hpp"
#include "hyperem/error.hpp"
#include "hyperem/io.hpp"
#include "hyperem/parallel.hpp"
#include "hyperem/svg.hpp"

using namespace hyperem;

TEST_CASE("number formatting round-trips") {
  CHECK(format_double(NAN) == "null");
  CHECK(format_double(INFINITY) == "null");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("json keeps insertion order") {
  Json j = Json::object().set("b", 1).set("a", Json::array().push(2.5).push("x")).set("c", nullptr);
  const std::string s = j.dump(0);
  CHECK(s.find("\"b\"") < s.find("\"a\""));
  CHECK(s.find("null") != std::string::npos);
  CHECK(s.find("\"x\"") != std::string::npos);
}

TEST_CASE("csv table") {
  CsvTable t({"a", "b", "c"});
  t.add({1.5, 3LL, std::string("z")});
  t.add({NAN, 0LL, std::string("")});
  CHECK(t.str() == "a,b,c\n1.5,3,z\n,0,\n");
}

TEST_CASE("write_file creates directories") {
  const auto dir = std::filesystem::temp_directory_path() / "hyperem_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_file(dir / "f.txt", "hello");
  std::ifstream in(dir / "f.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "hello");
  std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("svg has one polyline per series") {
  PlotSeries a{"a", {{0, 0}, {1, 1}}};
  PlotSeries b{"b", {{0, 1}, {1, 0}, {2, 3}}};
  const std::string svg = render_svg({a, b}, {"t", "x", "y"});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("viewBox=\"0 0 1000 600\"") != std::string::npos);
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++count;
  CHECK(count == 2);
}

TEST_CASE("parallel_map keeps order and propagates errors") {
  const auto out = parallel_map(100, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
  CHECK_THROWS_AS(parallel_map(10,
                               [](std::size_t i) -> int {
                                 if (i == 7) throw std::runtime_error("x");
                                 return 0;
                               }),
                  std::runtime_error);
}

TEST_CASE("acceptance suites") {
  CHECK(suite_criteria("all").size() == 12);
  CHECK(suite_criteria("separatrix") == std::vector<int>{1});
  CHECK_THROWS_AS(suite_criteria("nope"), Error);
}
