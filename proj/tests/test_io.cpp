#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "campana/io.hpp"

using namespace campana;
using io::Json;

TEST_CASE("orbifold spec parsing") {
  const auto O = io::parse_orbifold(Json::parse(R"({"k": 2, "c": [1, 1, -2], "m": [2, 3, 2]})"));
  CHECK(O.form.k == 2);
  CHECK(O.form.c == std::vector<std::int64_t>{1, 1, -2});
  CHECK(O.weights.m == std::vector<int>{2, 3, 2});
  CHECK(io::parse_orbifold(io::to_json(O)).weights.m == O.weights.m);
  CHECK(io::to_json(O).dump() == R"({"k":2,"c":[1,1,-2],"m":[2,3,2]})");

  for (const char* bad : {R"({"k": 2, "c": [1, -1]})", R"({"k": 2, "c": [1, -1], "m": [2, 2], "x": 1})",
                          R"({"k": "2", "c": [1, -1], "m": [2, 2]})", R"({"k": 2, "c": [2, -4], "m": [2, 2]})",
                          R"({"k": 2, "c": [1, -1], "m": [2]})", R"({"k": 2, "c": [1, -1], "m": [2, 1]})",
                          R"([1, 2, 3])", R"({"k": 2, "c": [1.5, -1], "m": [2, 2]})"}) {
    CHECK_THROWS_AS(io::parse_orbifold(Json::parse(bad)), io::SpecError);
  }
  CHECK_THROWS_AS(io::load_orbifold("/nonexistent/spec.json"), io::SpecError);
}

TEST_CASE("spec files") {
  const std::string path = "io_test_spec.json";
  {
    std::ofstream f(path);
    f << R"({"k": 3, "c": [1, -1, 2], "m": [2, 2, 4]})";
  }
  CHECK(io::load_orbifold(path).weights.m == std::vector<int>{2, 2, 4});
  {
    std::ofstream f(path);
    f << "{not json";
  }
  CHECK_THROWS_AS(io::load_orbifold(path), io::SpecError);
  std::remove(path.c_str());
}

TEST_CASE("formats") {
  CHECK(io::parse_format("json") == io::Format::JsonLines);
  CHECK(io::parse_format("jsonl") == io::Format::JsonLines);
  CHECK(io::parse_format("csv") == io::Format::Csv);
  CHECK_THROWS(io::parse_format("xml"));
}

TEST_CASE("record writer") {
  Json a;
  a["B"] = 10;
  a["count"] = 4;
  a["config"] = {{"k", 2}};
  a["note"] = "x,y";
  Json b = a;
  b["B"] = 20;
  std::ostringstream jl;
  io::RecordWriter wj(jl, io::Format::JsonLines);
  wj.write(a);
  wj.write(b);
  std::istringstream in(jl.str());
  std::string line;
  std::getline(in, line);
  CHECK(Json::parse(line) == a);
  std::getline(in, line);
  CHECK(Json::parse(line)["B"] == 20);

  std::ostringstream csv;
  io::RecordWriter wc(csv, io::Format::Csv);
  wc.write(a);
  wc.write(b);
  std::istringstream cin(csv.str());
  std::getline(cin, line);
  CHECK(line == "B,count,config,note");
  std::getline(cin, line);
  CHECK(line == R"(10,4,"{""k"":2}","x,y")");
}

TEST_CASE("numbers") {
  CHECK(io::number(0.1).dump() == "0.1");
  CHECK(io::number(std::nan("")).is_null());
  CHECK(io::number(INFINITY).is_null());
}
