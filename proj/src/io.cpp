#include "campana/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "campana/errors.hpp"

namespace campana::io {

namespace {

std::vector<std::int64_t> int_array(const Json& j, const char* key) {
  if (!j.contains(key)) throw SpecError(std::string("orbifold spec: missing \"") + key + "\"");
  const auto& a = j.at(key);
  if (!a.is_array() || a.empty()) throw SpecError(std::string("orbifold spec: \"") + key + "\" must be a nonempty array");
  std::vector<std::int64_t> out;
  for (const auto& v : a) {
    if (!v.is_number_integer()) throw SpecError(std::string("orbifold spec: \"") + key + "\" entries must be integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

CampanaOrbifold parse_orbifold(const Json& j) {
  if (!j.is_object()) throw SpecError("orbifold spec: expected a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "k" && key != "c" && key != "m") throw SpecError("orbifold spec: unknown key \"" + key + "\"");
  if (!j.contains("k") || !j.at("k").is_number_integer()) throw SpecError("orbifold spec: \"k\" must be an integer");
  CampanaOrbifold O;
  O.form.k = j.at("k").get<int>();
  O.form.c = int_array(j, "c");
  for (auto m : int_array(j, "m")) O.weights.m.push_back(static_cast<int>(m));
  try {
    O.validate();
  } catch (const DomainError& e) {
    throw SpecError(std::string("orbifold spec: ") + e.what());
  }
  return O;
}

CampanaOrbifold load_orbifold(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open orbifold spec " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw SpecError("orbifold spec " + path + ": " + e.what());
  }
  return parse_orbifold(j);
}

Json to_json(const CampanaOrbifold& O) {
  return Json{{"k", O.form.k}, {"c", O.form.c}, {"m", O.weights.m}};
}

Format parse_format(const std::string& s) {
  if (s == "json" || s == "jsonl" || s == "json-lines") return Format::JsonLines;
  if (s == "csv") return Format::Csv;
  throw DomainError("unknown output format " + s);
}

void RecordWriter::write(const Json& record) {
  if (format_ == Format::JsonLines) {
    out_ << record.dump() << '\n';
    return;
  }
  if (columns_.empty()) {
    for (const auto& [key, value] : record.items()) columns_.push_back(key);
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << csv_cell(Json(columns_[i]));
    out_ << '\n';
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    out_ << (i ? "," : "");
    if (record.contains(columns_[i])) out_ << csv_cell(record.at(columns_[i]));
  }
  out_ << '\n';
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace campana::io
