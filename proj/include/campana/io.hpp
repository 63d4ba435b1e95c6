#pragma once

// Orbifold spec files and record output (JSON lines or CSV).

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "campana/errors.hpp"
#include "campana/orbifold.hpp"

namespace campana::io {

using Json = nlohmann::ordered_json;

/// A spec file that cannot be read or does not match the schema.
class SpecError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// {"k": int, "c": [int, ...], "m": [int, ...]}; unknown keys are rejected.
/// Throws SpecError with a description of the first problem found.
CampanaOrbifold parse_orbifold(const Json& j);
CampanaOrbifold load_orbifold(const std::string& path);
Json to_json(const CampanaOrbifold& O);

enum class Format { JsonLines, Csv };

Format parse_format(const std::string& s);

/// Writes one record per call. CSV columns come from the first record's
/// keys; nested values are serialised as compact JSON inside the cell.
class RecordWriter {
 public:
  RecordWriter(std::ostream& out, Format format) : out_(out), format_(format) {}
  void write(const Json& record);

 private:
  std::ostream& out_;
  Format format_;
  std::vector<std::string> columns_;
};

/// Shortest round-trip decimal for a double; JSON null for non-finite values.
Json number(double x);

}  // namespace campana::io
