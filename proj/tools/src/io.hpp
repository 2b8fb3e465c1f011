#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermoforge/approx.hpp"
#include "thermoforge/pressure.hpp"
#include "thermoforge/symbolic.hpp"

namespace thermoforge::cli {

using json = nlohmann::json;

inline constexpr int kCsvSchemaVersion = 1;

// Raw text of a named input plus its digest. "-" reads the given stream.
struct InputFile {
  std::string name;
  std::string text;
  std::string digest;
};

InputFile read_input(const std::string& path, std::istream& stdin_stream);

// FNV-1a, 64-bit, as 16 lowercase hex digits.
std::string fnv1a64_hex(const std::string& bytes);

// Accepts {"n", "window"?, "values", "transition"?} or any object carrying
// such a spec under "potential".
CylinderPotential potential_from_json(const json& j);
json potential_to_json(const CylinderPotential& potential);

// {"n", "r", "f": [[...], ...]}
DecayingPotentialSpec decay_spec_from_json(const json& j);

json jet_to_json(const TaylorJet& jet);

// "a:b:step", "a:b" (step 1) or a comma list.
std::vector<double> parse_grid(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);

// 17 significant digits.
std::string fmt17(double v);

struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> flags;
  std::map<std::string, std::string> inputs;  // name -> digest
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string seed_source;
  std::string version;

  json to_json() const;
};

// Table with a fixed, versioned column schema.
struct CsvTable {
  std::string schema;  // e.g. "table3"
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out, const RunManifest& manifest) const;
};

}  // namespace thermoforge::cli
