#include "io.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "thermoforge/error.hpp"

namespace thermoforge::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double to_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw DomainError("not a number: '" + s + "'");
  return v;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw DomainError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DomainError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

InputFile read_input(const std::string& path, std::istream& stdin_stream) {
  InputFile f;
  f.name = path;
  if (path == "-") {
    f.text.assign(std::istreambuf_iterator<char>(stdin_stream), {});
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open input file " + path);
    f.text.assign(std::istreambuf_iterator<char>(in), {});
  }
  f.digest = "fnv1a64:" + fnv1a64_hex(f.text);
  return f;
}

CylinderPotential potential_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("potential spec must be a JSON object");
  if (j.contains("potential")) return potential_from_json(j.at("potential"));
  const auto n = field<std::size_t>(j, "n");
  const auto window = j.contains("window") ? field<std::size_t>(j, "window") : 1;
  auto values = field<std::vector<double>>(j, "values");
  if (j.contains("transition") && !j.at("transition").is_null()) {
    auto rows = field<std::vector<std::vector<int>>>(j, "transition");
    TransitionMatrix a(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (int v : rows[i]) {
        if (v != 0 && v != 1) throw DomainError("transition entries must be 0 or 1");
        a[i].push_back(static_cast<std::uint8_t>(v));
      }
    }
    return CylinderPotential(SubshiftSpec(n, std::move(a)), window,
                             std::move(values));
  }
  return CylinderPotential(SubshiftSpec(n), window, std::move(values));
}

json potential_to_json(const CylinderPotential& potential) {
  json j;
  j["n"] = potential.alphabet_size();
  j["window"] = potential.window();
  j["values"] = std::vector<double>(potential.values().begin(),
                                    potential.values().end());
  if (const auto& a = potential.space().transition()) {
    json rows = json::array();
    for (const auto& row : *a) {
      rows.push_back(std::vector<int>(row.begin(), row.end()));
    }
    j["transition"] = rows;
  }
  return j;
}

DecayingPotentialSpec decay_spec_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("decay spec must be a JSON object");
  return DecayingPotentialSpec(field<std::size_t>(j, "n"),
                               field<double>(j, "r"),
                               field<std::vector<std::vector<double>>>(j, "f"));
}

json jet_to_json(const TaylorJet& jet) {
  return json{{"t_star", jet.t_star}, {"derivs", jet.derivs}};
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_real_list(text);
  const auto parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3) {
    throw DomainError("grid must look like a:b or a:b:step");
  }
  const double a = to_real(parts[0]);
  const double b = to_real(parts[1]);
  const double step = parts.size() == 3 ? to_real(parts[2]) : 1.0;
  if (!(step > 0.0) || !(b >= a)) {
    throw DomainError("grid needs a <= b and a positive step");
  }
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 10000000) throw DomainError("grid has more than 10^7 points");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = a + static_cast<double>(i) * step;
  }
  return grid;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_real(p));
  if (out.empty()) throw DomainError("empty list");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_grid(text)) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
      throw DomainError("expected non-negative integers, got " + fmt17(v));
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

json RunManifest::to_json() const {
  json j;
  j["tool"] = "thermoforge";
  j["version"] = version;
  j["subcommand"] = subcommand;
  j["flags"] = flags;
  j["inputs"] = inputs;
  if (has_seed) {
    j["seed"] = seed;
    j["seed_source"] = seed_source;
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

void CsvTable::write(std::ostream& out, const RunManifest& manifest) const {
  out << "# thermoforge-csv " << schema << " v" << kCsvSchemaVersion << '\n';
  out << "# manifest " << manifest.to_json().dump() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << row[i];
    }
    out << '\n';
  }
}

}  // namespace thermoforge::cli
