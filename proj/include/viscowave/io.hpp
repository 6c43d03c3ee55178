#pragma once

// JSON and CSV interchange: measures, laws, material models, verdicts and spectra; CSV tables
// with '#' metadata lines; FNV-1a configuration hashes.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "viscowave/causality.hpp"
#include "viscowave/error.hpp"
#include "viscowave/fit.hpp"
#include "viscowave/law.hpp"
#include "viscowave/measure.hpp"
#include "viscowave/model.hpp"

#ifndef VISCOWAVE_VERSION_STRING
#define VISCOWAVE_VERSION_STRING "0.1.0"
#endif

namespace viscowave {

using json = nlohmann::json;

inline constexpr const char* kVersion = VISCOWAVE_VERSION_STRING;

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

/// Hash of a configuration object in its canonical (sorted-key, compact) dump.
inline std::string config_hash(const json& config) { return hash_hex(fnv1a64(config.dump())); }

inline std::string metadata_line(const std::string& hash) {
  return std::string("# viscowave ") + kVersion + " config=" + hash;
}

namespace detail {

inline double get_number(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw InvalidArgument(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

inline double get_number_or(const json& j, const char* key, double def) {
  return j.contains(key) && !j.at(key).is_null() ? get_number(j, key) : def;
}

}  // namespace detail

// ---- measures ----

inline json to_json(const SpectralMeasure& m) {
  json j;
  j["atoms"] = json::array();
  for (const auto& a : m.atoms) j["atoms"].push_back({{"r", a.location}, {"c", a.weight}});
  if (!m.density) {
    j["density"] = nullptr;
  } else if (const auto* pl = std::get_if<PowerLawDensity>(&*m.density)) {
    j["density"] = {{"type", "power"}, {"a", pl->a}, {"alpha", pl->alpha}};
  } else {
    const auto& t = std::get<TabulatedDensity>(*m.density);
    json pts = json::array();
    for (std::size_t i = 0; i < t.xi.size(); ++i) pts.push_back({t.xi[i], t.value[i]});
    j["density"] = {{"type", "table"}, {"points", pts}};
    j["density"]["tail_exponent"] = t.tail_exponent ? json(*t.tail_exponent) : json(nullptr);
  }
  return j;
}

inline SpectralMeasure measure_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("measure must be a JSON object");
  SpectralMeasure m;
  if (j.contains("atoms") && !j.at("atoms").is_null()) {
    if (!j.at("atoms").is_array()) throw InvalidArgument("'atoms' must be an array");
    for (const auto& a : j.at("atoms"))
      m.atoms.push_back({detail::get_number(a, "r"), detail::get_number(a, "c")});
  }
  if (j.contains("density") && !j.at("density").is_null()) {
    const auto& d = j.at("density");
    const std::string type = d.is_object() ? d.value("type", "") : "";
    if (type == "power") {
      m.density = PowerLawDensity{detail::get_number(d, "a"), detail::get_number(d, "alpha")};
    } else if (type == "table") {
      TabulatedDensity t;
      if (!d.contains("points") || !d.at("points").is_array())
        throw InvalidArgument("table density needs a 'points' array");
      for (const auto& p : d.at("points")) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          throw InvalidArgument("table density points must be [xi, value] pairs");
        t.xi.push_back(p[0].get<double>());
        t.value.push_back(p[1].get<double>());
      }
      if (d.contains("tail_exponent") && !d.at("tail_exponent").is_null())
        t.tail_exponent = detail::get_number(d, "tail_exponent");
      m.density = t;
    } else {
      throw InvalidArgument("unknown density type '" + type + "'");
    }
  }
  m.validate();
  return m;
}

// ---- laws ----

inline json to_json(const AttenuationLaw& law) {
  json j = std::visit(
      overloaded{[](const MeasureBacked& l) { return json{{"nu", to_json(l.nu)}}; },
                 [](const PowerLaw& l) { return json{{"a", l.a}, {"alpha", l.alpha}}; },
                 [](const LogPower& l) { return json{{"alpha", l.alpha}}; },
                 [](const ColeType& l) { return json{{"c", l.c}, {"a", l.a}, {"alpha", l.alpha}}; },
                 [](const TwoExponent& l) {
                   return json{{"c", l.c}, {"tau", l.tau}, {"alpha", l.alpha}, {"beta", l.beta}};
                 }},
      law);
  j["type"] = law_tag(law);
  return j;
}

inline AttenuationLaw law_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw InvalidArgument("law must be an object with a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  using detail::get_number;
  AttenuationLaw law;
  if (type == "measure") {
    if (!j.contains("nu")) throw InvalidArgument("measure law needs 'nu'");
    law = MeasureBacked{measure_from_json(j.at("nu"))};
  } else if (type == "power") {
    law = PowerLaw{get_number(j, "a"), get_number(j, "alpha")};
  } else if (type == "log_power") {
    law = LogPower{get_number(j, "alpha")};
  } else if (type == "cole") {
    law = ColeType{get_number(j, "c"), get_number(j, "a"), get_number(j, "alpha")};
  } else if (type == "two_exponent") {
    law = TwoExponent{get_number(j, "c"), get_number(j, "tau"), get_number(j, "alpha"),
                      get_number(j, "beta")};
  } else {
    throw InvalidArgument("unknown law type '" + type + "'");
  }
  validate(law);
  return law;
}

// ---- material models ----

inline json to_json(const MaterialModel& m) {
  json j;
  j["rho"] = m.rho;
  j["c0"] = m.c0;
  j["law"] = m.law ? to_json(*m.law) : json(nullptr);
  j["mu"] = m.mu ? to_json(*m.mu) : json(nullptr);
  j["mu0"] = m.mu0;
  return j;
}

inline MaterialModel model_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("model must be a JSON object");
  MaterialModel m;
  m.rho = detail::get_number(j, "rho");
  m.c0 = detail::get_number(j, "c0");
  if (j.contains("law") && !j.at("law").is_null()) m.law = law_from_json(j.at("law"));
  if (j.contains("mu") && !j.at("mu").is_null()) m.mu = measure_from_json(j.at("mu"));
  m.mu0 = detail::get_number_or(j, "mu0", 0.0);
  m.validate();
  return m;
}

// ---- verdicts ----

inline json to_json(const CausalityVerdict& v) {
  json j;
  j["class"] = to_string(v.classification);
  j["pw_value"] = std::isfinite(v.pw.value) ? json(v.pw.value) : json("inf");
  j["tail"] = {{"C", v.pw.tail.C}, {"s", v.pw.tail.s}, {"q", v.pw.tail.q}};
  j["notes"] = v.notes;
  return j;
}

// ---- spectra ----

inline json to_json(const RationalSpectrum& s, const std::vector<std::string>& diagnostics = {}) {
  json j = to_json(s.measure());
  j["side"] = to_string(s.side);
  if (s.side == SpectrumSide::relaxation) j["mu0"] = s.mu0;
  j["diagnostics"] = {{"messages", diagnostics}};
  return j;
}

inline RationalSpectrum spectrum_from_json(const json& j) {
  RationalSpectrum s;
  const SpectralMeasure m = measure_from_json(j);
  if (m.density) throw InvalidArgument("spectrum must be atomic (density must be null)");
  s.atoms = m.atoms;
  const std::string side = j.value("side", "attenuation");
  if (side == "attenuation") {
    s.side = SpectrumSide::attenuation;
  } else if (side == "relaxation") {
    s.side = SpectrumSide::relaxation;
    s.mu0 = detail::get_number_or(j, "mu0", 0.0);
    if (!(s.mu0 >= 0.0)) throw InvalidArgument("spectrum mu0 must be >= 0");
  } else {
    throw InvalidArgument("unknown spectrum side '" + side + "'");
  }
  return s;
}

// ---- files ----

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("'" + path + "': " + e.what());
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw InvalidArgument("CSV column '" + name + "' not found");
  }
  bool has_column(const std::string& name) const {
    for (const auto& h : header)
      if (h == name) return true;
    return false;
  }
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

/// Reads a CSV file with a header row; lines starting with '#' are kept as comments.
inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') {
      t.comments.push_back(line);
      continue;
    }
    auto cells = detail::split_csv(line);
    if (t.header.empty()) {
      t.header = cells;
      continue;
    }
    if (cells.size() != t.header.size())
      throw InvalidArgument("CSV line " + std::to_string(lineno) + ": expected " +
                            std::to_string(t.header.size()) + " fields");
    std::vector<double> row;
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != c.size())
        throw InvalidArgument("CSV line " + std::to_string(lineno) + ": bad number '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_csv(in);
}

inline void write_csv(std::ostream& out, const std::string& metadata,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  out << metadata << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  out << os.str();
}

/// Attenuation samples from a CSV with columns omega, attenuation[, weight].
inline AttenuationSamples samples_from_csv(const CsvTable& t) {
  if (t.header.empty() || t.rows.empty()) throw InvalidArgument("samples file has no data rows");
  const auto io = t.column("omega");
  const auto ia = t.column("attenuation");
  const bool w = t.has_column("weight");
  const auto iw = w ? t.column("weight") : 0;
  AttenuationSamples s;
  for (const auto& r : t.rows) {
    s.omega.push_back(r[io]);
    s.attenuation.push_back(r[ia]);
    if (w) s.weight.push_back(r[iw]);
  }
  s.validate();
  return s;
}

}  // namespace viscowave
