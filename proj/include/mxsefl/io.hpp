#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mxsefl/codec.hpp"
#include "mxsefl/error.hpp"
#include "mxsefl/partition.hpp"
#include "mxsefl/valuation.hpp"

namespace mxsefl::io {

using Json = codec::Json;

inline constexpr int kFormatVersion = 1;

// Instance files:
//   {"version": 1, "n": 2, "m": 3,
//    "valuations": [{"type": "additive", "values": [4, 3, "1/2"]},
//                   {"type": "budget_additive", "values": [...], "budget": 5},
//                   {"type": "table", "table": [{"bundle": [0, 2], "value": 3}, ...]}]}

inline Json instance_to_json(const Instance& inst) {
  Json out;
  out["version"] = kFormatVersion;
  out["n"] = inst.agents();
  out["m"] = inst.goods();
  Json vals = Json::array();
  for (const Valuation& v : inst.valuations()) {
    Json j;
    j["type"] = std::string(to_string(v.kind()));
    if (v.kind() == ValuationKind::Table) {
      Json table = Json::array();
      for (const auto& [mask, value] : v.entries()) {
        table.push_back({{"bundle", codec::bundle(Bundle(mask))}, {"value", codec::rational(value)}});
      }
      j["table"] = std::move(table);
    } else {
      Json values = Json::array();
      for (const Rational& r : v.per_good()) values.push_back(codec::rational(r));
      j["values"] = std::move(values);
      if (v.kind() == ValuationKind::BudgetAdditive) j["budget"] = codec::rational(v.budget());
    }
    vals.push_back(std::move(j));
  }
  out["valuations"] = std::move(vals);
  return out;
}

inline Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "instance must be a JSON object");
  if (j.value("version", -1) != kFormatVersion) throw Error(ErrorCode::ParseError, "unsupported instance version");
  if (!j.contains("n") || !j["n"].is_number_unsigned() || !j.contains("m") || !j["m"].is_number_unsigned()) {
    throw Error(ErrorCode::ParseError, "instance needs nonnegative integers n and m");
  }
  const auto n = j["n"].get<std::size_t>();
  const auto m = j["m"].get<std::size_t>();
  if (m > kMaxGoods) throw Error(ErrorCode::InstanceTooLarge, "more than 64 goods");
  if (!j.contains("valuations") || !j["valuations"].is_array() || j["valuations"].size() != n) {
    throw Error(ErrorCode::ParseError, "valuations must be an array of n entries");
  }
  std::vector<Valuation> vals;
  for (const Json& v : j["valuations"]) {
    if (!v.is_object() || !v.contains("type") || !v["type"].is_string()) {
      throw Error(ErrorCode::ParseError, "valuation needs a string type");
    }
    ValuationKind kind;
    try {
      kind = parse_valuation_kind(v["type"].get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    if (kind == ValuationKind::Table) {
      if (!v.contains("table") || !v["table"].is_array()) throw Error(ErrorCode::ParseError, "table valuation needs a table");
      std::map<std::uint64_t, Rational> table;
      for (const Json& entry : v["table"]) {
        if (!entry.is_object() || !entry.contains("bundle") || !entry.contains("value")) {
          throw Error(ErrorCode::ParseError, "table entries need bundle and value");
        }
        const Bundle b = codec::bundle(entry["bundle"], m);
        if (!table.emplace(b.mask(), codec::rational(entry["value"])).second) {
          throw Error(ErrorCode::ParseError, "table lists bundle " + b.str() + " twice");
        }
      }
      vals.push_back(Valuation::table(m, std::move(table)));
      continue;
    }
    if (!v.contains("values") || !v["values"].is_array() || v["values"].size() != m) {
      throw Error(ErrorCode::ParseError, "values must be an array of m entries");
    }
    std::vector<Rational> values;
    for (const Json& x : v["values"]) values.push_back(codec::rational(x));
    switch (kind) {
      case ValuationKind::Additive: vals.push_back(Valuation::additive(std::move(values))); break;
      case ValuationKind::BudgetAdditive:
        if (!v.contains("budget")) throw Error(ErrorCode::ParseError, "budget_additive valuation needs a budget");
        vals.push_back(Valuation::budget_additive(std::move(values), codec::rational(v["budget"])));
        break;
      case ValuationKind::UnitDemand: vals.push_back(Valuation::unit_demand(std::move(values))); break;
      case ValuationKind::Multiplicative: vals.push_back(Valuation::multiplicative(std::move(values))); break;
      case ValuationKind::Table: break;
    }
  }
  return Instance(m, std::move(vals));
}

// Allocation files: {"version": 1, "bundles": [[0, 2], [1]], "assoc": [1, 0]}

inline Json allocation_to_json(const Allocation& a) {
  Json out;
  out["version"] = kFormatVersion;
  out["bundles"] = codec::partition(a.partition);
  out["assoc"] = codec::assoc(a.assoc);
  return out;
}

/// Parses and validates against the instance: bundles partition the goods and
/// assoc has one entry per bundle.
inline Allocation allocation_from_json(const Json& j, const Instance& inst) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "allocation must be a JSON object");
  if (j.value("version", -1) != kFormatVersion) throw Error(ErrorCode::ParseError, "unsupported allocation version");
  if (!j.contains("bundles") || !j["bundles"].is_array() || !j.contains("assoc")) {
    throw Error(ErrorCode::ParseError, "allocation needs bundles and assoc");
  }
  std::vector<Bundle> bundles;
  for (const Json& b : j["bundles"]) bundles.push_back(codec::bundle(b, inst.goods()));
  Partition x;
  try {
    x = Partition::checked(std::move(bundles), inst.goods());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  AssociationFunction f;
  try {
    f = codec::assoc(j["assoc"], inst.agents());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (f.size() != x.size()) throw Error(ErrorCode::ParseError, "assoc length differs from bundle count");
  return {std::move(x), std::move(f)};
}

// ---------------------------------------------------------------------------
// Files

/// Canonical text form: two-space indentation and a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::ParseError, "write to " + path + " failed");
}

inline Json parse(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, origin + ": " + e.what());
  }
}

inline Instance read_instance(const std::string& path) { return instance_from_json(parse(read_text(path), path)); }

inline Allocation read_allocation(const std::string& path, const Instance& inst) {
  return allocation_from_json(parse(read_text(path), path), inst);
}

}  // namespace mxsefl::io
