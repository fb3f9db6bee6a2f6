#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mxsefl/bundle.hpp"
#include "mxsefl/error.hpp"
#include "mxsefl/partition.hpp"
#include "mxsefl/rational.hpp"

namespace mxsefl::codec {

using Json = nlohmann::ordered_json;

/// Integers stay integers; anything else becomes "p/q".
inline Json rational(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.str();
}

inline Rational rational(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw Error(ErrorCode::ParseError, "expected an integer or a \"p/q\" string, got " + j.dump());
}

inline Json bundle(Bundle b) {
  Json out = Json::array();
  for (GoodId g : b) out.push_back(g);
  return out;
}

inline Bundle bundle(const Json& j, std::size_t m) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "bundle must be an array of good ids");
  Bundle out;
  for (const Json& g : j) {
    if (!g.is_number_unsigned()) throw Error(ErrorCode::ParseError, "good id must be a nonnegative integer");
    const auto id = g.get<std::uint64_t>();
    if (id >= m) throw Error(ErrorCode::ParseError, "good id " + std::to_string(id) + " out of range");
    if (out.contains(static_cast<GoodId>(id))) {
      throw Error(ErrorCode::ParseError, "good id " + std::to_string(id) + " repeated");
    }
    out.insert(static_cast<GoodId>(id));
  }
  return out;
}

inline Json partition(const Partition& x) {
  Json out = Json::array();
  for (Bundle b : x) out.push_back(bundle(b));
  return out;
}

inline Json assoc(const AssociationFunction& f) {
  Json out = Json::array();
  for (const auto& a : f.raw()) {
    if (a) {
      out.push_back(*a);
    } else {
      out.push_back(nullptr);
    }
  }
  return out;
}

inline AssociationFunction assoc(const Json& j, std::size_t n) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "assoc must be an array");
  std::vector<std::optional<AgentId>> raw;
  for (const Json& a : j) {
    if (a.is_null()) {
      raw.emplace_back();
    } else if (a.is_number_unsigned() && a.get<std::uint64_t>() < n) {
      raw.emplace_back(static_cast<AgentId>(a.get<std::uint64_t>()));
    } else {
      throw Error(ErrorCode::ParseError, "bad agent id " + a.dump());
    }
  }
  return AssociationFunction(std::move(raw));
}

inline Json subchain(const std::vector<std::size_t>& c) {
  Json out = Json::array();
  for (std::size_t v : c) out.push_back(v);
  return out;
}

}  // namespace mxsefl::codec
