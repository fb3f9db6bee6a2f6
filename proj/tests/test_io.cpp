#include <gtest/gtest.h>

#include <filesystem>

#include "helpers.hpp"

namespace mxsefl {
namespace {

using testing::additive;
using testing::assoc;
using testing::part;

ErrorCode parse_code(const std::string& text) {
  try {
    io::instance_from_json(io::parse(text, "test"));
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ArithmeticOverflow;  // sentinel: nothing thrown
}

TEST(Codec, Rational) {
  EXPECT_EQ(codec::rational(Rational(3)), codec::Json(3));
  EXPECT_EQ(codec::rational(Rational(1, 2)), codec::Json("1/2"));
  EXPECT_EQ(codec::rational(codec::Json(7)), Rational(7));
  EXPECT_EQ(codec::rational(codec::Json("-2/4")), Rational(-1, 2));
  EXPECT_THROW(codec::rational(codec::Json(1.5)), Error);
  EXPECT_THROW(codec::rational(codec::Json::array()), Error);
}

TEST(Codec, BundleAndAssoc) {
  EXPECT_EQ(codec::bundle(Bundle{0, 3}), codec::Json::parse("[0,3]"));
  EXPECT_EQ(codec::bundle(codec::Json::parse("[3,0]"), 4), (Bundle{0, 3}));
  EXPECT_THROW(codec::bundle(codec::Json::parse("[4]"), 4), Error);
  EXPECT_THROW(codec::bundle(codec::Json::parse("[1,1]"), 4), Error);
  EXPECT_EQ(codec::assoc(assoc({1, testing::kFree})), codec::Json::parse("[1,null]"));
  EXPECT_EQ(codec::assoc(codec::Json::parse("[1,null]"), 2), assoc({1, testing::kFree}));
  EXPECT_THROW(codec::assoc(codec::Json::parse("[2]"), 2), Error);
}

TEST(InstanceFile, RoundTripEveryKind) {
  std::map<std::uint64_t, Rational> t{{0b00, 0}, {0b01, Rational(1, 2)}, {0b10, 1}, {0b11, 2}};
  const Instance inst(2, {Valuation::additive({Rational(1, 3), Rational(2)}),
                          Valuation::budget_additive(testing::ints({3, 4}), Rational(5, 2)),
                          Valuation::unit_demand(testing::ints({0, 9})),
                          Valuation::multiplicative(testing::ints({1, 3})), Valuation::table(2, t)});
  const std::string text = io::dump(io::instance_to_json(inst));
  const Instance back = io::instance_from_json(io::parse(text, "test"));
  EXPECT_EQ(io::dump(io::instance_to_json(back)), text);
  for (AgentId i = 0; i < 5; ++i) {
    EXPECT_EQ(back.valuation(i).kind(), inst.valuation(i).kind());
    for (std::uint64_t mask = 0; mask < 4; ++mask) EXPECT_EQ(back.value(i, Bundle(mask)), inst.value(i, Bundle(mask)));
  }
}

TEST(InstanceFile, CanonicalLayout) {
  const std::string text = io::dump(io::instance_to_json(additive({{4, 3, 1}, {1, 2, 5}})));
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.rfind("{\n  \"version\": 1,\n  \"n\": 2,\n  \"m\": 3,", 0), 0u);
}

TEST(InstanceFile, ParseErrors) {
  EXPECT_EQ(parse_code("{"), ErrorCode::ParseError);
  EXPECT_EQ(parse_code("[]"), ErrorCode::ParseError);
  EXPECT_EQ(parse_code(R"({"version": 2, "n": 1, "m": 0, "valuations": [{"type": "additive", "values": []}]})"),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_code(R"({"version": 1, "n": 2, "m": 1, "valuations": [{"type": "additive", "values": [1]}]})"),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_code(R"({"version": 1, "n": 1, "m": 2, "valuations": [{"type": "additive", "values": [1]}]})"),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_code(R"({"version": 1, "n": 1, "m": 1, "valuations": [{"type": "weird", "values": [1]}]})"),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_code(R"({"version": 1, "n": 1, "m": 1, "valuations": [{"type": "budget_additive", "values": [1]}]})"),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_code(R"({"version": 1, "n": 1, "m": 1, "valuations": [{"type": "additive", "values": [-1]}]})"),
            ErrorCode::InvalidValuation);
  EXPECT_EQ(parse_code(R"({"version": 1, "n": 1, "m": 65, "valuations": [{"type": "additive", "values": []}]})"),
            ErrorCode::InstanceTooLarge);
  EXPECT_EQ(parse_code(R"({"version": 1, "n": 1, "m": 1, "valuations": [{"type": "table",
            "table": [{"bundle": [0], "value": 1}, {"bundle": [0], "value": 2}]}]})"),
            ErrorCode::ParseError);
}

TEST(AllocationFile, RoundTrip) {
  const Instance inst = additive({{4, 3, 1}, {1, 2, 5}});
  const Allocation a{part({{0}, {1, 2}}), assoc({1, 0})};
  const std::string text = io::dump(io::allocation_to_json(a));
  EXPECT_EQ(io::allocation_from_json(io::parse(text, "test"), inst), a);
}

TEST(AllocationFile, ParseErrors) {
  const Instance inst = additive({{4, 3, 1}, {1, 2, 5}});
  auto code_of = [&](const std::string& text) {
    try {
      io::allocation_from_json(io::parse(text, "test"), inst);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ArithmeticOverflow;
  };
  EXPECT_EQ(code_of(R"({"version": 1, "bundles": [[0], [1]], "assoc": [0, 1]})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"version": 1, "bundles": [[0, 1], [1, 2]], "assoc": [0, 1]})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"version": 1, "bundles": [[0], [1, 2]], "assoc": [0]})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"version": 1, "bundles": [[0], [1, 2]], "assoc": [0, 0]})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"version": 1, "bundles": [[0], [1, 2]], "assoc": [0, 5]})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"bundles": [[0], [1, 2]], "assoc": [0, 1]})"), ErrorCode::ParseError);
}

TEST(Files, WriteThenRead) {
  const auto path = std::filesystem::temp_directory_path() / "mxsefl_io_test.json";
  const Instance inst = additive({{4, 3, 1}, {1, 2, 5}});
  io::write_text(path.string(), io::dump(io::instance_to_json(inst)));
  EXPECT_EQ(io::dump(io::instance_to_json(io::read_instance(path.string()))),
            io::dump(io::instance_to_json(inst)));
  std::filesystem::remove(path);
  EXPECT_THROW(io::read_text(path.string()), Error);
}

TEST(Files, SampleInstancesParse) {
  const auto dir = std::filesystem::path(MXSEFL_SOURCE_DIR) / "samples";
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(io::read_instance(entry.path().string())) << entry.path();
    ++seen;
  }
  EXPECT_GT(seen, 0u);
}

}  // namespace
}  // namespace mxsefl
