#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"

namespace mxsefl {
namespace {

using testing::additive;
using testing::assoc;
using testing::kFree;
using testing::part;

std::set<std::size_t> support_of(const AssociationFunction& f) {
  auto s = f.support();
  return {s.begin(), s.end()};
}

// Agent 0 holds {0} and prefers {1}; bundle 1 is free.
TEST(EnvyGraphBuild, SingleEdge) {
  const Instance inst = additive({{1, 2}, {0, 0}});
  const EnvyGraph g = build_envy_graph(inst, part({{0}, {1}}), assoc({0, kFree}));
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(is_source(g, 0));
  EXPECT_FALSE(is_source(g, 1));
}

TEST(EnvyGraphBuild, EqualValuesGiveNoEdges) {
  const Instance inst = additive({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  const EnvyGraph g = build_envy_graph(inst, part({{0}, {1}, {2}}), assoc({0, 1, 2}));
  EXPECT_EQ(g.edge_count(), 0u);
  for (std::size_t l = 0; l < 3; ++l) EXPECT_TRUE(is_source(g, l));
}

TEST(EnvyGraphBuild, MutualEnvyIsTwoCycle) {
  const Instance inst = additive({{0, 5, 1}, {5, 0, 1}, {1, 1, 1}});
  const EnvyGraph g = build_envy_graph(inst, part({{0}, {1}, {2}}), assoc({0, 1, 2}));
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_EQ(find_cycle(g), (std::vector<std::size_t>{0, 1}));
}

TEST(EnvyGraphBuild, SizeMismatch) {
  const Instance inst = additive({{1, 1}});
  try {
    build_envy_graph(inst, part({{0}, {1}}), assoc({0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(EliminateCycles, TwoCycleSwap) {
  const Instance inst = additive({{0, 5}, {5, 0}});
  const auto f = eliminate_cycles(inst, part({{0}, {1}}), assoc({0, 1}));
  EXPECT_EQ(f, assoc({1, 0}));
}

TEST(EliminateCycles, AcyclicUnchanged) {
  const Instance inst = additive({{5, 0}, {0, 5}});
  std::vector<std::vector<std::size_t>> rotated;
  const auto f = eliminate_cycles(inst, part({{0}, {1}}), assoc({0, 1}), &rotated);
  EXPECT_EQ(f, assoc({0, 1}));
  EXPECT_TRUE(rotated.empty());
}

// Bundle l's owner wants bundle l+1 (mod 3); one rotation settles it.
TEST(EliminateCycles, ThreeCycleRotatesOnce) {
  const Instance inst = additive({{0, 5, 0}, {0, 0, 5}, {5, 0, 0}});
  std::vector<std::vector<std::size_t>> rotated;
  const auto f = eliminate_cycles(inst, part({{0}, {1}, {2}}), assoc({0, 1, 2}), &rotated);
  EXPECT_EQ(f, assoc({2, 0, 1}));
  ASSERT_EQ(rotated.size(), 1u);
  EXPECT_EQ(rotated[0], (std::vector<std::size_t>{0, 1, 2}));
}

// Two disjoint 2-cycles need two rotations.
TEST(EliminateCycles, CapRaises) {
  const Instance inst = additive({{0, 5, 0, 0}, {5, 0, 0, 0}, {0, 0, 0, 5}, {0, 0, 5, 0}});
  const Partition x = part({{0}, {1}, {2}, {3}});
  EXPECT_EQ(eliminate_cycles(inst, x, assoc({0, 1, 2, 3}), nullptr, 2), assoc({1, 0, 3, 2}));
  try {
    eliminate_cycles(inst, x, assoc({0, 1, 2, 3}), nullptr, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IterationCapExceeded);
  }
}

// Three bundles: a -> b -> t and a -> t, where only bundle a (index 0) is a source.
struct Diamond {
  Instance inst = additive({{0, 1, 2}, {0, 1, 2}});
  Partition x = part({{0}, {1}, {2}});
  AssociationFunction f = assoc({0, 1, kFree});
};

TEST(Chains, NoEdgesGivesTrivialChain) {
  const Instance inst = additive({{1, 1}, {1, 1}});
  const auto cs = chains_to(inst, part({{0}, {1}}), assoc({0, kFree}), 1);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0], Subchain{1});
  EXPECT_EQ(any_chain_to(inst, part({{0}, {1}}), assoc({0, kFree}), 1), Subchain{1});
}

TEST(Chains, SingleEdge) {
  const Instance inst = additive({{1, 2}, {0, 0}});
  const auto cs = chains_to(inst, part({{0}, {1}}), assoc({0, kFree}), 1);
  EXPECT_EQ(cs, (std::vector<Subchain>{{0, 1}}));
}

TEST(Chains, DiamondEnumeratesBothAndPicksShortest) {
  const Diamond d;
  const auto cs = chains_to(d.inst, d.x, d.f, 2);
  EXPECT_EQ(cs, (std::vector<Subchain>{{0, 1, 2}, {0, 2}}));
  EXPECT_EQ(any_chain_to(d.inst, d.x, d.f, 2), (Subchain{0, 2}));
}

TEST(Chains, CycleReachingTargetRaises) {
  const Instance inst = additive({{0, 5, 6}, {5, 0, 6}});
  try {
    chains_to(inst, part({{0}, {1}, {2}}), assoc({0, 1, kFree}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CyclicGraph);
  }
}

// A 2-cycle elsewhere does not block a chain from a source.
TEST(Chains, AnyChainToleratesUnrelatedCycle) {
  const Instance inst = additive({{0, 5, 0, 0}, {5, 0, 0, 0}, {0, 0, 0, 1}});
  const auto c = any_chain_to(inst, part({{0}, {1}, {2}, {3}}), assoc({0, 1, 2, kFree}), 3);
  EXPECT_EQ(c, (Subchain{2, 3}));
}

TEST(Shift, LengthZeroFreesTarget) {
  const auto f = shift_subchain(assoc({0, 1}), {1});
  EXPECT_EQ(f, assoc({0, kFree}));
}

TEST(Shift, OneStep) {
  const auto f = shift_subchain(assoc({1, 0, kFree}), {0, 2});
  EXPECT_EQ(f, assoc({kFree, 0, 1}));
}

TEST(Shift, TwoSteps) {
  const auto f = shift_subchain(assoc({0, 1, kFree}), {0, 1, 2});
  EXPECT_EQ(f, assoc({kFree, 0, 1}));
}

TEST(Shift, Errors) {
  auto code_of = [](const AssociationFunction& f, const Subchain& c) {
    try {
      shift_subchain(f, c);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  EXPECT_EQ(code_of(assoc({0, kFree}), {}), ErrorCode::EmptyCollection);
  EXPECT_EQ(code_of(assoc({0, kFree}), {0, 5}), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of(assoc({kFree, 0, kFree}), {0, 1, 2}), ErrorCode::FreeInteriorVertex);
}

// Every n = 2 additive instance with m <= 4 and values in {0, 1, 2}, every
// 2-partition and every association function.
TEST(EnvyGraphExhaustive, EliminateCyclesAndShiftPostconditions) {
  const std::vector<AssociationFunction> assocs = {
      assoc({0, 1}), assoc({1, 0}), assoc({0, kFree}), assoc({kFree, 0}),
      assoc({1, kFree}), assoc({kFree, 1}), assoc({kFree, kFree})};
  std::size_t checked = 0;
  for (std::size_t m = 0; m <= 4; ++m) {
    const auto partitions = testing::all_partitions(m, 2);
    testing::for_each_small_additive(2, m, 2, [&](const Instance& inst) {
      for (const Partition& x : partitions) {
        for (const AssociationFunction& f0 : assocs) {
          const auto f = eliminate_cycles(inst, x, f0);
          ASSERT_TRUE(is_acyclic(build_envy_graph(inst, x, f)));
          ASSERT_EQ(support_of(f), support_of(f0));
          for (std::size_t l = 0; l < 2; ++l) {
            if (!f0[l]) continue;
            const AgentId a = *f0[l];
            ASSERT_GE(inst.value(a, x[*f.bundle_of(a)]), inst.value(a, x[l]));
          }
          for (std::size_t t = 0; t < 2; ++t) {
            for (const Subchain& c : chains_to(inst, x, f, t)) {
              const auto g = shift_subchain(f, c);
              auto expect = support_of(f);
              expect.insert(c.back());
              expect.erase(c.front());
              ASSERT_EQ(support_of(g), expect);
              ++checked;
            }
          }
        }
      }
    });
  }
  EXPECT_GT(checked, 0u);
}

}  // namespace
}  // namespace mxsefl
