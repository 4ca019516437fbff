/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <gtest/gtest.h>

#include "ffgmc/catalog.hpp"
#include "ffgmc/enumerator.hpp"

using namespace ffgmc;

TEST(Catalog, ValidGraphsBuild) {
  for (const auto &e : catalog()) {
    if (e.id == CatalogId::I1 || e.id == CatalogId::I2) {
      continue;
    }
    const auto f = catalog_forest(e.id);
    EXPECT_EQ(f.size(), e.n_nodes) << e.name;
    for (std::size_t i = 1; i < e.n_nodes; ++i) {
      EXPECT_EQ(f.block(BlockId{static_cast<std::uint32_t>(i)}).slot,
                e.levels[i])
          << e.name;
    }
    EXPECT_EQ(parse_catalog_id(e.name), e.id);
  }
}

TEST(Catalog, ConflictStructure) {
  EXPECT_FALSE(catalog_forest(CatalogId::SingleChain).has_conflicting_pair());
  for (auto id : {CatalogId::M3, CatalogId::M4a, CatalogId::M4b,
                  CatalogId::M5a, CatalogId::M5b, CatalogId::M7,
                  CatalogId::Forest}) {
    EXPECT_TRUE(catalog_forest(id).has_conflicting_pair()) << to_string(id);
  }
  const auto m3 = catalog_forest(CatalogId::M3);
  EXPECT_TRUE(m3.are_conflicting(BlockId{1}, BlockId{2}));
}

TEST(Catalog, ForestHasDetachedParts) {
  const auto f = catalog_forest(CatalogId::Forest);
  EXPECT_FALSE(f.block(BlockId{8}).parent);
  EXPECT_FALSE(f.block(BlockId{9}).parent);
  EXPECT_EQ(f.block(BlockId{10}).parent, BlockId{9});
  EXPECT_TRUE(f.are_conflicting(kGenesis, BlockId{8}));
  EXPECT_TRUE(f.is_ancestor(BlockId{5}, BlockId{7}));
}

TEST(Catalog, ImpossibleGraphsAreRejectedWithReason) {
  try {
    catalog_forest(CatalogId::I1);
    FAIL() << "I1 accepted";
  } catch (const CatalogRejection &e) {
    EXPECT_EQ(e.reason(), CatalogRejection::Reason::MultipleParents);
  }
  try {
    catalog_forest(CatalogId::I2);
    FAIL() << "I2 accepted";
  } catch (const CatalogRejection &e) {
    EXPECT_EQ(e.reason(), CatalogRejection::Reason::Cycle);
  }
  EXPECT_THROW(parse_catalog_id("m9"), InputError);
}

TEST(TwoChain, ShortcutMatchesForestAncestry) {
  for (Slot fork = 0; fork <= 3; ++fork) {
    for (std::size_t la = 0; la <= 3; ++la) {
      for (std::size_t lb = 0; lb <= 3; ++lb) {
        TwoChainConfig cfg{fork, la, lb};
        const auto tc = two_chain_forest(cfg);
        ASSERT_EQ(tc.forest.size(), 1 + fork + la + lb);
        for (std::uint32_t a = 0; a < tc.forest.size(); ++a) {
          for (std::uint32_t d = 0; d < tc.forest.size(); ++d) {
            ASSERT_EQ(two_chain_is_ancestor(cfg, tc.body[a], tc.body[d]),
                      tc.forest.is_ancestor(BlockId{a}, BlockId{d}))
                << "fork " << fork << " a " << tc.body[a] << " d "
                << tc.body[d];
          }
        }
      }
    }
  }
}

TEST(TwoChain, LabelsFlipSignOnTheSecondBranch) {
  const auto tc = two_chain_forest({1, 2, 1});
  EXPECT_TRUE(tc.forest.find("b1"));
  EXPECT_TRUE(tc.forest.find("b3"));
  EXPECT_TRUE(tc.forest.find("b2'"));
  EXPECT_TRUE(tc.forest.are_conflicting(tc.forest.id_of("b3"),
                                        tc.forest.id_of("b2'")));
}

TEST(TwoChain, StatesStayOnTheTwoChainForest) {
  Bounds b;
  b.n_validators = 3;
  b.max_ffg_votes = 2;
  b.max_votes = 3;
  TwoChainConfig cfg{0, 1, 1};
  const auto expected = two_chain_forest(cfg).forest;
  std::uint64_t seen = 0;
  const auto n = two_chain_states(cfg, b, [&](const ProtocolState &s) {
    ++seen;
    EXPECT_EQ(s.forest(), expected);
    return true;
  });
  EXPECT_EQ(n, seen);
  EXPECT_GT(n, 1u);
}
