/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ffgmc/catalog.hpp"

#include <cstdlib>

#include <fmt/format.h>

#include "ffgmc/enumerator.hpp"

namespace ffgmc {

  namespace {

    std::vector<CatalogEntry> build_catalog() {
      using E = CatalogEdge;
      return {
          {CatalogId::M3,
           "m3",
           "short fork: genesis with two conflicting children",
           3,
           {E{1, 0}, E{2, 0}},
           {0, 1, 1}},
          {CatalogId::M4a,
           "m4a",
           "four blocks: upper branch of length 2, lower of length 1",
           4,
           {E{1, 0}, E{2, 1}, E{3, 0}},
           {0, 1, 2, 1}},
          {CatalogId::M4b,
           "m4b",
           "four blocks: upper branch of length 1, lower of length 2",
           4,
           {E{1, 0}, E{2, 0}, E{3, 2}},
           {0, 1, 1, 2}},
          {CatalogId::M5a,
           "m5a",
           "five blocks: two branches of length 2 forking at genesis",
           5,
           {E{1, 0}, E{2, 1}, E{3, 0}, E{4, 3}},
           {0, 1, 2, 1, 2}},
          {CatalogId::M5b,
           "m5b",
           "fork after one shared block: two children of b1",
           4,
           {E{1, 0}, E{2, 1}, E{3, 1}},
           {0, 1, 2, 2}},
          {CatalogId::M7,
           "m7",
           "seven blocks: two branches of length 3 forking at genesis",
           7,
           {E{1, 0}, E{2, 1}, E{3, 2}, E{4, 0}, E{5, 4}, E{6, 5}},
           {0, 1, 2, 3, 1, 2, 3}},
          {CatalogId::SingleChain,
           "single-chain",
           "a single chain of five blocks",
           5,
           {E{1, 0}, E{2, 1}, E{3, 2}, E{4, 3}},
           {0, 1, 2, 3, 4}},
          {CatalogId::Forest,
           "forest",
           "genesis tree with branches of 4 and 3 blocks, an isolated block "
           "and a detached 2-chain",
           11,
           {E{1, 0},
            E{2, 1},
            E{3, 2},
            E{4, 3},
            E{5, 0},
            E{6, 5},
            E{7, 6},
            E{10, 9}},
           {0, 1, 2, 3, 4, 1, 2, 3, 1, 1, 2}},
          {CatalogId::I1,
           "i1",
           "impossible: block with two parents",
           4,
           {E{1, 0}, E{2, 1}, E{3, 2}, E{3, 1}},
           {0, 1, 2, 3}},
          {CatalogId::I2,
           "i2",
           "impossible: parent loop",
           4,
           {E{1, 0}, E{2, 1}, E{3, 2}, E{1, 3}},
           {0, 1, 2, 3}},
      };
    }

  }  // namespace

  const std::vector<CatalogEntry> &catalog() {
    static const std::vector<CatalogEntry> entries = build_catalog();
    return entries;
  }

  const CatalogEntry &catalog_entry(CatalogId id) {
    for (const auto &e : catalog()) {
      if (e.id == id) {
        return e;
      }
    }
    throw InputError("unknown catalog id");
  }

  std::string_view to_string(CatalogId id) {
    return catalog_entry(id).name;
  }

  CatalogId parse_catalog_id(std::string_view text) {
    for (const auto &e : catalog()) {
      if (e.name == text) {
        return e.id;
      }
    }
    throw InputError(fmt::format("unknown graph '{}' (expected one of m3, "
                                 "m4a, m4b, m5a, m5b, m7, single-chain, "
                                 "forest, i1, i2)",
                                 text));
  }

  BlockForest forest_from_edges(std::size_t n_nodes,
                                const std::vector<CatalogEdge> &edges,
                                const std::vector<Slot> &levels) {
    if (n_nodes == 0 || levels.size() != n_nodes) {
      throw InputError("edge list needs one level per node");
    }
    std::vector<std::vector<std::size_t>> parents(n_nodes);
    for (const auto &e : edges) {
      if (e.child >= n_nodes || e.parent >= n_nodes) {
        throw InputError("edge endpoint out of range");
      }
      parents[e.child].push_back(e.parent);
    }

    // Cycle check over the child -> parent graph (colour DFS).
    std::vector<int> colour(n_nodes, 0);
    std::function<bool(std::size_t)> has_cycle = [&](std::size_t v) {
      colour[v] = 1;
      for (auto p : parents[v]) {
        if (colour[p] == 1 || (colour[p] == 0 && has_cycle(p))) {
          return true;
        }
      }
      colour[v] = 2;
      return false;
    };
    for (std::size_t v = 0; v < n_nodes; ++v) {
      if (colour[v] == 0 && has_cycle(v)) {
        throw CatalogRejection(
            CatalogRejection::Reason::Cycle,
            fmt::format("cycle detected: parent links through b{} loop", v));
      }
    }

    if (!parents[0].empty()) {
      throw CatalogRejection(CatalogRejection::Reason::MultipleParents,
                             "genesis must not have a parent");
    }
    std::vector<std::size_t> parent_of(n_nodes - 1, BlockForest::kNoParent);
    for (std::size_t v = 1; v < n_nodes; ++v) {
      if (parents[v].size() > 1) {
        throw CatalogRejection(
            CatalogRejection::Reason::MultipleParents,
            fmt::format("block b{} has {} parents; a block has at most one",
                        v,
                        parents[v].size()));
      }
      if (!parents[v].empty()) {
        parent_of[v - 1] = parents[v].front();
      }
    }
    if (levels[0] != 0) {
      throw InputError("genesis must sit at level 0");
    }
    try {
      return BlockForest::from_parents(
          parent_of, std::span<const Slot>(levels).subspan(1));
    } catch (const InputError &e) {
      throw CatalogRejection(CatalogRejection::Reason::NonIncreasingSlot,
                             e.what());
    }
  }

  BlockForest catalog_forest(CatalogId id) {
    const auto &e = catalog_entry(id);
    return forest_from_edges(e.n_nodes, e.edges, e.levels);
  }

  TwoChainForest two_chain_forest(const TwoChainConfig &config) {
    std::vector<BlockForest::BlockSpec> specs;
    std::vector<std::int64_t> body{0};
    auto label = [](std::int64_t b) {
      return b >= 0 ? fmt::format("b{}", b) : fmt::format("b{}'", -b);
    };
    std::string prev = std::string(kGenesisLabel);
    for (Slot i = 1; i <= config.fork_point; ++i) {
      specs.push_back({label(i), i, prev});
      body.push_back(i);
      prev = label(i);
    }
    const std::string fork = prev;
    for (std::size_t k = 1; k <= config.len_a; ++k) {
      const auto b = static_cast<std::int64_t>(config.fork_point + k);
      specs.push_back({label(b), static_cast<Slot>(b), prev});
      body.push_back(b);
      prev = label(b);
    }
    prev = fork;
    for (std::size_t k = 1; k <= config.len_b; ++k) {
      const auto b = -static_cast<std::int64_t>(config.fork_point + k);
      specs.push_back({label(b), static_cast<Slot>(-b), prev});
      body.push_back(b);
      prev = label(b);
    }
    return TwoChainForest{BlockForest::from_specs(specs), std::move(body)};
  }

  bool two_chain_is_ancestor(const TwoChainConfig &config,
                             std::int64_t ancestor_body,
                             std::int64_t descendant_body) {
    if (ancestor_body == descendant_body) {
      return true;
    }
    const auto a = std::llabs(ancestor_body);
    const auto d = std::llabs(descendant_body);
    if (a > d) {
      return false;
    }
    if (a <= static_cast<std::int64_t>(config.fork_point)) {
      return true;
    }
    return (ancestor_body > 0) == (descendant_body > 0);
  }

  std::uint64_t two_chain_states(
      const TwoChainConfig &config,
      const Bounds &bounds,
      const std::function<bool(const ProtocolState &)> &visit) {
    auto tc = two_chain_forest(config);
    Bounds b = bounds;
    b.n_blocks = tc.forest.size() - 1;
    b.graph_filter.reset();
    return enumerate_states(b, tc.forest, visit);
  }

}  // namespace ffgmc
