/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "ffgmc/core_model.hpp"

namespace ffgmc {

  struct Bounds;

  /// Small hand-drawn block graphs: forks, a single chain, a forest, and
  /// two impossible graphs that forest validation must reject.
  enum class CatalogId {
    M3,
    M4a,
    M4b,
    M5a,
    M5b,
    M7,
    SingleChain,
    Forest,
    I1,
    I2,
  };

  /// Edge from `child` to `parent`; node 0 is genesis.
  struct CatalogEdge {
    std::size_t child = 0;
    std::size_t parent = 0;
  };

  struct CatalogEntry {
    CatalogId id;
    std::string_view name;  // CLI spelling, e.g. "m4a"
    std::string_view description;
    std::size_t n_nodes = 0;  // including genesis
    std::vector<CatalogEdge> edges;
    std::vector<Slot> levels;  // drawn level of every node, genesis first
  };

  /// Why an edge list does not describe a block forest.
  class CatalogRejection : public InputError {
   public:
    enum class Reason { Cycle, MultipleParents, NonIncreasingSlot };

    CatalogRejection(Reason reason, const std::string &what)
        : InputError(what), reason_(reason) {}

    Reason reason() const {
      return reason_;
    }

   private:
    Reason reason_;
  };

  const std::vector<CatalogEntry> &catalog();
  const CatalogEntry &catalog_entry(CatalogId id);
  std::string_view to_string(CatalogId id);
  CatalogId parse_catalog_id(std::string_view text);

  /// Validates a raw edge list (cycles first, then multiple parents, then
  /// slot order) and builds the forest. Node i > 0 is labelled "b<i>".
  BlockForest forest_from_edges(std::size_t n_nodes,
                                const std::vector<CatalogEdge> &edges,
                                const std::vector<Slot> &levels);

  /// The catalog graph with slot = drawn level. Throws CatalogRejection
  /// for I1/I2.
  BlockForest catalog_forest(CatalogId id);

  /// Two chains sharing the prefix 1..fork_point, then diverging into
  /// branches of `len_a` and `len_b` blocks. Branch A keeps positive
  /// bodies, branch B negates them.
  struct TwoChainConfig {
    Slot fork_point = 0;
    std::size_t len_a = 1;
    std::size_t len_b = 1;
  };

  struct TwoChainForest {
    BlockForest forest;
    std::vector<std::int64_t> body;  // indexed by BlockId
  };

  TwoChainForest two_chain_forest(const TwoChainConfig &config);

  /// Ancestry by comparing signed bodies: same block, or |a| <= |d| and
  /// either a lies on the shared prefix or both sit on the same branch.
  bool two_chain_is_ancestor(const TwoChainConfig &config,
                             std::int64_t ancestor_body,
                             std::int64_t descendant_body);

  /// States of the two-chain forest within `bounds` (n_blocks and
  /// slot_mode are taken from the config), canonical order. The visitor
  /// returns false to stop. Returns the number of states visited.
  std::uint64_t two_chain_states(
      const TwoChainConfig &config,
      const Bounds &bounds,
      const std::function<bool(const ProtocolState &)> &visit);

}  // namespace ffgmc
