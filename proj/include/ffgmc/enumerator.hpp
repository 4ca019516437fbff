/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ffgmc/catalog.hpp"
#include "ffgmc/core_model.hpp"
#include "ffgmc/slashing.hpp"

namespace ffgmc {

  enum class SlotMode {
    Depth,  // slot := depth below genesis (detached roots sit at 1)
    Free,   // every strictly increasing assignment within max_slot
  };

  /// GenesisRooted: every parentless block hangs off genesis, which makes
  /// the shape count (n+1)^(n-1). WithDetachedRoots additionally lets a
  /// root stay parentless.
  enum class ForestConvention { GenesisRooted, WithDetachedRoots };

  enum class Mutation {
    None,
    QuorumHalf,       // 2/3 -> 1/2 in justification and finalization
    DisableE1,        // no double-vote slashing
    DisableE2,        // no surround-vote slashing
    DisableSlashing,  // DisableE1 and DisableE2 together
    DropAncestryInJustification,
  };

  std::string_view to_string(Mutation m);
  Mutation parse_mutation(std::string_view text);
  RuleSet rules_for(Mutation m);

  struct Bounds {
    std::size_t n_blocks = 2;            // non-genesis blocks
    std::optional<Slot> max_slot;        // defaults to n_blocks
    Slot max_chkp_slot = 3;
    std::uint32_t n_validators = 4;
    std::size_t max_ffg_votes = 3;       // distinct FfgVotes per state
    std::size_t max_votes = 9;           // SignedVotes per state
    SlotRule slot_rule = SlotRule::Strict;
    SlotMode slot_mode = SlotMode::Depth;
    ForestConvention forest_convention = ForestConvention::GenesisRooted;
    std::optional<CatalogId> graph_filter;

    Slot effective_max_slot() const {
      return max_slot.value_or(static_cast<Slot>(n_blocks));
    }

    /// Throws InputError for values the search cannot handle.
    void validate() const;
  };

  /// Parent vector of a forest shape: entry i is the parent of block i+1
  /// (0 = genesis, j = block j, BlockForest::kNoParent = detached root).
  struct ForestShape {
    std::vector<std::size_t> parents;

    friend bool operator==(const ForestShape &, const ForestShape &) = default;
  };

  /// All forest shapes on n non-genesis blocks, in lexicographic order of
  /// parent vectors.
  std::vector<ForestShape> enumerate_forests(
      std::size_t n,
      ForestConvention convention = ForestConvention::GenesisRooted);

  /// Slot assignments of a shape under the bounds' slot mode,
  /// lexicographic order.
  std::vector<std::vector<Slot>> slot_assignments(const ForestShape &shape,
                                                  const Bounds &bounds);

  /// The concrete graphs a search iterates over, in canonical order.
  std::vector<BlockForest> graph_units(const Bounds &bounds);

  /// Bitmask evaluator for a fixed forest. A state is a support (sorted
  /// indices into ffg_votes()) plus one mask per validator over the
  /// support's positions.
  class CompiledGraph {
   public:
    static constexpr std::size_t kMaxCheckpoints = 64;
    static constexpr std::size_t kMaxSupport = 16;
    static constexpr std::uint32_t kMaxValidators = 64;

    struct Evaluation {
      std::uint64_t justified = 0;  // bit i = checkpoints()[i]
      std::uint64_t finalized = 0;
      bool disagreement = false;
      std::size_t slashable = 0;  // only computed when disagreement
      bool holds = true;
      bool readings_differ = false;
    };

    /// Per-support tables shared by every vote assignment on it.
    class Support {
     public:
      std::span<const std::uint16_t> votes() const {
        return votes_;
      }
      std::uint32_t full_mask() const {
        return (1u << votes_.size()) - 1;
      }

     private:
      friend class CompiledGraph;
      std::vector<std::uint16_t> votes_;
      std::vector<std::uint8_t> slashable_mask_;  // by local vote mask
    };

    CompiledGraph(std::shared_ptr<const BlockForest> forest,
                  const Bounds &bounds,
                  const RuleSet &rules);

    const BlockForest &forest() const {
      return *forest_;
    }
    const std::vector<Checkpoint> &checkpoints() const {
      return checkpoints_;
    }
    const std::vector<FfgVote> &ffg_votes() const {
      return ffg_votes_;
    }
    const RuleSet &rules() const {
      return rules_;
    }

    Support make_support(std::span<const std::uint16_t> votes) const;

    Evaluation evaluate(const Support &support,
                        std::span<const std::uint32_t> masks) const;

    ProtocolState materialize(const Support &support,
                              std::span<const std::uint32_t> masks) const;

    /// Visits every canonical state in canonical order: supports by size
    /// then lexicographically, and for each support every non-decreasing
    /// sequence of validator masks whose union is the whole support and
    /// whose total size is within max_votes. Stops when `visit` returns
    /// false; returns false in that case.
    bool for_each_state(
        const std::function<bool(const Support &,
                                 std::span<const std::uint32_t>)> &visit) const;

   private:
    std::shared_ptr<const BlockForest> forest_;
    Bounds bounds_;
    RuleSet rules_;
    std::vector<Checkpoint> checkpoints_;
    std::vector<FfgVote> ffg_votes_;
    std::vector<std::uint16_t> source_index_;
    std::vector<std::uint16_t> target_index_;
    std::vector<std::uint64_t> covers_;  // checkpoints each vote can justify
    std::vector<std::uint8_t> finalizes_source_;
    std::vector<std::uint8_t> finalizes_with_ancestry_;
    std::vector<std::uint64_t> conflicts_;  // per checkpoint
  };

  using StateVisitor = std::function<bool(const ProtocolState &)>;

  /// Canonical states on a fixed forest, one per validator-permutation
  /// class. Returns the number visited.
  std::uint64_t enumerate_states(const Bounds &bounds,
                                 const BlockForest &forest,
                                 const StateVisitor &visit);

  /// Same, over every slot assignment of `shape`.
  std::uint64_t enumerate_states(const Bounds &bounds,
                                 const ForestShape &shape,
                                 const StateVisitor &visit);

  enum class Verdict { HoldsExhaustively, CounterexampleFound, Inconclusive };

  std::string_view to_string(Verdict v);

  struct Counterexample {
    ProtocolState state;
    SafetyVerdict verdict;
  };

  struct SearchOptions {
    unsigned jobs = 1;
    /// Cap on visited states (checked + pruned).
    std::optional<std::uint64_t> budget;
  };

  struct SearchReport {
    Verdict verdict = Verdict::HoldsExhaustively;
    std::optional<Counterexample> counterexample;
    std::uint64_t states_checked = 0;
    std::uint64_t states_pruned = 0;
    std::uint64_t graphs_checked = 0;
    std::uint64_t graphs_pruned = 0;
    /// States where finalization with a target-ancestry clause would give
    /// a different finalized set.
    std::uint64_t finalization_divergences = 0;
    std::chrono::duration<double> wall_time{0};
    Bounds bounds;
    Mutation mutation = Mutation::None;
  };

  SearchReport search(const Bounds &bounds,
                      Mutation mutation,
                      const SearchOptions &options = {});

  /// Search restricted to the given graphs, in the given order.
  SearchReport search_forests(const Bounds &bounds,
                              Mutation mutation,
                              std::span<const BlockForest> forests,
                              const SearchOptions &options = {});

  enum class ExampleProperty {
    FinalizedNonGenesis,
    JustifiedNonGenesis,
    ConflictingFinalized,
  };

  std::string_view to_string(ExampleProperty p);
  ExampleProperty parse_example_property(std::string_view text);

  struct ExampleResult {
    Verdict status = Verdict::HoldsExhaustively;  // Holds* == not found
    std::optional<ProtocolState> state;
    std::uint64_t states_checked = 0;

    bool found() const {
      return state.has_value();
    }
  };

  /// First canonical state with the property, or none.
  ExampleResult find_example(const Bounds &bounds,
                             ExampleProperty property,
                             Mutation mutation = Mutation::None,
                             const SearchOptions &options = {});

  /// Replays a state through the generic library and checks the property.
  bool has_property(const ProtocolState &state,
                    ExampleProperty property,
                    const RuleSet &rules = {});

}  // namespace ffgmc
