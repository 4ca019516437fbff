/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ffgmc {

  /// Raised for malformed inputs: unknown ids, broken forest invariants,
  /// out-of-range validators, bad bounds.
  class InputError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
  };

  using Slot = std::uint32_t;
  using ValidatorIndex = std::uint32_t;

  /// Dense block index into a BlockForest. Index 0 is always genesis.
  struct BlockId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(const BlockId &, const BlockId &) =
        default;
  };

  inline constexpr BlockId kGenesis{0};
  inline constexpr std::string_view kGenesisLabel = "genesis";

  /// Whether a non-genesis checkpoint needs c > p (strict) or c >= p.
  enum class SlotRule { Strict, NonStrict };

  std::string_view to_string(SlotRule rule);
  SlotRule parse_slot_rule(std::string_view text);

  struct Block {
    BlockId id;
    Slot slot = 0;
    std::optional<BlockId> parent;
    std::string label;
  };

  /// A rooted labelled forest of proposed blocks. Genesis is block 0, has
  /// slot 0 and no parent. Other parentless blocks are detached roots.
  /// Immutable after construction; the ancestor closure is precomputed.
  class BlockForest {
   public:
    /// Label-level description of one non-genesis block.
    struct BlockSpec {
      std::string label;
      Slot slot = 0;
      std::optional<std::string> parent;
    };

    /// Sentinel for `from_parents`: the block has no parent.
    static constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

    BlockForest();

    /// Validates labels, parent references, acyclicity and slot ordering.
    static BlockForest from_specs(std::span<const BlockSpec> specs);

    /// Dense construction: block i+1 has parent `parents[i]` (0 = genesis,
    /// j = block j, kNoParent = detached) and slot `slots[i]`. Labels are
    /// "b1", "b2", ...
    static BlockForest from_parents(std::span<const std::size_t> parents,
                                    std::span<const Slot> slots);

    std::size_t size() const {
      return blocks_.size();
    }
    const std::vector<Block> &blocks() const {
      return blocks_;
    }
    const Block &block(BlockId id) const;
    bool contains(BlockId id) const {
      return id.value < blocks_.size();
    }

    std::optional<BlockId> find(std::string_view label) const;
    BlockId id_of(std::string_view label) const;

    /// Reflexive-transitive closure of the parent relation.
    bool is_ancestor(BlockId ancestor, BlockId descendant) const;
    bool are_conflicting(BlockId a, BlockId b) const;

    /// True iff some pair of blocks conflicts.
    bool has_conflicting_pair() const;

    /// Length of the parent path from `id` to its root (genesis has 0).
    std::size_t depth(BlockId id) const;

    friend bool operator==(const BlockForest &a, const BlockForest &b);

   private:
    explicit BlockForest(std::vector<Block> blocks);
    void check_id(BlockId id) const;

    std::vector<Block> blocks_;
    std::vector<std::uint8_t> closure_;  // closure_[d * n + a] = a ->* d
  };

  bool is_ancestor(const BlockForest &forest, BlockId a, BlockId d);
  bool are_conflicting(const BlockForest &forest, BlockId a, BlockId b);

  /// A checkpoint (block, c, p). The built-in ordering (c, p, block) is a
  /// canonical total order for containers; the protocol pre-order is
  /// `checkpoint_le`.
  struct Checkpoint {
    BlockId block;
    Slot c = 0;
    Slot p = 0;

    friend constexpr bool operator==(const Checkpoint &,
                                     const Checkpoint &) = default;
    friend constexpr std::strong_ordering operator<=>(const Checkpoint &x,
                                                      const Checkpoint &y) {
      if (auto r = x.c <=> y.c; r != 0) {
        return r;
      }
      if (auto r = x.p <=> y.p; r != 0) {
        return r;
      }
      return x.block <=> y.block;
    }
  };

  inline constexpr Checkpoint kGenesisCheckpoint{kGenesis, 0, 0};

  /// x <= y iff x.c < y.c, or x.c == y.c and x.p <= y.p.
  constexpr bool checkpoint_le(const Checkpoint &x, const Checkpoint &y) {
    return x.c < y.c || (x.c == y.c && x.p <= y.p);
  }

  /// x < y iff x <= y and x != y (full triple inequality).
  constexpr bool checkpoint_lt(const Checkpoint &x, const Checkpoint &y) {
    return checkpoint_le(x, y) && x != y;
  }

  struct FfgVote {
    Checkpoint source;
    Checkpoint target;

    friend constexpr auto operator<=>(const FfgVote &,
                                      const FfgVote &) = default;
  };

  struct SignedVote {
    FfgVote vote;
    ValidatorIndex validator = 0;

    friend constexpr auto operator<=>(const SignedVote &,
                                      const SignedVote &) = default;
  };

  /// One complete protocol configuration. Votes are kept sorted and
  /// duplicate-free; everything else is derived.
  class ProtocolState {
   public:
    ProtocolState(std::shared_ptr<const BlockForest> forest,
                  std::uint32_t n_validators,
                  std::vector<SignedVote> votes,
                  SlotRule slot_rule = SlotRule::Strict);
    ProtocolState(BlockForest forest,
                  std::uint32_t n_validators,
                  std::vector<SignedVote> votes,
                  SlotRule slot_rule = SlotRule::Strict);

    const BlockForest &forest() const {
      return *forest_;
    }
    const std::shared_ptr<const BlockForest> &shared_forest() const {
      return forest_;
    }
    std::uint32_t n_validators() const {
      return n_validators_;
    }
    const std::vector<SignedVote> &votes() const {
      return votes_;
    }
    SlotRule slot_rule() const {
      return slot_rule_;
    }

    /// Same forest and rule, validators renamed by `perm[v]`.
    ProtocolState permuted(std::span<const ValidatorIndex> perm) const;

    friend bool operator==(const ProtocolState &a, const ProtocolState &b);

   private:
    std::shared_ptr<const BlockForest> forest_;
    std::uint32_t n_validators_;
    std::vector<SignedVote> votes_;
    SlotRule slot_rule_;
  };

  /// Quorum threshold used by justification and finalization.
  enum class Quorum {
    TwoThirds,  // 3k >= 2N
    Half,       // 2k >= N
  };

  /// Protocol knobs that the mutation harness flips. The default is the
  /// unmutated protocol.
  struct RuleSet {
    Quorum quorum = Quorum::TwoThirds;
    bool double_vote_slashing = true;
    bool surround_vote_slashing = true;
    bool justification_ancestry = true;

    friend bool operator==(const RuleSet &, const RuleSet &) = default;
  };

  constexpr bool is_quorum(Quorum q, std::size_t signers, std::uint32_t n) {
    return q == Quorum::TwoThirds ? 3 * signers >= 2 * std::size_t{n}
                                  : 2 * signers >= std::size_t{n};
  }

  /// Smallest signer count that reaches the quorum.
  std::size_t quorum_size(Quorum q, std::uint32_t n);

  bool is_valid_checkpoint(const BlockForest &forest,
                           SlotRule rule,
                           const Checkpoint &cp);
  bool is_valid_checkpoint(const ProtocolState &state, const Checkpoint &cp);

  bool is_valid_ffg_vote(const BlockForest &forest,
                         SlotRule rule,
                         const FfgVote &vote);
  bool is_valid_ffg_vote(const ProtocolState &state, const FfgVote &vote);

  /// All valid checkpoints with c <= max_c, in canonical order.
  std::vector<Checkpoint> valid_checkpoints(const BlockForest &forest,
                                            SlotRule rule,
                                            Slot max_c);

  /// Candidate checkpoint universe: every valid checkpoint with c <= bound
  /// plus every checkpoint mentioned by a vote. Canonical order, no
  /// duplicates. A negative bound is an input error.
  std::vector<Checkpoint> checkpoints_of(const ProtocolState &state,
                                         std::int64_t bound);

  /// Universe with bound = max target c over the votes + 1.
  std::vector<Checkpoint> default_universe(const ProtocolState &state);

  std::string to_string(const BlockForest &forest, const Checkpoint &cp);
  std::string to_string(const BlockForest &forest, const FfgVote &vote);

}  // namespace ffgmc
