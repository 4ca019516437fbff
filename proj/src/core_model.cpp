/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ffgmc/core_model.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace ffgmc {

  std::string_view to_string(SlotRule rule) {
    return rule == SlotRule::Strict ? "strict" : "nonstrict";
  }

  SlotRule parse_slot_rule(std::string_view text) {
    if (text == "strict") {
      return SlotRule::Strict;
    }
    if (text == "nonstrict") {
      return SlotRule::NonStrict;
    }
    throw InputError(fmt::format(
        "unknown slot rule '{}' (expected strict|nonstrict)", text));
  }

  BlockForest::BlockForest()
      : BlockForest(std::vector<Block>{
            Block{kGenesis, 0, std::nullopt, std::string(kGenesisLabel)}}) {}

  BlockForest::BlockForest(std::vector<Block> blocks)
      : blocks_(std::move(blocks)) {
    const auto n = blocks_.size();
    closure_.assign(n * n, 0);
    for (std::size_t d = 0; d < n; ++d) {
      std::optional<BlockId> cur = BlockId{static_cast<std::uint32_t>(d)};
      // Parent chains were validated acyclic, so this terminates.
      while (cur) {
        closure_[d * n + cur->value] = 1;
        cur = blocks_[cur->value].parent;
      }
    }
  }

  BlockForest BlockForest::from_specs(std::span<const BlockSpec> specs) {
    std::vector<Block> blocks;
    blocks.push_back(
        Block{kGenesis, 0, std::nullopt, std::string(kGenesisLabel)});
    std::map<std::string, BlockId, std::less<>> ids;
    ids.emplace(std::string(kGenesisLabel), kGenesis);

    std::vector<const BlockSpec *> pending;
    for (const auto &spec : specs) {
      if (spec.label == kGenesisLabel) {
        if (spec.slot != 0 || spec.parent) {
          throw InputError("block 'genesis' must have slot 0 and no parent");
        }
        continue;
      }
      if (spec.label.empty()) {
        throw InputError("block id must not be empty");
      }
      BlockId id{static_cast<std::uint32_t>(blocks.size())};
      if (!ids.emplace(spec.label, id).second) {
        throw InputError(fmt::format("duplicate block id '{}'", spec.label));
      }
      blocks.push_back(Block{id, spec.slot, std::nullopt, spec.label});
      pending.push_back(&spec);
    }

    for (std::size_t i = 0; i < pending.size(); ++i) {
      const auto &spec = *pending[i];
      if (!spec.parent) {
        continue;
      }
      auto it = ids.find(*spec.parent);
      if (it == ids.end()) {
        throw InputError(fmt::format("block '{}' references unknown parent '{}'",
                                     spec.label,
                                     *spec.parent));
      }
      blocks[i + 1].parent = it->second;
    }

    // Acyclicity: every parent walk ends within |blocks| steps.
    for (const auto &b : blocks) {
      std::optional<BlockId> cur = b.parent;
      std::size_t steps = 0;
      while (cur) {
        if (++steps > blocks.size()) {
          throw InputError(
              fmt::format("cycle detected through block '{}'", b.label));
        }
        cur = blocks[cur->value].parent;
      }
    }

    for (const auto &b : blocks) {
      if (b.parent && !(blocks[b.parent->value].slot < b.slot)) {
        throw InputError(fmt::format(
            "block '{}' (slot {}) must have a larger slot than its parent "
            "'{}' (slot {})",
            b.label,
            b.slot,
            blocks[b.parent->value].label,
            blocks[b.parent->value].slot));
      }
    }
    return BlockForest(std::move(blocks));
  }

  BlockForest BlockForest::from_parents(std::span<const std::size_t> parents,
                                        std::span<const Slot> slots) {
    if (parents.size() != slots.size()) {
      throw InputError("parents and slots differ in length");
    }
    std::vector<BlockSpec> specs;
    specs.reserve(parents.size());
    for (std::size_t i = 0; i < parents.size(); ++i) {
      BlockSpec spec{fmt::format("b{}", i + 1), slots[i], std::nullopt};
      if (parents[i] == 0) {
        spec.parent = std::string(kGenesisLabel);
      } else if (parents[i] != kNoParent) {
        if (parents[i] > parents.size()) {
          throw InputError(fmt::format("parent index {} out of range",
                                       parents[i]));
        }
        spec.parent = fmt::format("b{}", parents[i]);
      }
      specs.push_back(std::move(spec));
    }
    return from_specs(specs);
  }

  void BlockForest::check_id(BlockId id) const {
    if (!contains(id)) {
      throw InputError(fmt::format("unknown block id #{}", id.value));
    }
  }

  const Block &BlockForest::block(BlockId id) const {
    check_id(id);
    return blocks_[id.value];
  }

  std::optional<BlockId> BlockForest::find(std::string_view label) const {
    for (const auto &b : blocks_) {
      if (b.label == label) {
        return b.id;
      }
    }
    return std::nullopt;
  }

  BlockId BlockForest::id_of(std::string_view label) const {
    if (auto id = find(label)) {
      return *id;
    }
    throw InputError(fmt::format("unknown block '{}'", label));
  }

  bool BlockForest::is_ancestor(BlockId ancestor, BlockId descendant) const {
    check_id(ancestor);
    check_id(descendant);
    return closure_[descendant.value * blocks_.size() + ancestor.value] != 0;
  }

  bool BlockForest::are_conflicting(BlockId a, BlockId b) const {
    return !is_ancestor(a, b) && !is_ancestor(b, a);
  }

  bool BlockForest::has_conflicting_pair() const {
    const auto n = blocks_.size();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (closure_[b * n + a] == 0 && closure_[a * n + b] == 0) {
          return true;
        }
      }
    }
    return false;
  }

  std::size_t BlockForest::depth(BlockId id) const {
    check_id(id);
    std::size_t d = 0;
    for (auto cur = blocks_[id.value].parent; cur;
         cur = blocks_[cur->value].parent) {
      ++d;
    }
    return d;
  }

  bool operator==(const BlockForest &a, const BlockForest &b) {
    if (a.blocks_.size() != b.blocks_.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.blocks_.size(); ++i) {
      const auto &x = a.blocks_[i];
      const auto &y = b.blocks_[i];
      if (x.id != y.id || x.slot != y.slot || x.parent != y.parent
          || x.label != y.label) {
        return false;
      }
    }
    return true;
  }

  bool is_ancestor(const BlockForest &forest, BlockId a, BlockId d) {
    return forest.is_ancestor(a, d);
  }

  bool are_conflicting(const BlockForest &forest, BlockId a, BlockId b) {
    return forest.are_conflicting(a, b);
  }

  // --- ProtocolState -------------------------------------------------------

  ProtocolState::ProtocolState(std::shared_ptr<const BlockForest> forest,
                               std::uint32_t n_validators,
                               std::vector<SignedVote> votes,
                               SlotRule slot_rule)
      : forest_(std::move(forest)),
        n_validators_(n_validators),
        votes_(std::move(votes)),
        slot_rule_(slot_rule) {
    if (!forest_) {
      throw InputError("protocol state needs a forest");
    }
    if (n_validators_ == 0) {
      throw InputError("n_validators must be positive");
    }
    for (const auto &sv : votes_) {
      if (sv.validator >= n_validators_) {
        throw InputError(fmt::format("validator {} out of range [0, {})",
                                     sv.validator,
                                     n_validators_));
      }
      for (const auto *cp : {&sv.vote.source, &sv.vote.target}) {
        if (!forest_->contains(cp->block)) {
          throw InputError(
              fmt::format("vote references unknown block #{}", cp->block.value));
        }
      }
    }
    std::sort(votes_.begin(), votes_.end());
    votes_.erase(std::unique(votes_.begin(), votes_.end()), votes_.end());
  }

  ProtocolState::ProtocolState(BlockForest forest,
                               std::uint32_t n_validators,
                               std::vector<SignedVote> votes,
                               SlotRule slot_rule)
      : ProtocolState(std::make_shared<const BlockForest>(std::move(forest)),
                      n_validators,
                      std::move(votes),
                      slot_rule) {}

  ProtocolState ProtocolState::permuted(
      std::span<const ValidatorIndex> perm) const {
    if (perm.size() != n_validators_) {
      throw InputError("permutation size differs from n_validators");
    }
    auto votes = votes_;
    for (auto &sv : votes) {
      sv.validator = perm[sv.validator];
    }
    return ProtocolState(forest_, n_validators_, std::move(votes), slot_rule_);
  }

  bool operator==(const ProtocolState &a, const ProtocolState &b) {
    return a.n_validators_ == b.n_validators_ && a.slot_rule_ == b.slot_rule_
        && a.votes_ == b.votes_ && *a.forest_ == *b.forest_;
  }

  std::size_t quorum_size(Quorum q, std::uint32_t n) {
    std::size_t k = 0;
    while (!is_quorum(q, k, n)) {
      ++k;
    }
    return k;
  }

  // --- validity ------------------------------------------------------------

  bool is_valid_checkpoint(const BlockForest &forest,
                           SlotRule rule,
                           const Checkpoint &cp) {
    const auto &b = forest.block(cp.block);
    if (cp.p != b.slot) {
      return false;
    }
    if (cp == kGenesisCheckpoint) {
      return true;
    }
    return rule == SlotRule::Strict ? cp.c > cp.p : cp.c >= cp.p;
  }

  bool is_valid_checkpoint(const ProtocolState &state, const Checkpoint &cp) {
    return is_valid_checkpoint(state.forest(), state.slot_rule(), cp);
  }

  bool is_valid_ffg_vote(const BlockForest &forest,
                         SlotRule rule,
                         const FfgVote &vote) {
    // Evaluate both validity checks first so unknown blocks always throw.
    const bool source_ok = is_valid_checkpoint(forest, rule, vote.source);
    const bool target_ok = is_valid_checkpoint(forest, rule, vote.target);
    return source_ok && target_ok && vote.source.c < vote.target.c
        && forest.is_ancestor(vote.source.block, vote.target.block);
  }

  bool is_valid_ffg_vote(const ProtocolState &state, const FfgVote &vote) {
    return is_valid_ffg_vote(state.forest(), state.slot_rule(), vote);
  }

  std::vector<Checkpoint> valid_checkpoints(const BlockForest &forest,
                                            SlotRule rule,
                                            Slot max_c) {
    std::vector<Checkpoint> out;
    for (const auto &b : forest.blocks()) {
      for (Slot c = 0; c <= max_c; ++c) {
        Checkpoint cp{b.id, c, b.slot};
        if (is_valid_checkpoint(forest, rule, cp)) {
          out.push_back(cp);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Checkpoint> checkpoints_of(const ProtocolState &state,
                                         std::int64_t bound) {
    if (bound < 0) {
      throw InputError(fmt::format("checkpoint bound must be >= 0, got {}",
                                   bound));
    }
    auto out = valid_checkpoints(
        state.forest(), state.slot_rule(), static_cast<Slot>(bound));
    for (const auto &sv : state.votes()) {
      out.push_back(sv.vote.source);
      out.push_back(sv.vote.target);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<Checkpoint> default_universe(const ProtocolState &state) {
    std::int64_t max_target = 0;
    for (const auto &sv : state.votes()) {
      max_target = std::max<std::int64_t>(max_target, sv.vote.target.c);
    }
    return checkpoints_of(state, max_target + 1);
  }

  std::string to_string(const BlockForest &forest, const Checkpoint &cp) {
    return fmt::format(
        "({}, {}, {})", forest.block(cp.block).label, cp.c, cp.p);
  }

  std::string to_string(const BlockForest &forest, const FfgVote &vote) {
    return fmt::format("{} -> {}",
                       to_string(forest, vote.source),
                       to_string(forest, vote.target));
  }

}  // namespace ffgmc
