/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ffgmc/finality.hpp"

#include <algorithm>

namespace ffgmc {

  namespace {

    bool sandwiched(const BlockForest &forest,
                    const FfgVote &vote,
                    const Checkpoint &c) {
      return forest.is_ancestor(vote.source.block, c.block)
          && forest.is_ancestor(c.block, vote.target.block);
    }

    CheckpointSet apply_operator(const ProtocolState &state,
                                 std::span<const Checkpoint> universe,
                                 const CheckpointSet &j,
                                 const RuleSet &rules) {
      CheckpointSet next{kGenesisCheckpoint};
      for (const auto &c : universe) {
        if (c == kGenesisCheckpoint) {
          continue;
        }
        auto signers = justifying_validators(state, universe, j, c, rules);
        if (is_quorum(rules.quorum, signers.size(), state.n_validators())) {
          next.insert(c);
        }
      }
      return next;
    }

    ValidatorSet finalizing_validators(const ProtocolState &state,
                                       const Checkpoint &c,
                                       bool require_target_ancestry) {
      ValidatorSet out;
      for (const auto &sv : state.votes()) {
        const auto &v = sv.vote;
        if (v.source != c || v.target.c != c.c + 1) {
          continue;
        }
        if (!is_valid_ffg_vote(state, v)) {
          continue;
        }
        if (require_target_ancestry
            && !state.forest().is_ancestor(c.block, v.target.block)) {
          continue;
        }
        out.insert(sv.validator);
      }
      return out;
    }

  }  // namespace

  ValidatorSet justifying_validators(const ProtocolState &state,
                                     std::span<const Checkpoint> universe,
                                     const CheckpointSet &justified_so_far,
                                     const Checkpoint &c,
                                     const RuleSet &rules) {
    (void)universe;
    ValidatorSet out;
    const auto &forest = state.forest();
    for (const auto &sv : state.votes()) {
      const auto &v = sv.vote;
      if (v.target.c != c.c || !justified_so_far.contains(v.source)) {
        continue;
      }
      if (!is_valid_ffg_vote(state, v)) {
        continue;
      }
      if (rules.justification_ancestry && !sandwiched(forest, v, c)) {
        continue;
      }
      out.insert(sv.validator);
    }
    return out;
  }

  CheckpointSet justified_checkpoints(const ProtocolState &state,
                                      std::span<const Checkpoint> universe,
                                      const RuleSet &rules) {
    CheckpointSet j{kGenesisCheckpoint};
    // The operator is monotone, so each round only grows the set and at
    // most |universe| rounds are needed.
    for (std::size_t round = 0; round <= universe.size(); ++round) {
      auto next = apply_operator(state, universe, j, rules);
      if (next == j) {
        break;
      }
      j = std::move(next);
    }
    return j;
  }

  CheckpointSet justified_checkpoints_gfp(const ProtocolState &state,
                                          std::span<const Checkpoint> universe,
                                          const RuleSet &rules) {
    CheckpointSet j(universe.begin(), universe.end());
    j.insert(kGenesisCheckpoint);
    for (std::size_t round = 0; round <= universe.size() + 1; ++round) {
      auto next = apply_operator(state, universe, j, rules);
      if (next == j) {
        break;
      }
      j = std::move(next);
    }
    return j;
  }

  bool is_finalized(const ProtocolState &state,
                    std::span<const Checkpoint> universe,
                    const CheckpointSet &justified,
                    const Checkpoint &c,
                    const RuleSet &rules) {
    (void)universe;
    if (c == kGenesisCheckpoint) {
      return true;
    }
    if (!justified.contains(c)) {
      return false;
    }
    return is_quorum(rules.quorum,
                     finalizing_validators(state, c, false).size(),
                     state.n_validators());
  }

  bool is_finalized_with_target_ancestry(const ProtocolState &state,
                                         const CheckpointSet &justified,
                                         const Checkpoint &c,
                                         const RuleSet &rules) {
    if (c == kGenesisCheckpoint) {
      return true;
    }
    if (!justified.contains(c)) {
      return false;
    }
    return is_quorum(rules.quorum,
                     finalizing_validators(state, c, true).size(),
                     state.n_validators());
  }

  FinalityView finality_view(const ProtocolState &state,
                             std::span<const Checkpoint> universe,
                             const RuleSet &rules) {
    FinalityView view;
    view.justified = justified_checkpoints(state, universe, rules);
    for (const auto &c : view.justified) {
      if (c != kGenesisCheckpoint) {
        view.justifying_validators.emplace(
            c,
            justifying_validators(state, universe, view.justified, c, rules));
      }
    }
    view.finalized.insert(kGenesisCheckpoint);
    for (const auto &c : view.justified) {
      if (is_finalized(state, universe, view.justified, c, rules)) {
        view.finalized.insert(c);
      }
    }
    for (const auto &c : view.finalized) {
      view.finalized_blocks.insert(c.block);
    }
    return view;
  }

  FinalityView finality_view(const ProtocolState &state,
                             const RuleSet &rules) {
    const auto universe = default_universe(state);
    return finality_view(state, universe, rules);
  }

  bool finalization_readings_differ(const ProtocolState &state,
                                    const RuleSet &rules) {
    const auto universe = default_universe(state);
    const auto justified = justified_checkpoints(state, universe, rules);
    return std::any_of(
        justified.begin(), justified.end(), [&](const Checkpoint &c) {
          return is_finalized(state, universe, justified, c, rules)
              != is_finalized_with_target_ancestry(state, justified, c, rules);
        });
  }

}  // namespace ffgmc
