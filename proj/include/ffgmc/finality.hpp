/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <map>
#include <set>
#include <span>

#include "ffgmc/core_model.hpp"

namespace ffgmc {

  using CheckpointSet = std::set<Checkpoint>;
  using ValidatorSet = std::set<ValidatorIndex>;

  struct FinalityView {
    CheckpointSet justified;
    CheckpointSet finalized;
    std::set<BlockId> finalized_blocks;
    /// Validators backing each justified non-genesis checkpoint.
    std::map<Checkpoint, ValidatorSet> justifying_validators;
  };

  /// Validators with a valid vote whose source is in `justified_so_far`,
  /// whose source and target chains sandwich `c`, and whose target slot
  /// equals c.c.
  ValidatorSet justifying_validators(const ProtocolState &state,
                                     std::span<const Checkpoint> universe,
                                     const CheckpointSet &justified_so_far,
                                     const Checkpoint &c,
                                     const RuleSet &rules = {});

  /// Least fixpoint of the justification operator by Kleene iteration
  /// from {genesis checkpoint}.
  CheckpointSet justified_checkpoints(const ProtocolState &state,
                                      std::span<const Checkpoint> universe,
                                      const RuleSet &rules = {});

  /// Greatest fixpoint of the same operator by downward iteration from the
  /// whole universe.
  CheckpointSet justified_checkpoints_gfp(const ProtocolState &state,
                                          std::span<const Checkpoint> universe,
                                          const RuleSet &rules = {});

  /// Genesis, or justified and the source of a quorum of valid votes whose
  /// targets sit at c.c + 1.
  bool is_finalized(const ProtocolState &state,
                    std::span<const Checkpoint> universe,
                    const CheckpointSet &justified,
                    const Checkpoint &c,
                    const RuleSet &rules = {});

  /// Variant that additionally requires the finalizing targets to descend
  /// from c's block. Only used to measure how often the two readings
  /// disagree.
  bool is_finalized_with_target_ancestry(const ProtocolState &state,
                                         const CheckpointSet &justified,
                                         const Checkpoint &c,
                                         const RuleSet &rules = {});

  FinalityView finality_view(const ProtocolState &state,
                             std::span<const Checkpoint> universe,
                             const RuleSet &rules = {});

  /// Uses `default_universe(state)`.
  FinalityView finality_view(const ProtocolState &state,
                             const RuleSet &rules = {});

  /// True iff the literal and target-ancestry finalization readings yield
  /// different finalized sets for `state`.
  bool finalization_readings_differ(const ProtocolState &state,
                                    const RuleSet &rules = {});

}  // namespace ffgmc
