/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "ffgmc/core_model.hpp"
#include "ffgmc/finality.hpp"

namespace ffgmc {

  enum class SlashingKind {
    DoubleVote,    // E1: equal target slots
    SurroundVote,  // E2: lower source, wider span
  };

  std::string_view to_string(SlashingKind kind);

  struct SlashingEvidence {
    ValidatorIndex validator = 0;
    SlashingKind kind = SlashingKind::DoubleVote;
    FfgVote vote_a;
    FfgVote vote_b;

    friend auto operator<=>(const SlashingEvidence &,
                            const SlashingEvidence &) = default;
  };

  struct SlashingResult {
    ValidatorSet slashable;
    std::vector<SlashingEvidence> evidence;
  };

  struct SafetyVerdict {
    bool disagreement = false;
    ValidatorSet slashable;
    std::vector<SlashingEvidence> evidence;
    bool holds = true;
    FinalityView view;
  };

  /// E1 if the votes differ and share a target slot; otherwise E2 if one
  /// vote's source is strictly below the other's while its target slot is
  /// strictly above. Checked in both orientations.
  std::optional<SlashingKind> is_slashable_pair(const FfgVote &a,
                                                const FfgVote &b,
                                                const RuleSet &rules = {});

  /// One witness pair per (validator, kind) that occurs, sorted.
  SlashingResult slashable_validators(const ProtocolState &state,
                                      const RuleSet &rules = {});

  /// Two finalized checkpoints on conflicting blocks.
  bool disagreement(const ProtocolState &state, const FinalityView &view);

  /// holds = !disagreement || 3 * |slashable| >= N.
  SafetyVerdict accountable_safety(const ProtocolState &state,
                                   const RuleSet &rules = {});

  constexpr bool enough_slashed(std::size_t slashable, std::uint32_t n) {
    return 3 * slashable >= std::size_t{n};
  }

}  // namespace ffgmc
