/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ffgmc/slashing.hpp"

#include <algorithm>
#include <map>

namespace ffgmc {

  std::string_view to_string(SlashingKind kind) {
    return kind == SlashingKind::DoubleVote ? "E1_double" : "E2_surround";
  }

  std::optional<SlashingKind> is_slashable_pair(const FfgVote &a,
                                                const FfgVote &b,
                                                const RuleSet &rules) {
    if (a == b) {
      return std::nullopt;
    }
    if (rules.double_vote_slashing && a.target.c == b.target.c) {
      return SlashingKind::DoubleVote;
    }
    if (rules.surround_vote_slashing) {
      const bool b_surrounds_a =
          checkpoint_lt(b.source, a.source) && a.target.c < b.target.c;
      const bool a_surrounds_b =
          checkpoint_lt(a.source, b.source) && b.target.c < a.target.c;
      if (a_surrounds_b || b_surrounds_a) {
        return SlashingKind::SurroundVote;
      }
    }
    return std::nullopt;
  }

  SlashingResult slashable_validators(const ProtocolState &state,
                                      const RuleSet &rules) {
    std::map<ValidatorIndex, std::vector<FfgVote>> by_validator;
    for (const auto &sv : state.votes()) {
      by_validator[sv.validator].push_back(sv.vote);
    }

    SlashingResult result;
    for (const auto &[validator, votes] : by_validator) {
      bool seen_e1 = false;
      bool seen_e2 = false;
      for (std::size_t i = 0; i < votes.size(); ++i) {
        for (std::size_t j = i + 1; j < votes.size(); ++j) {
          auto kind = is_slashable_pair(votes[i], votes[j], rules);
          if (!kind) {
            continue;
          }
          bool &seen =
              *kind == SlashingKind::DoubleVote ? seen_e1 : seen_e2;
          if (!seen) {
            seen = true;
            result.evidence.push_back(
                SlashingEvidence{validator, *kind, votes[i], votes[j]});
          }
        }
      }
      if (seen_e1 || seen_e2) {
        result.slashable.insert(validator);
      }
    }
    std::sort(result.evidence.begin(), result.evidence.end());
    return result;
  }

  bool disagreement(const ProtocolState &state, const FinalityView &view) {
    const auto &forest = state.forest();
    for (auto a = view.finalized.begin(); a != view.finalized.end(); ++a) {
      for (auto b = std::next(a); b != view.finalized.end(); ++b) {
        if (forest.are_conflicting(a->block, b->block)) {
          return true;
        }
      }
    }
    return false;
  }

  SafetyVerdict accountable_safety(const ProtocolState &state,
                                   const RuleSet &rules) {
    SafetyVerdict verdict;
    verdict.view = finality_view(state, rules);
    verdict.disagreement = disagreement(state, verdict.view);
    auto slashing = slashable_validators(state, rules);
    verdict.slashable = std::move(slashing.slashable);
    verdict.evidence = std::move(slashing.evidence);
    verdict.holds = !verdict.disagreement
        || enough_slashed(verdict.slashable.size(), state.n_validators());
    return verdict;
  }

}  // namespace ffgmc
