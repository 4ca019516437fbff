/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <random>

#include <gtest/gtest.h>

#include "ffgmc/enumerator.hpp"
#include "ffgmc/finality.hpp"

using namespace ffgmc;

namespace {

  using Spec = BlockForest::BlockSpec;

  std::shared_ptr<const BlockForest> fork_forest() {
    std::vector<Spec> specs = {
        {"b1", 1, "genesis"}, {"b2", 1, "genesis"}, {"b3", 2, "b1"}};
    return std::make_shared<const BlockForest>(BlockForest::from_specs(specs));
  }

  // Justification sources always have a smaller c than the justified
  // checkpoint, so one pass in order of c decides every checkpoint.
  CheckpointSet one_pass_justified(const ProtocolState &s,
                                   const std::vector<Checkpoint> &universe,
                                   const RuleSet &rules) {
    auto order = universe;
    std::stable_sort(order.begin(), order.end(), [](auto &a, auto &b) {
      return a.c < b.c;
    });
    CheckpointSet j{kGenesisCheckpoint};
    const auto &f = s.forest();
    for (const auto &c : order) {
      if (c == kGenesisCheckpoint) {
        continue;
      }
      std::set<ValidatorIndex> who;
      for (const auto &sv : s.votes()) {
        const auto &v = sv.vote;
        if (!is_valid_ffg_vote(s, v) || !j.contains(v.source)
            || v.target.c != c.c) {
          continue;
        }
        if (rules.justification_ancestry
            && !(f.is_ancestor(v.source.block, c.block)
                 && f.is_ancestor(c.block, v.target.block))) {
          continue;
        }
        who.insert(sv.validator);
      }
      if (is_quorum(rules.quorum, who.size(), s.n_validators())) {
        j.insert(c);
      }
    }
    return j;
  }

  ProtocolState random_state(std::mt19937 &rng,
                             const std::shared_ptr<const BlockForest> &f,
                             SlotRule rule) {
    const auto cps = valid_checkpoints(*f, rule, 4);
    std::vector<FfgVote> ffg;
    for (auto &s : cps) {
      for (auto &t : cps) {
        if (is_valid_ffg_vote(*f, rule, {s, t})) {
          ffg.push_back({s, t});
        }
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, ffg.size() - 1);
    std::uniform_int_distribution<ValidatorIndex> who(0, 3);
    std::uniform_int_distribution<int> count(0, 14);
    std::vector<SignedVote> votes;
    for (int i = count(rng); i > 0; --i) {
      votes.push_back({ffg[pick(rng)], who(rng)});
    }
    return ProtocolState(f, 4, votes, rule);
  }

}  // namespace

TEST(Justification, GenesisAloneWithoutVotes) {
  ProtocolState s(fork_forest(), 4, {});
  EXPECT_EQ(finality_view(s).justified, CheckpointSet{kGenesisCheckpoint});
  EXPECT_EQ(finality_view(s).finalized, CheckpointSet{kGenesisCheckpoint});
}

TEST(Justification, ThreeOfFourJustifiesButDoesNotFinalize) {
  auto f = fork_forest();
  const Checkpoint c1{f->id_of("b1"), 2, 1};
  std::vector<SignedVote> votes;
  for (ValidatorIndex v = 0; v < 3; ++v) {
    votes.push_back({{kGenesisCheckpoint, c1}, v});
  }
  ProtocolState s(f, 4, votes);
  const auto view = finality_view(s);
  // (genesis, 2) sits between source and target at the target's c.
  const Checkpoint g2{kGenesisCheckpoint.block, 2, 0};
  EXPECT_EQ(view.justified, (CheckpointSet{kGenesisCheckpoint, g2, c1}));
  EXPECT_EQ(view.finalized, CheckpointSet{kGenesisCheckpoint});
  EXPECT_EQ(view.justifying_validators.at(c1), (ValidatorSet{0, 1, 2}));
}

TEST(Justification, TwoOfFourIsNotAQuorumUnlessHalved) {
  auto f = fork_forest();
  const Checkpoint c1{f->id_of("b1"), 2, 1};
  ProtocolState s(f, 4, {{{kGenesisCheckpoint, c1}, 0}, {{kGenesisCheckpoint, c1}, 1}});
  EXPECT_FALSE(finality_view(s).justified.contains(c1));
  EXPECT_TRUE(
      finality_view(s, rules_for(Mutation::QuorumHalf)).justified.contains(c1));
}

TEST(Justification, SandwichedCheckpointOnTheTargetChain) {
  // Votes genesis -> (b3, 2) also justify (b1, 2): same slot, and b1 lies
  // between the source and target blocks.
  auto f = fork_forest();
  const Checkpoint b3c{f->id_of("b3"), 3, 2};
  const Checkpoint b1c{f->id_of("b1"), 3, 1};
  std::vector<SignedVote> votes;
  for (ValidatorIndex v = 0; v < 3; ++v) {
    votes.push_back({{kGenesisCheckpoint, b3c}, v});
  }
  ProtocolState s(f, 4, votes);
  const auto j = finality_view(s).justified;
  EXPECT_TRUE(j.contains(b3c));
  EXPECT_TRUE(j.contains(b1c));
  EXPECT_FALSE(j.contains(Checkpoint{f->id_of("b2"), 3, 1}));
}

TEST(Finalization, JustifiedThenNextSlotQuorum) {
  auto f = fork_forest();
  const Checkpoint c1{f->id_of("b1"), 2, 1};
  const Checkpoint c2{f->id_of("b3"), 3, 2};
  std::vector<SignedVote> votes;
  for (ValidatorIndex v = 0; v < 3; ++v) {
    votes.push_back({{kGenesisCheckpoint, c1}, v});
    votes.push_back({{c1, c2}, v});
  }
  ProtocolState s(f, 4, votes);
  const auto view = finality_view(s);
  EXPECT_TRUE(view.finalized.contains(c1));
  EXPECT_FALSE(view.finalized.contains(c2));
  EXPECT_TRUE(view.finalized_blocks.contains(f->id_of("b1")));
  EXPECT_FALSE(finalization_readings_differ(s));
}

TEST(Finalization, SlotGapDoesNotFinalize) {
  auto f = fork_forest();
  const Checkpoint c1{f->id_of("b1"), 2, 1};
  const Checkpoint c2{f->id_of("b3"), 4, 2};
  std::vector<SignedVote> votes;
  for (ValidatorIndex v = 0; v < 4; ++v) {
    votes.push_back({{kGenesisCheckpoint, c1}, v});
    votes.push_back({{c1, c2}, v});
  }
  ProtocolState s(f, 4, votes);
  EXPECT_FALSE(finality_view(s).finalized.contains(c1));
}

TEST(Justification, InvalidVotesAreIgnored) {
  auto f = fork_forest();
  // (b1, 1, 1) breaks the strict slot rule.
  const Checkpoint bad{f->id_of("b1"), 1, 1};
  std::vector<SignedVote> votes;
  for (ValidatorIndex v = 0; v < 4; ++v) {
    votes.push_back({{kGenesisCheckpoint, bad}, v});
  }
  ProtocolState strict(f, 4, votes, SlotRule::Strict);
  EXPECT_FALSE(finality_view(strict).justified.contains(bad));
  ProtocolState nonstrict(f, 4, votes, SlotRule::NonStrict);
  EXPECT_TRUE(finality_view(nonstrict).justified.contains(bad));
}

TEST(Justification, FixpointsAgreeWithOnePassOracle) {
  std::mt19937 rng(11);
  auto f = fork_forest();
  for (auto rule : {SlotRule::Strict, SlotRule::NonStrict}) {
    for (auto m : {Mutation::None, Mutation::QuorumHalf,
                   Mutation::DropAncestryInJustification}) {
      const auto rules = rules_for(m);
      for (int i = 0; i < 400; ++i) {
        const auto s = random_state(rng, f, rule);
        const auto u = default_universe(s);
        const auto lfp = justified_checkpoints(s, u, rules);
        ASSERT_EQ(lfp, justified_checkpoints_gfp(s, u, rules));
        ASSERT_EQ(lfp, one_pass_justified(s, u, rules));
      }
    }
  }
}

TEST(Justification, MonotoneInVotes) {
  std::mt19937 rng(5);
  auto f = fork_forest();
  for (int i = 0; i < 300; ++i) {
    const auto a = random_state(rng, f, SlotRule::Strict);
    const auto b = random_state(rng, f, SlotRule::Strict);
    auto merged = a.votes();
    merged.insert(merged.end(), b.votes().begin(), b.votes().end());
    ProtocolState ab(f, 4, merged);
    const auto ja = finality_view(a).justified;
    const auto jab = finality_view(ab).justified;
    ASSERT_TRUE(std::includes(jab.begin(), jab.end(), ja.begin(), ja.end()));
  }
}

TEST(Finalization, ReadingsNeverDifferForValidVotes) {
  // A valid vote already has its target on the source's chain.
  std::mt19937 rng(3);
  auto f = fork_forest();
  for (int i = 0; i < 500; ++i) {
    ASSERT_FALSE(finalization_readings_differ(
        random_state(rng, f, SlotRule::NonStrict)));
  }
}
