/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <map>
#include <set>

#include <gtest/gtest.h>

#include "ffgmc/enumerator.hpp"

using namespace ffgmc;

namespace {

  // Parent vectors by brute force: every function into {genesis, blocks}
  // (plus "none"), kept when repeatedly peeling rooted blocks empties it.
  std::vector<std::vector<std::size_t>> brute_forests(std::size_t n,
                                                      bool detached) {
    std::vector<std::size_t> choices;
    for (std::size_t p = 0; p <= n; ++p) {
      choices.push_back(p);
    }
    if (detached) {
      choices.push_back(BlockForest::kNoParent);
    }
    std::vector<std::vector<std::size_t>> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
      total *= choices.size();
    }
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::size_t> parents(n);
      auto c = code;
      for (std::size_t i = n; i-- > 0;) {
        parents[i] = choices[c % choices.size()];
        c /= choices.size();
      }
      std::vector<bool> placed(n + 1, false);
      placed[0] = true;
      bool progress = true;
      while (progress) {
        progress = false;
        for (std::size_t i = 0; i < n; ++i) {
          const auto p = parents[i];
          if (!placed[i + 1]
              && (p == BlockForest::kNoParent || (p != i + 1 && placed[p]))) {
            placed[i + 1] = true;
            progress = true;
          }
        }
      }
      if (std::all_of(placed.begin(), placed.end(), [](bool b) { return b; })) {
        out.push_back(parents);
      }
    }
    return out;
  }

  using ClassKey = std::vector<std::vector<FfgVote>>;

  ClassKey class_key(const ProtocolState &s) {
    ClassKey per(s.n_validators());
    for (const auto &sv : s.votes()) {
      per[sv.validator].push_back(sv.vote);
    }
    for (auto &v : per) {
      std::sort(v.begin(), v.end());
    }
    std::sort(per.begin(), per.end());
    return per;
  }

  std::vector<FfgVote> all_ffg_votes(const BlockForest &f, const Bounds &b) {
    const auto cps = valid_checkpoints(f, b.slot_rule, b.max_chkp_slot);
    std::vector<FfgVote> out;
    for (auto &s : cps) {
      for (auto &t : cps) {
        if (is_valid_ffg_vote(f, b.slot_rule, {s, t})) {
          out.push_back({s, t});
        }
      }
    }
    return out;
  }

  // Every vote set in the unreduced space, handed to `visit`.
  void brute_states(const std::shared_ptr<const BlockForest> &f,
                    const Bounds &b,
                    const std::function<void(const ProtocolState &)> &visit) {
    const auto ffg = all_ffg_votes(*f, b);
    std::vector<SignedVote> signed_votes;
    for (ValidatorIndex v = 0; v < b.n_validators; ++v) {
      for (auto &x : ffg) {
        signed_votes.push_back({x, v});
      }
    }
    std::vector<SignedVote> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      std::set<FfgVote> distinct;
      for (auto &sv : chosen) {
        distinct.insert(sv.vote);
      }
      if (distinct.size() <= b.max_ffg_votes) {
        visit(ProtocolState(f, b.n_validators, chosen, b.slot_rule));
      } else {
        return;
      }
      if (chosen.size() == b.max_votes) {
        return;
      }
      for (auto i = from; i < signed_votes.size(); ++i) {
        chosen.push_back(signed_votes[i]);
        rec(i + 1);
        chosen.pop_back();
      }
    };
    rec(0);
  }

  Bounds tiny(std::size_t blocks, std::uint32_t n, std::size_t ffg,
              std::size_t votes) {
    Bounds b;
    b.n_blocks = blocks;
    b.n_validators = n;
    b.max_ffg_votes = ffg;
    b.max_votes = votes;
    return b;
  }

  CheckpointSet bits_to_set(std::uint64_t bits,
                            const std::vector<Checkpoint> &cps) {
    CheckpointSet out;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      if (bits >> i & 1) {
        out.insert(cps[i]);
      }
    }
    return out;
  }

}  // namespace

TEST(Forests, CountsFollowCayley) {
  const std::size_t expected[] = {1, 1, 3, 16, 125, 1296};
  for (std::size_t n = 0; n <= 5; ++n) {
    EXPECT_EQ(enumerate_forests(n).size(), expected[n]) << n;
  }
}

TEST(Forests, MatchBruteForceInOrder) {
  for (bool detached : {false, true}) {
    for (std::size_t n = 0; n <= 4; ++n) {
      const auto shapes = enumerate_forests(
          n, detached ? ForestConvention::WithDetachedRoots
                      : ForestConvention::GenesisRooted);
      std::vector<std::vector<std::size_t>> got;
      for (auto &s : shapes) {
        got.push_back(s.parents);
      }
      EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
      EXPECT_EQ(got, brute_forests(n, detached)) << n << " " << detached;
    }
  }
}

TEST(SlotAssignments, DepthAndFreeModes) {
  ForestShape chain{{0, 1}};
  Bounds b = tiny(2, 4, 1, 1);
  EXPECT_EQ(slot_assignments(chain, b),
            (std::vector<std::vector<Slot>>{{1, 2}}));
  b.slot_mode = SlotMode::Free;
  b.max_slot = 3;
  EXPECT_EQ(slot_assignments(chain, b),
            (std::vector<std::vector<Slot>>{{1, 2}, {1, 3}, {2, 3}}));
  ForestShape detached{{BlockForest::kNoParent, 1}};
  b.slot_mode = SlotMode::Depth;
  EXPECT_EQ(slot_assignments(detached, b),
            (std::vector<std::vector<Slot>>{{1, 2}}));
  b.max_slot = 1;
  EXPECT_TRUE(slot_assignments(chain, b).empty());
}

TEST(States, VoteFreeBoundsGiveOneStatePerGraph) {
  Bounds b = tiny(2, 4, 3, 0);
  for (const auto &f : graph_units(b)) {
    std::uint64_t n = enumerate_states(b, f, [](const ProtocolState &s) {
      EXPECT_TRUE(s.votes().empty());
      return true;
    });
    EXPECT_EQ(n, 1u);
  }
}

TEST(States, SingleFfgVoteMultisets) {
  // Genesis only, strict rule, checkpoints up to slot 1: the one valid
  // vote is (g,0) -> (g,1).
  Bounds b = tiny(0, 4, 3, 2);
  b.max_chkp_slot = 1;
  BlockForest f;
  std::vector<std::size_t> sizes;
  enumerate_states(b, f, [&](const ProtocolState &s) {
    sizes.push_back(s.votes().size());
    return true;
  });
  EXPECT_EQ(sizes, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(States, ReducedSpaceIsExactlyOneStatePerClass) {
  for (auto rule : {SlotRule::Strict, SlotRule::NonStrict}) {
    Bounds b = tiny(1, 3, 2, 3);
    b.slot_rule = rule;
    for (const auto &forest : graph_units(b)) {
      auto f = std::make_shared<const BlockForest>(forest);
      std::set<ClassKey> brute;
      brute_states(f, b, [&](const ProtocolState &s) {
        brute.insert(class_key(s));
      });
      std::set<ClassKey> reduced;
      std::uint64_t emitted = enumerate_states(b, *f, [&](const ProtocolState &s) {
        EXPECT_TRUE(reduced.insert(class_key(s)).second);
        return true;
      });
      EXPECT_EQ(emitted, reduced.size());
      EXPECT_EQ(reduced, brute);
    }
  }
}

TEST(States, EmittedStatesAreValidAndWithinBounds) {
  Bounds b = tiny(2, 4, 3, 5);
  for (const auto &f : graph_units(b)) {
    enumerate_states(b, f, [&](const ProtocolState &s) {
      std::set<FfgVote> distinct;
      for (auto &sv : s.votes()) {
        EXPECT_TRUE(is_valid_ffg_vote(s, sv.vote));
        EXPECT_LE(sv.vote.target.c, b.max_chkp_slot);
        distinct.insert(sv.vote);
      }
      EXPECT_LE(distinct.size(), b.max_ffg_votes);
      EXPECT_LE(s.votes().size(), b.max_votes);
      return true;
    });
  }
}

TEST(CompiledGraph, AgreesWithGenericEvaluator) {
  for (auto rule : {SlotRule::Strict, SlotRule::NonStrict}) {
    for (auto mode : {SlotMode::Depth, SlotMode::Free}) {
      Bounds b = tiny(2, 4, 2, 6);
      b.slot_rule = rule;
      b.slot_mode = mode;
      b.max_chkp_slot = 3;
      for (auto m : {Mutation::None, Mutation::QuorumHalf, Mutation::DisableE1,
                     Mutation::DisableE2, Mutation::DisableSlashing,
                     Mutation::DropAncestryInJustification}) {
        const auto rules = rules_for(m);
        for (const auto &forest : graph_units(b)) {
          CompiledGraph g(std::make_shared<const BlockForest>(forest), b, rules);
          g.for_each_state([&](const CompiledGraph::Support &sup,
                               std::span<const std::uint32_t> masks) {
            const auto ev = g.evaluate(sup, masks);
            const auto state = g.materialize(sup, masks);
            const auto generic = accountable_safety(state, rules);
            EXPECT_EQ(bits_to_set(ev.justified, g.checkpoints()),
                      generic.view.justified);
            EXPECT_EQ(bits_to_set(ev.finalized, g.checkpoints()),
                      generic.view.finalized);
            EXPECT_EQ(ev.disagreement, generic.disagreement);
            EXPECT_EQ(ev.holds, generic.holds);
            if (ev.disagreement) {
              EXPECT_EQ(ev.slashable, generic.slashable.size());
            }
            return !::testing::Test::HasFailure();
          });
          ASSERT_FALSE(::testing::Test::HasFailure());
        }
      }
    }
  }
}

TEST(Search, SingleBlockHoldsTrivially) {
  const auto r = search(tiny(1, 4, 3, 9), Mutation::QuorumHalf);
  EXPECT_EQ(r.verdict, Verdict::HoldsExhaustively);
  EXPECT_EQ(r.graphs_pruned, 1u);
  EXPECT_EQ(r.states_checked, 0u);
}

TEST(Search, QuorumHalfNeedsFourDistinctFfgVotes) {
  // Two disjoint halves each justify and finalize on their own branch.
  EXPECT_EQ(search(tiny(2, 4, 3, 9), Mutation::QuorumHalf).verdict,
            Verdict::HoldsExhaustively);
  const auto r = search(tiny(2, 4, 4, 8), Mutation::QuorumHalf);
  ASSERT_EQ(r.verdict, Verdict::CounterexampleFound);
  ASSERT_TRUE(r.counterexample);
  EXPECT_FALSE(r.counterexample->verdict.holds);
  EXPECT_TRUE(r.counterexample->verdict.disagreement);
}

TEST(Search, UnmutatedHoldsOnSmallForests) {
  Bounds b = tiny(3, 3, 3, 6);
  b.max_chkp_slot = 4;
  const auto r = search(b, Mutation::None);
  EXPECT_EQ(r.verdict, Verdict::HoldsExhaustively);
  EXPECT_EQ(r.finalization_divergences, 0u);
}

TEST(Search, BudgetMakesItInconclusive) {
  SearchOptions o;
  o.budget = 100;
  const auto r = search(tiny(2, 4, 3, 9), Mutation::None, o);
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
  EXPECT_EQ(r.states_checked + r.states_pruned, 100u);
}

TEST(Search, JobsDoNotChangeTheReport) {
  Bounds b = tiny(3, 3, 4, 8);
  for (auto m : {Mutation::None, Mutation::DisableSlashing}) {
    for (std::optional<std::uint64_t> budget :
         {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{2000},
          std::optional<std::uint64_t>{250000}}) {
      SearchOptions one{1, budget};
      SearchOptions many{4, budget};
      const auto a = search(b, m, one);
      const auto c = search(b, m, many);
      EXPECT_EQ(a.verdict, c.verdict);
      EXPECT_EQ(a.states_checked, c.states_checked);
      EXPECT_EQ(a.states_pruned, c.states_pruned);
      EXPECT_EQ(a.graphs_checked, c.graphs_checked);
      EXPECT_EQ(a.graphs_pruned, c.graphs_pruned);
      ASSERT_EQ(a.counterexample.has_value(), c.counterexample.has_value());
      if (a.counterexample) {
        EXPECT_EQ(a.counterexample->state, c.counterexample->state);
      }
    }
  }
}

TEST(Search, QuorumPruneKeepsTheVerdict) {
  // States with fewer signers than a quorum are skipped under mutation
  // None; the generic evaluator over the unpruned space must agree.
  Bounds b = tiny(2, 4, 3, 9);
  const auto pruned = search(b, Mutation::None);
  EXPECT_GT(pruned.states_pruned, 0u);
  std::uint64_t violations = 0;
  for (const auto &f : graph_units(b)) {
    if (!f.has_conflicting_pair()) {
      continue;
    }
    enumerate_states(b, f, [&](const ProtocolState &s) {
      violations += accountable_safety(s).holds ? 0 : 1;
      return true;
    });
  }
  EXPECT_EQ(violations, 0u);
  EXPECT_EQ(pruned.verdict, Verdict::HoldsExhaustively);
}

TEST(Search, CatalogGraphFilter) {
  Bounds b = tiny(2, 4, 4, 12);
  b.graph_filter = CatalogId::SingleChain;
  const auto r = search(b, Mutation::QuorumHalf);
  EXPECT_EQ(r.verdict, Verdict::HoldsExhaustively);
  EXPECT_EQ(r.graphs_pruned, 1u);
  b.graph_filter = CatalogId::M3;
  EXPECT_EQ(search(b, Mutation::QuorumHalf).verdict,
            Verdict::CounterexampleFound);
}

TEST(Examples, FinalizedNonGenesisAtTinyBounds) {
  const auto r = find_example(tiny(1, 4, 3, 6),
                              ExampleProperty::FinalizedNonGenesis);
  ASSERT_TRUE(r.found());
  EXPECT_TRUE(has_property(*r.state, ExampleProperty::FinalizedNonGenesis));
  EXPECT_EQ(r.state->votes().size(), 6u);
}

TEST(Examples, JustifiedNeedsAQuorumOfVotes) {
  EXPECT_FALSE(find_example(tiny(2, 4, 3, 2),
                            ExampleProperty::JustifiedNonGenesis)
                   .found());
  EXPECT_TRUE(find_example(tiny(2, 4, 3, 3),
                           ExampleProperty::JustifiedNonGenesis)
                  .found());
}

TEST(Examples, ConflictingFinalizedIsAccountable) {
  const auto r = find_example(tiny(2, 4, 4, 12),
                              ExampleProperty::ConflictingFinalized);
  ASSERT_TRUE(r.found());
  const auto v = accountable_safety(*r.state);
  EXPECT_TRUE(v.disagreement);
  EXPECT_GE(3 * v.slashable.size(), 4u);
}

TEST(Bounds, RejectsUnsupportedValues) {
  Bounds b;
  b.n_validators = 0;
  EXPECT_THROW(b.validate(), InputError);
  b.n_validators = 65;
  EXPECT_THROW(b.validate(), InputError);
  b = Bounds{};
  b.max_ffg_votes = 17;
  EXPECT_THROW(b.validate(), InputError);
  EXPECT_THROW(parse_mutation("flip"), InputError);
  EXPECT_EQ(parse_mutation("drop-ancestry"),
            Mutation::DropAncestryInJustification);
}
