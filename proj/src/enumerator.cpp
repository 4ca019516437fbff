/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ffgmc/enumerator.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <thread>

#include <fmt/format.h>

namespace ffgmc {

  std::string_view to_string(Mutation m) {
    switch (m) {
      case Mutation::None:
        return "none";
      case Mutation::QuorumHalf:
        return "quorum-half";
      case Mutation::DisableE1:
        return "disable-e1";
      case Mutation::DisableE2:
        return "disable-e2";
      case Mutation::DisableSlashing:
        return "disable-slashing";
      case Mutation::DropAncestryInJustification:
        return "drop-ancestry";
    }
    return "?";
  }

  Mutation parse_mutation(std::string_view text) {
    for (auto m : {Mutation::None,
                   Mutation::QuorumHalf,
                   Mutation::DisableE1,
                   Mutation::DisableE2,
                   Mutation::DisableSlashing,
                   Mutation::DropAncestryInJustification}) {
      if (to_string(m) == text) {
        return m;
      }
    }
    if (text == "disable-e1-e2") {
      return Mutation::DisableSlashing;
    }
    throw InputError(fmt::format(
        "unknown mutation '{}' (expected none, quorum-half, disable-e1, "
        "disable-e2, disable-slashing, drop-ancestry)",
        text));
  }

  RuleSet rules_for(Mutation m) {
    RuleSet r;
    switch (m) {
      case Mutation::None:
        break;
      case Mutation::QuorumHalf:
        r.quorum = Quorum::Half;
        break;
      case Mutation::DisableE1:
        r.double_vote_slashing = false;
        break;
      case Mutation::DisableE2:
        r.surround_vote_slashing = false;
        break;
      case Mutation::DisableSlashing:
        r.double_vote_slashing = false;
        r.surround_vote_slashing = false;
        break;
      case Mutation::DropAncestryInJustification:
        r.justification_ancestry = false;
        break;
    }
    return r;
  }

  std::string_view to_string(Verdict v) {
    switch (v) {
      case Verdict::HoldsExhaustively:
        return "HoldsExhaustively";
      case Verdict::CounterexampleFound:
        return "CounterexampleFound";
      case Verdict::Inconclusive:
        return "Inconclusive";
    }
    return "?";
  }

  std::string_view to_string(ExampleProperty p) {
    switch (p) {
      case ExampleProperty::FinalizedNonGenesis:
        return "finalized-nongenesis";
      case ExampleProperty::JustifiedNonGenesis:
        return "justified-nongenesis";
      case ExampleProperty::ConflictingFinalized:
        return "conflicting-finalized";
    }
    return "?";
  }

  ExampleProperty parse_example_property(std::string_view text) {
    for (auto p : {ExampleProperty::FinalizedNonGenesis,
                   ExampleProperty::JustifiedNonGenesis,
                   ExampleProperty::ConflictingFinalized}) {
      if (to_string(p) == text) {
        return p;
      }
    }
    throw InputError(fmt::format(
        "unknown property '{}' (expected finalized-nongenesis, "
        "justified-nongenesis, conflicting-finalized)",
        text));
  }

  void Bounds::validate() const {
    if (n_validators == 0 || n_validators > CompiledGraph::kMaxValidators) {
      throw InputError(fmt::format("validators must be in [1, {}], got {}",
                                   CompiledGraph::kMaxValidators,
                                   n_validators));
    }
    if (max_ffg_votes > CompiledGraph::kMaxSupport) {
      throw InputError(fmt::format("max-ffg must be at most {}, got {}",
                                   CompiledGraph::kMaxSupport,
                                   max_ffg_votes));
    }
    if (n_blocks > 10) {
      throw InputError(
          fmt::format("blocks must be at most 10, got {}", n_blocks));
    }
    if (n_blocks > 0 && effective_max_slot() == 0) {
      throw InputError("max-slot must be positive when blocks > 0");
    }
  }

  // --- forests ---------------------------------------------------------------

  namespace {

    bool acyclic(const std::vector<std::size_t> &parents) {
      const auto n = parents.size();
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t cur = i + 1;
        for (std::size_t steps = 0;; ++steps) {
          if (steps > n) {
            return false;
          }
          const auto p = parents[cur - 1];
          if (p == 0 || p == BlockForest::kNoParent) {
            break;
          }
          cur = p;
        }
      }
      return true;
    }

  }  // namespace

  std::vector<ForestShape> enumerate_forests(std::size_t n,
                                             ForestConvention convention) {
    std::vector<std::size_t> choices;
    for (std::size_t p = 0; p <= n; ++p) {
      choices.push_back(p);
    }
    if (convention == ForestConvention::WithDetachedRoots) {
      choices.push_back(BlockForest::kNoParent);
    }

    std::vector<ForestShape> out;
    std::vector<std::size_t> idx(n, 0);
    std::vector<std::size_t> parents(n);
    while (true) {
      bool self_loop = false;
      for (std::size_t i = 0; i < n; ++i) {
        parents[i] = choices[idx[i]];
        self_loop = self_loop || parents[i] == i + 1;
      }
      if (!self_loop && acyclic(parents)) {
        out.push_back(ForestShape{parents});
      }
      // Odometer, last position fastest.
      std::size_t k = n;
      while (k > 0 && ++idx[k - 1] == choices.size()) {
        idx[k - 1] = 0;
        --k;
      }
      if (k == 0) {
        break;
      }
    }
    return out;
  }

  std::vector<std::vector<Slot>> slot_assignments(const ForestShape &shape,
                                                  const Bounds &bounds) {
    const auto n = shape.parents.size();
    const Slot max_slot = bounds.effective_max_slot();
    std::vector<std::vector<Slot>> out;

    if (bounds.slot_mode == SlotMode::Depth) {
      std::vector<Slot> slots(n);
      for (std::size_t i = 0; i < n; ++i) {
        Slot d = 1;
        for (auto p = shape.parents[i]; p != 0 && p != BlockForest::kNoParent;
             p = shape.parents[p - 1]) {
          ++d;
        }
        slots[i] = d;
      }
      if (std::all_of(slots.begin(), slots.end(), [&](Slot s) {
            return s <= max_slot;
          })) {
        out.push_back(std::move(slots));
      }
      return out;
    }

    if (max_slot == 0) {
      if (n == 0) {
        out.emplace_back();
      }
      return out;
    }
    std::vector<Slot> slots(n, 1);
    while (true) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        const auto p = shape.parents[i];
        if (p != 0 && p != BlockForest::kNoParent) {
          ok = slots[p - 1] < slots[i];
        }
      }
      if (ok) {
        out.push_back(slots);
      }
      std::size_t k = n;
      while (k > 0 && ++slots[k - 1] > max_slot) {
        slots[k - 1] = 1;
        --k;
      }
      if (k == 0) {
        break;
      }
    }
    return out;
  }

  std::vector<BlockForest> graph_units(const Bounds &bounds) {
    bounds.validate();
    std::vector<BlockForest> out;
    if (bounds.graph_filter) {
      out.push_back(catalog_forest(*bounds.graph_filter));
      return out;
    }
    for (const auto &shape :
         enumerate_forests(bounds.n_blocks, bounds.forest_convention)) {
      for (const auto &slots : slot_assignments(shape, bounds)) {
        out.push_back(BlockForest::from_parents(shape.parents, slots));
      }
    }
    return out;
  }

  // --- compiled evaluator ----------------------------------------------------

  CompiledGraph::CompiledGraph(std::shared_ptr<const BlockForest> forest,
                               const Bounds &bounds,
                               const RuleSet &rules)
      : forest_(std::move(forest)), bounds_(bounds), rules_(rules) {
    bounds_.validate();
    checkpoints_ =
        valid_checkpoints(*forest_, bounds_.slot_rule, bounds_.max_chkp_slot);
    if (checkpoints_.size() > kMaxCheckpoints) {
      throw InputError(fmt::format(
          "{} candidate checkpoints exceed the limit of {}; lower "
          "max-chkp-slot or the block count",
          checkpoints_.size(),
          kMaxCheckpoints));
    }
    const auto n = checkpoints_.size();
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        FfgVote v{checkpoints_[s], checkpoints_[t]};
        if (is_valid_ffg_vote(*forest_, bounds_.slot_rule, v)) {
          ffg_votes_.push_back(v);
          source_index_.push_back(static_cast<std::uint16_t>(s));
          target_index_.push_back(static_cast<std::uint16_t>(t));
        }
      }
    }
    if (ffg_votes_.size() > 0xffff) {
      throw InputError("too many candidate FFG votes");
    }

    for (std::size_t f = 0; f < ffg_votes_.size(); ++f) {
      const auto &v = ffg_votes_[f];
      std::uint64_t covers = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto &c = checkpoints_[i];
        if (c.c != v.target.c || c == kGenesisCheckpoint) {
          continue;
        }
        if (rules_.justification_ancestry
            && !(forest_->is_ancestor(v.source.block, c.block)
                 && forest_->is_ancestor(c.block, v.target.block))) {
          continue;
        }
        covers |= std::uint64_t{1} << i;
      }
      covers_.push_back(covers);
      const bool next_slot = v.target.c == v.source.c + 1;
      finalizes_source_.push_back(next_slot ? 1 : 0);
      finalizes_with_ancestry_.push_back(
          next_slot && forest_->is_ancestor(v.source.block, v.target.block)
              ? 1
              : 0);
    }

    conflicts_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (forest_->are_conflicting(checkpoints_[i].block,
                                     checkpoints_[j].block)) {
          conflicts_[i] |= std::uint64_t{1} << j;
        }
      }
    }
  }

  CompiledGraph::Support CompiledGraph::make_support(
      std::span<const std::uint16_t> votes) const {
    if (votes.size() > kMaxSupport) {
      throw InputError("support too large");
    }
    Support s;
    s.votes_.assign(votes.begin(), votes.end());
    const auto m = votes.size();
    std::vector<std::uint32_t> pairs(m, 0);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        if (a != b
            && is_slashable_pair(
                ffg_votes_[votes[a]], ffg_votes_[votes[b]], rules_)) {
          pairs[a] |= 1u << b;
        }
      }
    }
    const std::uint32_t size = 1u << m;
    s.slashable_mask_.assign(size, 0);
    for (std::uint32_t mask = 1; mask < size; ++mask) {
      const auto hi = static_cast<std::size_t>(std::bit_width(mask) - 1);
      const std::uint32_t rest = mask & ~(1u << hi);
      s.slashable_mask_[mask] =
          s.slashable_mask_[rest] || (pairs[hi] & rest) != 0 ? 1 : 0;
    }
    return s;
  }

  CompiledGraph::Evaluation CompiledGraph::evaluate(
      const Support &support, std::span<const std::uint32_t> masks) const {
    const auto m = support.votes_.size();
    const auto n_validators = static_cast<std::uint32_t>(masks.size());
    std::uint64_t signers[kMaxSupport] = {};
    for (std::uint32_t v = 0; v < n_validators; ++v) {
      for (auto mask = masks[v]; mask != 0; mask &= mask - 1) {
        signers[std::countr_zero(mask)] |= std::uint64_t{1} << v;
      }
    }
    auto quorum = [&](std::uint64_t s) {
      return is_quorum(rules_.quorum,
                       static_cast<std::size_t>(std::popcount(s)),
                       n_validators);
    };

    Evaluation ev;
    // checkpoints_[0] is always the genesis checkpoint.
    std::uint64_t justified = 1;
    while (true) {
      std::uint64_t candidates = 0;
      for (std::size_t j = 0; j < m; ++j) {
        const auto f = support.votes_[j];
        if (justified >> source_index_[f] & 1) {
          candidates |= covers_[f];
        }
      }
      std::uint64_t next = 1;
      for (auto bits = candidates; bits != 0; bits &= bits - 1) {
        const auto i = std::countr_zero(bits);
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < m; ++j) {
          const auto f = support.votes_[j];
          if ((justified >> source_index_[f] & 1) && (covers_[f] >> i & 1)) {
            s |= signers[j];
          }
        }
        if (quorum(s)) {
          next |= std::uint64_t{1} << i;
        }
      }
      if (next == justified) {
        break;
      }
      justified = next;
    }
    ev.justified = justified;

    auto finalized_with = [&](const std::vector<std::uint8_t> &flag) {
      std::uint64_t finalized = 1;
      for (std::size_t j = 0; j < m; ++j) {
        const auto f = support.votes_[j];
        const auto src = source_index_[f];
        if (!flag[f] || !(justified >> src & 1) || (finalized >> src & 1)) {
          continue;
        }
        std::uint64_t s = 0;
        for (std::size_t k = j; k < m; ++k) {
          const auto g = support.votes_[k];
          if (flag[g] && source_index_[g] == src) {
            s |= signers[k];
          }
        }
        if (quorum(s)) {
          finalized |= std::uint64_t{1} << src;
        }
      }
      return finalized;
    };
    ev.finalized = finalized_with(finalizes_source_);
    ev.readings_differ = ev.finalized != finalized_with(finalizes_with_ancestry_);

    for (auto bits = ev.finalized; bits != 0; bits &= bits - 1) {
      if (ev.finalized & conflicts_[std::countr_zero(bits)]) {
        ev.disagreement = true;
        break;
      }
    }
    if (ev.disagreement) {
      for (auto mask : masks) {
        ev.slashable += support.slashable_mask_[mask];
      }
      ev.holds = enough_slashed(ev.slashable, n_validators);
    }
    return ev;
  }

  ProtocolState CompiledGraph::materialize(
      const Support &support, std::span<const std::uint32_t> masks) const {
    std::vector<SignedVote> votes;
    for (std::uint32_t v = 0; v < masks.size(); ++v) {
      for (auto mask = masks[v]; mask != 0; mask &= mask - 1) {
        votes.push_back(SignedVote{
            ffg_votes_[support.votes_[std::countr_zero(mask)]], v});
      }
    }
    return ProtocolState(forest_,
                         static_cast<std::uint32_t>(masks.size()),
                         std::move(votes),
                         bounds_.slot_rule);
  }

  bool CompiledGraph::for_each_state(
      const std::function<bool(const Support &,
                               std::span<const std::uint32_t>)> &visit) const {
    const auto n_validators = bounds_.n_validators;
    const auto max_votes = bounds_.max_votes;
    const std::size_t max_support = std::min(
        {bounds_.max_ffg_votes, ffg_votes_.size(), kMaxSupport, max_votes});
    std::vector<std::uint32_t> masks(n_validators, 0);

    for (std::size_t k = 0; k <= max_support; ++k) {
      std::vector<std::uint16_t> combo(k);
      for (std::size_t i = 0; i < k; ++i) {
        combo[i] = static_cast<std::uint16_t>(i);
      }
      while (true) {
        const auto support = make_support(combo);
        const std::uint32_t full = support.full_mask();
        bool keep_going = true;

        // Non-decreasing mask sequences; `pos` is the next validator.
        std::function<void(std::size_t, std::uint32_t, std::uint32_t,
                           std::size_t)>
            place = [&](std::size_t pos,
                        std::uint32_t lo,
                        std::uint32_t unioned,
                        std::size_t total) {
              if (!keep_going) {
                return;
              }
              if (pos == n_validators) {
                if (unioned == full && !visit(support, masks)) {
                  keep_going = false;
                }
                return;
              }
              for (std::uint32_t mask = lo; mask <= full && keep_going;
                   ++mask) {
                const auto count =
                    total + static_cast<std::size_t>(std::popcount(mask));
                if (count > max_votes) {
                  continue;
                }
                masks[pos] = mask;
                place(pos + 1, mask, unioned | mask, count);
              }
            };
        place(0, 0, 0, 0);
        if (!keep_going) {
          return false;
        }

        // Next k-combination of ffg vote indices.
        std::size_t i = k;
        while (i > 0 && combo[i - 1] == ffg_votes_.size() - k + i - 1) {
          --i;
        }
        if (i == 0) {
          break;
        }
        ++combo[i - 1];
        for (std::size_t j = i; j < k; ++j) {
          combo[j] = static_cast<std::uint16_t>(combo[j - 1] + 1);
        }
      }
    }
    return true;
  }

  std::uint64_t enumerate_states(const Bounds &bounds,
                                 const BlockForest &forest,
                                 const StateVisitor &visit) {
    CompiledGraph graph(
        std::make_shared<const BlockForest>(forest), bounds, RuleSet{});
    std::uint64_t count = 0;
    graph.for_each_state([&](const CompiledGraph::Support &s,
                             std::span<const std::uint32_t> masks) {
      ++count;
      return visit(graph.materialize(s, masks));
    });
    return count;
  }

  std::uint64_t enumerate_states(const Bounds &bounds,
                                 const ForestShape &shape,
                                 const StateVisitor &visit) {
    std::uint64_t count = 0;
    bool stopped = false;
    for (const auto &slots : slot_assignments(shape, bounds)) {
      const auto forest = BlockForest::from_parents(shape.parents, slots);
      count += enumerate_states(bounds, forest, [&](const ProtocolState &s) {
        if (!visit(s)) {
          stopped = true;
          return false;
        }
        return true;
      });
      if (stopped) {
        break;
      }
    }
    return count;
  }

  // --- search ----------------------------------------------------------------

  namespace {

    /// What a scan over one graph looks for.
    struct Goal {
      enum class Kind { Violation, Property } kind = Kind::Violation;
      ExampleProperty property = ExampleProperty::FinalizedNonGenesis;
      bool quorum_prune = false;
      bool vacuity_prune = true;
    };

    struct UnitResult {
      std::uint64_t visited = 0;
      std::uint64_t checked = 0;
      std::uint64_t pruned = 0;
      std::uint64_t divergences = 0;
      bool graph_pruned = false;
      bool complete = true;
      std::optional<ProtocolState> hit;
    };

    bool matches(const Goal &goal, const CompiledGraph::Evaluation &ev) {
      if (goal.kind == Goal::Kind::Violation) {
        return !ev.holds;
      }
      switch (goal.property) {
        case ExampleProperty::FinalizedNonGenesis:
          return ev.finalized != 1;
        case ExampleProperty::JustifiedNonGenesis:
          return ev.justified != 1;
        case ExampleProperty::ConflictingFinalized:
          return ev.disagreement;
      }
      return false;
    }

    UnitResult run_unit(const std::shared_ptr<const BlockForest> &forest,
                        const Bounds &bounds,
                        const RuleSet &rules,
                        const Goal &goal,
                        std::optional<std::uint64_t> cap) {
      UnitResult r;
      if (goal.vacuity_prune && !forest->has_conflicting_pair()) {
        r.graph_pruned = true;
        return r;
      }
      CompiledGraph graph(forest, bounds, rules);
      const std::size_t min_signers = goal.quorum_prune
          ? quorum_size(Quorum::TwoThirds, bounds.n_validators)
          : 0;
      graph.for_each_state([&](const CompiledGraph::Support &support,
                               std::span<const std::uint32_t> masks) {
        if (cap && r.visited == *cap) {
          r.complete = false;
          return false;
        }
        ++r.visited;
        if (min_signers > 0) {
          const auto signers = static_cast<std::size_t>(
              std::count_if(masks.begin(), masks.end(), [](std::uint32_t m) {
                return m != 0;
              }));
          if (signers < min_signers) {
            ++r.pruned;
            return true;
          }
        }
        ++r.checked;
        const auto ev = graph.evaluate(support, masks);
        if (ev.readings_differ) {
          ++r.divergences;
        }
        if (matches(goal, ev)) {
          r.hit = graph.materialize(support, masks);
          return false;
        }
        return true;
      });
      return r;
    }

    struct Merged {
      Verdict verdict = Verdict::HoldsExhaustively;
      std::optional<ProtocolState> hit;
      std::uint64_t checked = 0;
      std::uint64_t pruned = 0;
      std::uint64_t graphs_checked = 0;
      std::uint64_t graphs_pruned = 0;
      std::uint64_t divergences = 0;
    };

    /// Runs every unit and folds the results in canonical order. The fold
    /// only ever consumes results computed with the exact remaining budget
    /// (re-running a unit when needed), so the outcome does not depend on
    /// `jobs`.
    Merged run_units(std::span<const BlockForest> forests,
                     const Bounds &bounds,
                     const RuleSet &rules,
                     const Goal &goal,
                     const SearchOptions &options) {
      std::vector<std::shared_ptr<const BlockForest>> shared;
      shared.reserve(forests.size());
      for (const auto &f : forests) {
        shared.push_back(std::make_shared<const BlockForest>(f));
      }

      std::vector<std::optional<UnitResult>> pre(forests.size());
      const unsigned jobs = std::max(1u, options.jobs);
      if (jobs > 1 && forests.size() > 1) {
        std::atomic<std::size_t> next{0};
        std::atomic<std::size_t> first_hit{forests.size()};
        auto worker = [&] {
          while (true) {
            const auto i = next.fetch_add(1);
            if (i >= forests.size()) {
              return;
            }
            if (i > first_hit.load()) {
              continue;
            }
            pre[i] = run_unit(shared[i], bounds, rules, goal, options.budget);
            if (pre[i]->hit) {
              auto cur = first_hit.load();
              while (i < cur && !first_hit.compare_exchange_weak(cur, i)) {
              }
            }
          }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(jobs, forests.size());
             ++t) {
          pool.emplace_back(worker);
        }
        for (auto &t : pool) {
          t.join();
        }
      }

      Merged m;
      std::uint64_t used = 0;
      for (std::size_t i = 0; i < forests.size(); ++i) {
        std::optional<std::uint64_t> remaining;
        if (options.budget) {
          remaining = *options.budget - used;
        }
        UnitResult r;
        if (pre[i] && pre[i]->complete
            && (!remaining || pre[i]->visited <= *remaining)) {
          r = std::move(*pre[i]);
        } else {
          r = run_unit(shared[i], bounds, rules, goal, remaining);
        }
        used += r.visited;
        m.checked += r.checked;
        m.pruned += r.pruned;
        m.divergences += r.divergences;
        if (r.graph_pruned) {
          ++m.graphs_pruned;
        } else {
          ++m.graphs_checked;
        }
        if (r.hit) {
          m.verdict = Verdict::CounterexampleFound;
          m.hit = std::move(r.hit);
          return m;
        }
        if (!r.complete) {
          m.verdict = Verdict::Inconclusive;
          return m;
        }
      }
      return m;
    }

  }  // namespace

  SearchReport search_forests(const Bounds &bounds,
                              Mutation mutation,
                              std::span<const BlockForest> forests,
                              const SearchOptions &options) {
    const auto start = std::chrono::steady_clock::now();
    bounds.validate();
    const auto rules = rules_for(mutation);
    Goal goal;
    goal.quorum_prune = mutation == Mutation::None;

    auto merged = run_units(forests, bounds, rules, goal, options);

    SearchReport report;
    report.bounds = bounds;
    report.mutation = mutation;
    report.verdict = merged.verdict;
    report.states_checked = merged.checked;
    report.states_pruned = merged.pruned;
    report.graphs_checked = merged.graphs_checked;
    report.graphs_pruned = merged.graphs_pruned;
    report.finalization_divergences = merged.divergences;
    if (merged.hit) {
      auto verdict = accountable_safety(*merged.hit, rules);
      if (verdict.holds) {
        throw std::logic_error(
            "compiled evaluator reported a violation the library does not "
            "reproduce");
      }
      report.counterexample =
          Counterexample{std::move(*merged.hit), std::move(verdict)};
    }
    report.wall_time = std::chrono::steady_clock::now() - start;
    return report;
  }

  SearchReport search(const Bounds &bounds,
                      Mutation mutation,
                      const SearchOptions &options) {
    const auto units = graph_units(bounds);
    return search_forests(bounds, mutation, units, options);
  }

  bool has_property(const ProtocolState &state,
                    ExampleProperty property,
                    const RuleSet &rules) {
    const auto verdict = accountable_safety(state, rules);
    switch (property) {
      case ExampleProperty::FinalizedNonGenesis:
        return verdict.view.finalized.size() > 1;
      case ExampleProperty::JustifiedNonGenesis:
        return verdict.view.justified.size() > 1;
      case ExampleProperty::ConflictingFinalized:
        return verdict.disagreement;
    }
    return false;
  }

  ExampleResult find_example(const Bounds &bounds,
                             ExampleProperty property,
                             Mutation mutation,
                             const SearchOptions &options) {
    bounds.validate();
    const auto rules = rules_for(mutation);
    Goal goal;
    goal.kind = Goal::Kind::Property;
    goal.property = property;
    goal.vacuity_prune = property == ExampleProperty::ConflictingFinalized;
    const auto units = graph_units(bounds);
    auto merged = run_units(units, bounds, rules, goal, options);

    ExampleResult result;
    result.status = merged.verdict;
    result.states_checked = merged.checked;
    if (merged.hit) {
      if (!has_property(*merged.hit, property, rules)) {
        throw std::logic_error(
            "compiled evaluator reported an example the library does not "
            "reproduce");
      }
      result.state = std::move(merged.hit);
    }
    return result;
  }

}  // namespace ffgmc
