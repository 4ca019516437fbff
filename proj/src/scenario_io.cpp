/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ffgmc/scenario_io.hpp"

#include <limits>

#include <fmt/format.h>

namespace ffgmc {

  namespace {

    Json checkpoint_json(const BlockForest &forest, const Checkpoint &cp) {
      return Json{{"block", forest.block(cp.block).label}, {"c", cp.c}};
    }

    Json checkpoint_json_full(const BlockForest &forest, const Checkpoint &cp) {
      return Json{{"block", forest.block(cp.block).label},
                  {"c", cp.c},
                  {"p", cp.p}};
    }

    Json ffg_json(const BlockForest &forest, const FfgVote &v) {
      return Json{{"source", checkpoint_json(forest, v.source)},
                  {"target", checkpoint_json(forest, v.target)}};
    }

    [[noreturn]] void field_error(const std::string &path,
                                  std::string_view what) {
      throw InputError(fmt::format("{}: {}", path, what));
    }

    const Json &member(const Json &obj,
                       const std::string &path,
                       const char *key) {
      if (!obj.is_object()) {
        field_error(path, "expected an object");
      }
      auto it = obj.find(key);
      if (it == obj.end()) {
        field_error(path, fmt::format("missing field '{}'", key));
      }
      return *it;
    }

    std::uint64_t unsigned_field(const Json &obj,
                                 const std::string &path,
                                 const char *key) {
      const auto &v = member(obj, path, key);
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        field_error(path + "." + key, "expected a non-negative integer");
      }
      const auto u = v.get<std::uint64_t>();
      if (u > std::numeric_limits<std::uint32_t>::max()) {
        field_error(path + "." + key, "value out of range");
      }
      return u;
    }

    std::string string_field(const Json &obj,
                             const std::string &path,
                             const char *key) {
      const auto &v = member(obj, path, key);
      if (!v.is_string()) {
        field_error(path + "." + key, "expected a string");
      }
      return v.get<std::string>();
    }

    Checkpoint checkpoint_from(const Json &obj,
                               const std::string &path,
                               const BlockForest &forest) {
      const auto label = string_field(obj, path, "block");
      const auto id = forest.find(label);
      if (!id) {
        field_error(path + ".block", fmt::format("unknown block '{}'", label));
      }
      const auto c = static_cast<Slot>(unsigned_field(obj, path, "c"));
      return Checkpoint{*id, c, forest.block(*id).slot};
    }

  }  // namespace

  Json scenario_to_json(const ProtocolState &state) {
    const auto &forest = state.forest();
    Json doc;
    doc["n_validators"] = state.n_validators();
    doc["slot_rule"] = std::string(to_string(state.slot_rule()));
    Json blocks = Json::array();
    for (const auto &b : forest.blocks()) {
      if (b.id == kGenesis) {
        continue;
      }
      Json jb{{"id", b.label}, {"slot", b.slot}};
      jb["parent"] =
          b.parent ? Json(forest.block(*b.parent).label) : Json(nullptr);
      blocks.push_back(std::move(jb));
    }
    doc["blocks"] = std::move(blocks);
    Json votes = Json::array();
    for (const auto &sv : state.votes()) {
      votes.push_back(Json{{"validator", sv.validator},
                           {"source", checkpoint_json(forest, sv.vote.source)},
                           {"target", checkpoint_json(forest, sv.vote.target)}});
    }
    doc["votes"] = std::move(votes);
    return doc;
  }

  ProtocolState scenario_from_json(const Json &doc) {
    if (!doc.is_object()) {
      field_error("$", "expected an object");
    }
    const auto n = static_cast<std::uint32_t>(
        unsigned_field(doc, "$", "n_validators"));
    if (n == 0) {
      field_error("n_validators", "must be positive");
    }
    SlotRule rule = SlotRule::Strict;
    if (doc.contains("slot_rule")) {
      const auto text = string_field(doc, "$", "slot_rule");
      try {
        rule = parse_slot_rule(text);
      } catch (const InputError &e) {
        field_error("slot_rule", e.what());
      }
    }

    std::vector<BlockForest::BlockSpec> specs;
    if (doc.contains("blocks")) {
      const auto &blocks = doc["blocks"];
      if (!blocks.is_array()) {
        field_error("blocks", "expected an array");
      }
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto path = fmt::format("blocks[{}]", i);
        BlockForest::BlockSpec spec;
        spec.label = string_field(blocks[i], path, "id");
        spec.slot = static_cast<Slot>(unsigned_field(blocks[i], path, "slot"));
        if (blocks[i].contains("parent") && !blocks[i]["parent"].is_null()) {
          spec.parent = string_field(blocks[i], path, "parent");
        }
        specs.push_back(std::move(spec));
      }
    }
    std::optional<BlockForest> forest;
    try {
      forest = BlockForest::from_specs(specs);
    } catch (const InputError &e) {
      field_error("blocks", e.what());
    }

    std::vector<SignedVote> votes;
    if (doc.contains("votes")) {
      const auto &jv = doc["votes"];
      if (!jv.is_array()) {
        field_error("votes", "expected an array");
      }
      for (std::size_t i = 0; i < jv.size(); ++i) {
        const auto path = fmt::format("votes[{}]", i);
        const auto validator =
            static_cast<ValidatorIndex>(unsigned_field(jv[i], path, "validator"));
        if (validator >= n) {
          field_error(path + ".validator",
                      fmt::format("validator {} out of range for {} validators",
                                  validator,
                                  n));
        }
        const auto source =
            checkpoint_from(member(jv[i], path, "source"), path + ".source", *forest);
        const auto target =
            checkpoint_from(member(jv[i], path, "target"), path + ".target", *forest);
        votes.push_back(SignedVote{FfgVote{source, target}, validator});
      }
    }
    return ProtocolState(std::move(*forest), n, std::move(votes), rule);
  }

  ProtocolState parse_scenario(std::string_view text) {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error &e) {
      std::size_t line = 1;
      std::size_t col = 1;
      const auto end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0,
                                             text.size());
      for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      throw InputError(
          fmt::format("line {}, column {}: malformed JSON", line, col));
    }
    return scenario_from_json(doc);
  }

  std::string emit_scenario(const ProtocolState &state) {
    return scenario_to_json(state).dump(2) + "\n";
  }

  Json verdict_to_json(const ProtocolState &state,
                       const SafetyVerdict &verdict) {
    const auto &forest = state.forest();
    Json doc = scenario_to_json(state);
    doc["holds"] = verdict.holds;
    doc["disagreement"] = verdict.disagreement;
    Json justified = Json::array();
    for (const auto &cp : verdict.view.justified) {
      justified.push_back(checkpoint_json_full(forest, cp));
    }
    doc["justified"] = std::move(justified);
    Json finalized = Json::array();
    for (const auto &cp : verdict.view.finalized) {
      finalized.push_back(checkpoint_json_full(forest, cp));
    }
    doc["finalized"] = std::move(finalized);
    doc["slashable"] = Json(std::vector<ValidatorIndex>(
        verdict.slashable.begin(), verdict.slashable.end()));
    Json evidence = Json::array();
    for (const auto &e : verdict.evidence) {
      evidence.push_back(Json{{"validator", e.validator},
                              {"kind", std::string(to_string(e.kind))},
                              {"vote_a", ffg_json(forest, e.vote_a)},
                              {"vote_b", ffg_json(forest, e.vote_b)}});
    }
    doc["evidence"] = std::move(evidence);
    return doc;
  }

  Json bounds_to_json(const Bounds &b) {
    Json doc;
    doc["n_blocks"] = b.n_blocks;
    doc["max_slot"] = b.effective_max_slot();
    doc["max_chkp_slot"] = b.max_chkp_slot;
    doc["n_validators"] = b.n_validators;
    doc["max_ffg_votes"] = b.max_ffg_votes;
    doc["max_votes"] = b.max_votes;
    doc["slot_rule"] = std::string(to_string(b.slot_rule));
    doc["slot_mode"] = b.slot_mode == SlotMode::Depth ? "depth" : "free";
    doc["forest_convention"] =
        b.forest_convention == ForestConvention::GenesisRooted ? "rooted"
                                                               : "detached";
    doc["graph"] =
        b.graph_filter ? Json(std::string(to_string(*b.graph_filter))) : Json();
    return doc;
  }

  Json report_to_json(const SearchReport &r) {
    Json doc;
    doc["verdict"] = std::string(to_string(r.verdict));
    doc["mutation"] = std::string(to_string(r.mutation));
    doc["bounds"] = bounds_to_json(r.bounds);
    doc["states_checked"] = r.states_checked;
    doc["states_pruned"] = r.states_pruned;
    doc["graphs_checked"] = r.graphs_checked;
    doc["graphs_pruned"] = r.graphs_pruned;
    doc["finalization_divergences"] = r.finalization_divergences;
    doc["wall_time_s"] = r.wall_time.count();
    if (r.counterexample) {
      doc["counterexample"] =
          verdict_to_json(r.counterexample->state, r.counterexample->verdict);
    }
    return doc;
  }

}  // namespace ffgmc
