/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ffgmc/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include <fmt/format.h>

#include "ffgmc/scenario_io.hpp"
#include "ffgmc/smt_bridge.hpp"

#ifndef FFGMC_DEFAULT_SOLVER
#define FFGMC_DEFAULT_SOLVER "cvc5 {file}"
#endif

namespace ffgmc::cli {

  namespace {

    /// Raw flag values; turned into Bounds after parsing so that every
    /// consistency check produces an InputError.
    struct BoundFlags {
      std::size_t blocks = 2;
      std::optional<Slot> max_slot;
      Slot max_chkp_slot = 3;
      std::uint32_t validators = 4;
      std::size_t max_ffg = 3;
      std::size_t max_votes = 9;
      std::string slot_rule = "strict";
      std::string slot_mode = "depth";
      std::string forests = "rooted";
      std::string graph;

      void add_to(CLI::App &app) {
        app.add_option("--blocks", blocks, "non-genesis blocks")
            ->capture_default_str();
        app.add_option("--max-slot", max_slot, "largest block slot");
        app.add_option("--max-chkp-slot", max_chkp_slot,
                       "largest checkpoint slot")
            ->capture_default_str();
        app.add_option("--validators", validators)->capture_default_str();
        app.add_option("--max-ffg", max_ffg, "distinct FFG votes per state")
            ->capture_default_str();
        app.add_option("--max-votes", max_votes, "signed votes per state")
            ->capture_default_str();
        app.add_option("--slot-rule", slot_rule, "strict | nonstrict")
            ->capture_default_str();
        app.add_option("--slot-mode", slot_mode, "depth | free")
            ->capture_default_str();
        app.add_option("--forests", forests, "rooted | detached")
            ->capture_default_str();
        app.add_option("--graph", graph, "restrict to one catalog graph");
      }

      Bounds bounds() const {
        Bounds b;
        b.n_blocks = blocks;
        b.max_slot = max_slot;
        b.max_chkp_slot = max_chkp_slot;
        b.n_validators = validators;
        b.max_ffg_votes = max_ffg;
        b.max_votes = max_votes;
        b.slot_rule = parse_slot_rule(slot_rule);
        if (slot_mode == "depth") {
          b.slot_mode = SlotMode::Depth;
        } else if (slot_mode == "free") {
          b.slot_mode = SlotMode::Free;
        } else {
          throw InputError(fmt::format(
              "unknown slot mode '{}' (expected depth or free)", slot_mode));
        }
        if (forests == "rooted") {
          b.forest_convention = ForestConvention::GenesisRooted;
        } else if (forests == "detached") {
          b.forest_convention = ForestConvention::WithDetachedRoots;
        } else {
          throw InputError(fmt::format(
              "unknown forest convention '{}' (expected rooted or detached)",
              forests));
        }
        if (!graph.empty()) {
          b.graph_filter = parse_catalog_id(graph);
        }
        b.validate();
        return b;
      }
    };

    struct SmtFlags {
      std::string query = "no-accountable-safety";
      std::size_t checkpoints = 5;
      bool free_slots = false;
      bool cap_votes = false;

      void add_to(CLI::App &app) {
        app.add_option("--query", query,
                       "no-accountable-safety | finalized-nongenesis")
            ->capture_default_str();
        app.add_option("--checkpoints", checkpoints,
                       "checkpoint atoms including genesis")
            ->capture_default_str();
        app.add_flag("--unbounded-slots", free_slots,
                     "do not bound block and checkpoint slots");
        app.add_flag("--cap-votes", cap_votes,
                     "bound the number of votes by --max-votes");
      }

      SmtOptions options() const {
        SmtOptions o;
        o.n_checkpoints = checkpoints;
        o.bound_slots = !free_slots;
        o.cap_votes = cap_votes;
        return o;
      }
    };

    std::string read_file(const std::string &path) {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        throw InputError(fmt::format("cannot read '{}'", path));
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }

    void write_output(const std::string &text,
                      const std::string &path,
                      std::ostream &out) {
      if (path.empty()) {
        out << text;
        return;
      }
      std::ofstream f(path, std::ios::binary);
      if (!f) {
        throw InputError(fmt::format("cannot write '{}'", path));
      }
      f << text;
    }

    int verdict_exit(Verdict v) {
      switch (v) {
        case Verdict::HoldsExhaustively:
          return kOk;
        case Verdict::CounterexampleFound:
          return kViolated;
        case Verdict::Inconclusive:
          return kInconclusive;
      }
      return kInconclusive;
    }

  }  // namespace

  std::string default_solver_command() {
    if (const char *env = std::getenv("FFGMC_SOLVER"); env && *env) {
      return env;
    }
    return FFGMC_DEFAULT_SOLVER;
  }

  int run(const std::vector<std::string> &args,
          std::ostream &out,
          std::ostream &err) {
    CLI::App app{"Bounded model checker for FFG accountable safety", "ffgmc"};
    app.require_subcommand(1);
    std::string out_path;

    // check
    auto *check = app.add_subcommand("check", "evaluate one scenario file");
    std::string scenario_path;
    check->add_option("scenario", scenario_path, "scenario JSON")->required();
    check->add_option("--out", out_path, "write the report here");
    std::string check_mutation = "none";
    check->add_option("--mutation", check_mutation,
                      "evaluate under a mutated rule set")
        ->capture_default_str();

    // search
    auto *search_cmd =
        app.add_subcommand("search", "exhaustive search within bounds");
    BoundFlags search_bounds;
    search_bounds.add_to(*search_cmd);
    std::string mutation = "none";
    unsigned jobs = 1;
    std::optional<std::uint64_t> budget;
    search_cmd->add_option("--mutation", mutation)->capture_default_str();
    search_cmd->add_option("--jobs", jobs)->capture_default_str();
    search_cmd->add_option("--budget", budget, "cap on visited states");
    search_cmd->add_option("--out", out_path, "write the report here");

    // example
    auto *example =
        app.add_subcommand("example", "first state with a property");
    BoundFlags example_bounds;
    example_bounds.add_to(*example);
    std::string property;
    example->add_option("--property", property,
                        "finalized-nongenesis | justified-nongenesis | "
                        "conflicting-finalized")
        ->required();
    example->add_option("--mutation", mutation)->capture_default_str();
    example->add_option("--jobs", jobs)->capture_default_str();
    example->add_option("--budget", budget, "cap on visited states");
    example->add_option("--out", out_path, "write the scenario here");

    // emit-smt
    auto *emit = app.add_subcommand("emit-smt", "write an SMT-LIB 2 instance");
    BoundFlags emit_bounds;
    SmtFlags emit_smt_flags;
    emit_bounds.add_to(*emit);
    emit_smt_flags.add_to(*emit);
    emit->add_option("--mutation", mutation)->capture_default_str();
    emit->add_option("--out", out_path, "write the instance here");

    // solve
    auto *solve = app.add_subcommand(
        "solve", "emit an instance and run an external solver on it");
    BoundFlags solve_bounds;
    SmtFlags solve_smt_flags;
    solve_bounds.add_to(*solve);
    solve_smt_flags.add_to(*solve);
    std::string solver_cmd = default_solver_command();
    long timeout_s = 7200;
    solve->add_option("--mutation", mutation)->capture_default_str();
    solve->add_option("--solver-cmd", solver_cmd,
                      "command template; {file} is the instance path")
        ->capture_default_str();
    solve->add_option("--timeout", timeout_s, "seconds")->capture_default_str();
    solve->add_option("--out", out_path, "write the result here");

    // forests
    auto *forests = app.add_subcommand("forests", "count forest shapes");
    std::size_t forest_n = 3;
    bool list = false;
    bool detached = false;
    forests->add_option("--n", forest_n, "non-genesis blocks")->required();
    forests->add_flag("--list", list, "print every parent vector");
    forests->add_flag("--detached", detached, "allow parentless blocks");

    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (const CLI::ParseError &e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kInputError;
    }

    try {
      if (*check) {
        const auto state = parse_scenario(read_file(scenario_path));
        const auto m = parse_mutation(check_mutation);
        const auto verdict = accountable_safety(state, rules_for(m));
        auto doc = verdict_to_json(state, verdict);
        doc["verdict"] = verdict.holds ? "holds" : "violated";
        doc["mutation"] = std::string(to_string(m));
        write_output(doc.dump(2) + "\n", out_path, out);
        return verdict.holds ? kOk : kViolated;
      }

      if (*search_cmd) {
        const auto bounds = search_bounds.bounds();
        SearchOptions opts;
        opts.jobs = jobs;
        opts.budget = budget;
        const auto report = search(bounds, parse_mutation(mutation), opts);
        write_output(report_to_json(report).dump(2) + "\n", out_path, out);
        return verdict_exit(report.verdict);
      }

      if (*example) {
        const auto bounds = example_bounds.bounds();
        const auto prop = parse_example_property(property);
        const auto m = parse_mutation(mutation);
        SearchOptions opts;
        opts.jobs = jobs;
        opts.budget = budget;
        const auto result = find_example(bounds, prop, m, opts);
        if (result.found()) {
          auto doc = verdict_to_json(*result.state,
                                     accountable_safety(*result.state,
                                                        rules_for(m)));
          doc["property"] = std::string(to_string(prop));
          doc["states_checked"] = result.states_checked;
          write_output(doc.dump(2) + "\n", out_path, out);
          return kOk;
        }
        err << fmt::format("no state with {} ({} states checked{})\n",
                           to_string(prop),
                           result.states_checked,
                           result.status == Verdict::Inconclusive
                               ? ", budget exhausted"
                               : "");
        return result.status == Verdict::Inconclusive ? kInconclusive
                                                      : kViolated;
      }

      if (*emit) {
        const auto inst = emit_smt(emit_bounds.bounds(),
                                   parse_smt_query(emit_smt_flags.query),
                                   parse_mutation(mutation),
                                   emit_smt_flags.options());
        write_output(inst.text, out_path, out);
        return kOk;
      }

      if (*solve) {
        const auto inst = emit_smt(solve_bounds.bounds(),
                                   parse_smt_query(solve_smt_flags.query),
                                   parse_mutation(mutation),
                                   solve_smt_flags.options());
        if (timeout_s <= 0) {
          throw InputError("--timeout must be positive");
        }
        const auto result =
            run_solver(inst, solver_cmd, std::chrono::seconds(timeout_s));
        Json doc;
        doc["status"] = std::string(to_string(result.status));
        doc["query"] = std::string(to_string(inst.query));
        doc["mutation"] = std::string(to_string(inst.mutation));
        doc["bounds"] = bounds_to_json(inst.bounds);
        doc["checkpoints"] = inst.options.n_checkpoints;
        doc["solver_output"] = result.output;
        write_output(doc.dump(2) + "\n", out_path, out);
        switch (result.status) {
          case SolverResult::Status::Unsat:
            return kOk;
          case SolverResult::Status::Sat:
            return kViolated;
          default:
            return kInconclusive;
        }
      }

      if (*forests) {
        const auto shapes = enumerate_forests(
            forest_n,
            detached ? ForestConvention::WithDetachedRoots
                     : ForestConvention::GenesisRooted);
        out << shapes.size() << "\n";
        if (list) {
          for (const auto &s : shapes) {
            std::string line;
            for (auto p : s.parents) {
              line += p == BlockForest::kNoParent ? " -" : fmt::format(" {}", p);
            }
            out << line.substr(line.empty() ? 0 : 1) << "\n";
          }
        }
        return kOk;
      }
    } catch (const InputError &e) {
      err << "error: " << e.what() << "\n";
      return kInputError;
    }
    return kInputError;
  }

}  // namespace ffgmc::cli
