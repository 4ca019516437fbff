/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include "ffgmc/enumerator.hpp"

namespace ffgmc {

  enum class SmtQuery { NoAccountableSafety, FinalizedNonGenesis };

  std::string_view to_string(SmtQuery q);
  SmtQuery parse_smt_query(std::string_view text);

  struct SmtOptions {
    /// Checkpoint atoms, the genesis checkpoint included.
    std::size_t n_checkpoints = 5;
    /// Keep block slots within max_slot and checkpoint slots within
    /// max_chkp_slot (and follow slot_mode); otherwise slots are free.
    bool bound_slots = true;
    /// Also cap the number of cast votes by bounds.max_votes.
    bool cap_votes = false;
  };

  struct SmtInstance {
    std::string text;
    Bounds bounds;
    SmtQuery query = SmtQuery::NoAccountableSafety;
    Mutation mutation = Mutation::None;
    SmtOptions options;
  };

  inline constexpr std::size_t kMaxSmtHashes = 12;
  inline constexpr std::size_t kMaxSmtCheckpoints = 12;
  inline constexpr std::size_t kMaxSmtNodes = 16;

  /// Hashes = n_blocks + 1 (genesis is Hash1), nodes = n_validators.
  /// Throws InputError when the datatypes would be empty or too large.
  SmtInstance emit_smt(const Bounds &bounds,
                       SmtQuery query,
                       Mutation mutation = Mutation::None,
                       const SmtOptions &options = {});

  struct SolverResult {
    enum class Status { Sat, Unsat, Unknown, SolverAbsent };

    Status status = Status::Unknown;
    std::string output;  // raw stdout; the model for Sat when requested
  };

  std::string_view to_string(SolverResult::Status s);

  /// Writes the instance to a temporary file and runs `command` through
  /// /bin/sh with `{file}` replaced by its path (appended when the
  /// placeholder is missing). The first sat/unsat/unknown token on stdout
  /// decides; a shell exit status of 127 means the solver is absent.
  SolverResult run_solver(const SmtInstance &instance,
                          const std::string &command,
                          std::chrono::seconds timeout);

}  // namespace ffgmc
