/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "ffgmc/enumerator.hpp"
#include "ffgmc/slashing.hpp"

namespace ffgmc {

  using Json = nlohmann::ordered_json;

  /// Scenario document: n_validators, slot_rule, blocks (genesis implicit)
  /// and votes. Checkpoint p values are not stored; they follow from the
  /// block slots.
  Json scenario_to_json(const ProtocolState &state);

  /// Throws InputError naming the offending field, e.g. "votes[2].source".
  ProtocolState scenario_from_json(const Json &doc);

  /// Parses text; syntax errors are reported with line and column.
  ProtocolState parse_scenario(std::string_view text);

  std::string emit_scenario(const ProtocolState &state);

  /// Scenario plus the derived sets: justified, finalized, slashable,
  /// evidence, and the verdict fields.
  Json verdict_to_json(const ProtocolState &state,
                       const SafetyVerdict &verdict);

  Json bounds_to_json(const Bounds &bounds);

  Json report_to_json(const SearchReport &report);

}  // namespace ffgmc
