#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "svi/experiments.hpp"
#include "svi/verify.hpp"

namespace svi {

/// Flat document of every constant for one (game, scheme).
nlohmann::ordered_json constants_document(const ProblemConstants& pc, const SamplingScheme& scheme,
                                          std::optional<double> epsilon = std::nullopt);

/// One "key: value" line per scalar entry; arrays are comma-joined.
std::string key_value_text(const nlohmann::ordered_json& flat);

nlohmann::ordered_json report_json(const CheckReport& report);
/// Indented PASS/FAIL tree with worst margins.
std::string report_text(const CheckReport& report);

}  // namespace svi
