#pragma once

#include <filesystem>

#include "dcx/complexity.hpp"
#include "dcx/corpus.hpp"
#include "dcx/lexicon.hpp"

#include "json.hpp"

namespace dcx {

/// One domain's scoring assets as written by `dcx lexicon` and loaded by the
/// scoring service: the lexicon plus the role regime, the historical turn
/// maximum captured at build time, and the complexity configuration.
struct DomainProfile {
  Lexicon lexicon;
  RoleMode role_mode = RoleMode::two_role;
  int max_turns = 1;
  ComplexityConfig config;
};

/// Serialized form: {"domain", "delta", "stop_words", "common_words",
/// "domain_terms"} plus optional "role_mode", "max_turns" and "config" keys.
/// Documents carrying only the five lexicon keys load with defaults.
nlohmann::json profile_to_json(const DomainProfile& profile);
DomainProfile profile_from_json(const nlohmann::json& j);

DomainProfile load_domain_profile(const std::filesystem::path& path);
void save_domain_profile(const DomainProfile& profile,
                         const std::filesystem::path& path);

}  // namespace dcx
