#include "dcx/profile.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

#include "dcx/errors.hpp"

namespace dcx {

using nlohmann::json;

namespace {

json sorted_array(const WordSet& words) {
  std::vector<std::string> sorted(words.begin(), words.end());
  std::sort(sorted.begin(), sorted.end());
  return json(sorted);
}

WordSet set_from_json(const json& j, const char* key) {
  if (!j.is_array()) {
    throw DataError(std::string("lexicon field \"") + key +
                    "\" must be an array of strings");
  }
  WordSet words;
  for (const json& item : j) {
    if (!item.is_string()) {
      throw DataError(std::string("lexicon field \"") + key +
                      "\" must contain only strings");
    }
    words.insert(normalize_token(item.get<std::string>()));
  }
  return words;
}

}  // namespace

json profile_to_json(const DomainProfile& profile) {
  json j;
  j["domain"] = profile.lexicon.domain;
  j["delta"] = profile.lexicon.delta;
  j["stop_words"] = sorted_array(profile.lexicon.stop_words);
  j["common_words"] = sorted_array(profile.lexicon.common_words);
  j["domain_terms"] = sorted_array(profile.lexicon.domain_terms);
  j["role_mode"] = std::string(to_string(profile.role_mode));
  j["max_turns"] = profile.max_turns;

  json config;
  config["w1"] = profile.config.w1;
  config["w2"] = profile.config.w2;
  config["noise_score"] = profile.config.noise_score;
  config["empty_utterance_score"] = profile.config.empty_utterance_score;
  config["da_default_weight"] = profile.config.da_default_weight;
  config["da_weights"] = json(profile.config.da_weights);
  j["config"] = std::move(config);
  return j;
}

DomainProfile profile_from_json(const json& j) {
  if (!j.is_object()) throw DataError("lexicon document must be a JSON object");

  DomainProfile profile;
  try {
    profile.lexicon.domain = j.at("domain").get<std::string>();
    profile.lexicon.delta = j.at("delta").get<double>();
    profile.lexicon.stop_words = set_from_json(j.at("stop_words"), "stop_words");
    profile.lexicon.common_words =
        set_from_json(j.at("common_words"), "common_words");
    profile.lexicon.domain_terms =
        set_from_json(j.at("domain_terms"), "domain_terms");
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed lexicon document: ") + e.what());
  }
  if (!(profile.lexicon.delta > 0.0) || profile.lexicon.delta > 100.0) {
    throw DataError("lexicon delta must lie in (0, 100]");
  }

  if (auto it = j.find("role_mode"); it != j.end()) {
    const auto mode = role_mode_from_string(it->get<std::string>());
    if (!mode) {
      throw DataError("lexicon role_mode must be two_role or single_role");
    }
    profile.role_mode = *mode;
  }
  if (auto it = j.find("max_turns"); it != j.end()) {
    profile.max_turns = it->get<int>();
    if (profile.max_turns < 1) {
      throw DataError("lexicon max_turns must be at least 1");
    }
  }
  if (auto it = j.find("config"); it != j.end()) {
    const json& c = *it;
    try {
      profile.config.w1 = c.value("w1", profile.config.w1);
      profile.config.w2 = c.value("w2", profile.config.w2);
      profile.config.noise_score =
          c.value("noise_score", profile.config.noise_score);
      profile.config.empty_utterance_score =
          c.value("empty_utterance_score", profile.config.empty_utterance_score);
      profile.config.da_default_weight =
          c.value("da_default_weight", profile.config.da_default_weight);
      if (auto w = c.find("da_weights"); w != c.end()) {
        profile.config.da_weights =
            w->get<std::map<std::string, double>>();
      }
    } catch (const json::exception& e) {
      throw DataError(std::string("malformed lexicon config: ") + e.what());
    }
    try {
      profile.config.validate();
    } catch (const UsageError& e) {
      throw DataError(std::string("invalid lexicon config: ") + e.what());
    }
  }
  return profile;
}

DomainProfile load_domain_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open lexicon file: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("malformed lexicon file " + path.string() + ": " +
                    e.what());
  }
  return profile_from_json(j);
}

void save_domain_profile(const DomainProfile& profile,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw UsageError("cannot write lexicon file: " + path.string());
  }
  out << profile_to_json(profile).dump(2) << '\n';
}

}  // namespace dcx
