#include "dcx/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "dcx/detail/dialog_json.hpp"
#include "dcx/errors.hpp"
#include "dcx/lexicon.hpp"

#include "json.hpp"

namespace dcx {

using nlohmann::json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::customer: return "customer";
    case Role::agent: return "agent";
    case Role::portal_user: return "portal_user";
  }
  return "customer";
}

std::string_view to_string(RoleMode mode) {
  return mode == RoleMode::two_role ? "two_role" : "single_role";
}

std::optional<Role> role_from_string(std::string_view s) {
  if (s == "customer") return Role::customer;
  if (s == "agent") return Role::agent;
  if (s == "portal_user") return Role::portal_user;
  return std::nullopt;
}

std::optional<RoleMode> role_mode_from_string(std::string_view s) {
  if (s == "two_role") return RoleMode::two_role;
  if (s == "single_role") return RoleMode::single_role;
  return std::nullopt;
}

std::size_t Dialog::utterance_count() const {
  std::size_t n = 0;
  for (const Turn& t : turns) n += t.size();
  return n;
}

int Corpus::max_turns() const {
  if (dialogs.empty()) throw EmptyCorpusError("max_turns: empty corpus");
  int best = 0;
  for (const Dialog& d : dialogs) best = std::max(best, d.turn_count());
  return best;
}

namespace detail {

Dialog dialog_from_json(const json& rec, RoleMode mode,
                        ParseWarnings& warnings, const std::string& where) {
  auto field_string = [&](const json& obj, const char* key,
                          const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      throw DataError(where + ": missing field \"" + path + "\"");
    }
    if (!it->is_string()) {
      throw DataError(where + ": field \"" + path + "\" must be a string");
    }
    return it->get<std::string>();
  };

  if (!rec.is_object()) {
    throw DataError(where + ": record must be a JSON object");
  }

  Dialog d;
  d.id = field_string(rec, "id", "id");
  d.domain = field_string(rec, "domain", "domain");

  auto utts_it = rec.find("utterances");
  if (utts_it == rec.end()) {
    throw DataError(where + ": missing field \"utterances\"");
  }
  const json& utts = *utts_it;
  if (!utts.is_array()) {
    throw DataError(where + ": field \"utterances\" must be an array");
  }

  std::vector<Utterance> sequence;
  sequence.reserve(utts.size());
  for (std::size_t i = 0; i < utts.size(); ++i) {
    const json& ju = utts[i];
    const std::string path = "utterances[" + std::to_string(i) + "]";
    if (!ju.is_object()) {
      throw DataError(where + ": field \"" + path + "\" must be an object");
    }
    Utterance u;
    u.speaker_id = field_string(ju, "speaker", path + ".speaker");
    const std::string role_str = field_string(ju, "role", path + ".role");
    const auto role = role_from_string(role_str);
    if (!role) {
      throw DataError(where + ": field \"" + path + ".role\": unknown role \"" +
                      role_str + "\"");
    }
    u.role = *role;
    u.text = field_string(ju, "text", path + ".text");
    if (auto it = ju.find("dialog_act"); it != ju.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw DataError(where + ": field \"" + path +
                        ".dialog_act\" must be a string");
      }
      u.dialog_act = it->get<std::string>();
    }
    u.index = static_cast<int>(i);
    if (u.text.empty()) {
      ++warnings.empty_utterances;
    }
    sequence.push_back(std::move(u));
  }

  d.turns = segment_turns(std::move(sequence), mode);
  return d;
}

}  // namespace detail

namespace {

Dialog parse_dialog_record(const std::string& line, std::size_t line_no,
                           RoleMode mode, ParseWarnings& warnings) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError("line " + std::to_string(line_no) + ": malformed JSON: " +
                    e.what());
  }
  return detail::dialog_from_json(rec, mode, warnings,
                                  "line " + std::to_string(line_no));
}

}  // namespace

ParseResult parse_corpus(std::istream& in, const ParseOptions& opts) {
  ParseResult result;
  result.corpus.role_mode = opts.role_mode;

  std::string line;
  std::size_t line_no = 0;
  bool domain_set = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    Dialog d;
    try {
      d = parse_dialog_record(line, line_no, opts.role_mode, result.warnings);
      if (domain_set && d.domain != result.corpus.domain) {
        throw DataError("line " + std::to_string(line_no) + ": domain \"" +
                        d.domain + "\" does not match corpus domain \"" +
                        result.corpus.domain + "\"");
      }
    } catch (const DataError& e) {
      if (opts.fail_fast) throw;
      ++result.warnings.malformed_lines;
      result.warnings.messages.push_back(e.what());
      continue;
    }

    if (d.turns.empty()) {
      ++result.warnings.empty_dialogs;
      result.warnings.messages.push_back("line " + std::to_string(line_no) +
                                         ": dialog \"" + d.id +
                                         "\" has no utterances, dropped");
      continue;
    }

    if (!domain_set) {
      result.corpus.domain = d.domain;
      domain_set = true;
    }
    result.corpus.dialogs.push_back(std::move(d));
  }

  if (result.corpus.dialogs.empty()) {
    throw EmptyCorpusError("corpus has no dialogs");
  }
  return result;
}

ParseResult parse_corpus_file(const std::filesystem::path& path,
                              const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open corpus file: " + path.string());
  }
  return parse_corpus(in, opts);
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Dialog& d : corpus.dialogs) {
    json rec;
    rec["id"] = d.id;
    rec["domain"] = d.domain;
    json utts = json::array();
    for (const Turn& t : d.turns) {
      for (const Utterance& u : t.utterances) {
        json ju;
        ju["speaker"] = u.speaker_id;
        ju["role"] = std::string(to_string(u.role));
        ju["text"] = u.text;
        if (u.dialog_act) ju["dialog_act"] = *u.dialog_act;
        utts.push_back(std::move(ju));
      }
    }
    rec["utterances"] = std::move(utts);
    out << rec.dump() << '\n';
  }
}

std::vector<Turn> segment_turns(std::vector<Utterance> utterances,
                                RoleMode mode) {
  std::vector<Turn> turns;
  if (utterances.empty()) return turns;

  if (mode == RoleMode::single_role) {
    turns.reserve(utterances.size());
    for (Utterance& u : utterances) {
      turns.push_back(Turn{{std::move(u)}});
    }
    return turns;
  }

  Turn current;
  bool seen[2] = {false, false};
  auto side = [](Role r) { return r == Role::agent ? 1 : 0; };

  for (Utterance& u : utterances) {
    if (seen[0] && seen[1]) {
      turns.push_back(std::move(current));
      current = Turn{};
      seen[0] = seen[1] = false;
    }
    seen[side(u.role)] = true;
    current.utterances.push_back(std::move(u));
  }
  if (!current.utterances.empty()) turns.push_back(std::move(current));
  return turns;
}

CorpusStats descriptive_stats(const Corpus& corpus) {
  if (corpus.dialogs.empty()) {
    throw EmptyCorpusError("descriptive_stats: empty corpus");
  }

  CorpusStats stats;
  stats.n_dialogs = corpus.dialogs.size();

  std::size_t total_turns = 0;
  std::size_t total_utterances = 0;
  std::size_t total_words = 0;
  for (const Dialog& d : corpus.dialogs) {
    total_turns += d.turns.size();
    for (const Turn& t : d.turns) {
      total_utterances += t.size();
      for (const Utterance& u : t.utterances) {
        total_words += token_count(u.text);
      }
    }
  }

  stats.mean_turns_per_dialog =
      static_cast<double>(total_turns) / static_cast<double>(stats.n_dialogs);
  stats.mean_utterances_per_turn =
      static_cast<double>(total_utterances) / static_cast<double>(total_turns);
  stats.mean_words_per_utterance =
      total_utterances == 0
          ? 0.0
          : static_cast<double>(total_words) /
                static_cast<double>(total_utterances);
  return stats;
}

}  // namespace dcx
