#pragma once

#include <string>

#include "dcx/corpus.hpp"

#include "json.hpp"

namespace dcx::detail {

/// Builds one Dialog from a parsed JSON record (the corpus line schema) and
/// segments its turns. `where` prefixes error messages ("line 12", "body");
/// field paths like utterances[3].text are appended after it. Shared by the
/// corpus reader and the scoring endpoint so both surfaces validate and score
/// identically.
Dialog dialog_from_json(const nlohmann::json& rec, RoleMode mode,
                        ParseWarnings& warnings, const std::string& where);

}  // namespace dcx::detail
