#pragma once

#include <functional>
#include <string>

#include "json.hpp"

namespace rgqa {

// Calls fn(line_number, parsed) for every non-blank line of a
// line-delimited JSON file. Parse failures report the 1-based line number.
void for_each_jsonl(const std::string& path,
                    const std::function<void(std::size_t, const nlohmann::json&)>& fn);

// Requires `key` to be present in `obj`; error message names the source line.
const nlohmann::json& require_field(const nlohmann::json& obj,
                                    const std::string& key,
                                    const std::string& where);

}  // namespace rgqa
