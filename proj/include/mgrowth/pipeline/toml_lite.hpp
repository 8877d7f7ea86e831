#pragma once

#include <string_view>

#include "json.hpp"

namespace mgrowth::pipeline {

/**
 * Parses the TOML subset the pipeline config uses into a JSON tree:
 * `[table]` and `[dotted.table]` headers, `key = value` pairs with string,
 * integer, float, boolean and single-line array values, and `#` comments.
 * Bare YYYY-MM-DD tokens become strings. Anything fancier (multi-line
 * strings, inline tables, dotted keys) is rejected with a line number.
 */
nlohmann::json parse_toml(std::string_view text);

}  // namespace mgrowth::pipeline
