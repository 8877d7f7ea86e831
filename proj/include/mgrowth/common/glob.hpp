#pragma once

#include <string_view>
#include <vector>

namespace mgrowth {

/**
 * Shell-style glob match against a '/'-separated relative path.
 *
 * `*` and `?` do not cross path separators; `**` matches any number of
 * path components (including none). No character classes.
 */
bool glob_match(std::string_view pattern, std::string_view path);

/// True if any pattern matches.
bool glob_match_any(const std::vector<std::string>& patterns, std::string_view path);

}  // namespace mgrowth
