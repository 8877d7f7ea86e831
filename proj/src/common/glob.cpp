#include "mgrowth/common/glob.hpp"

#include <string>

namespace mgrowth {

namespace {

bool match_here(std::string_view pat, std::string_view path) {
    while (true) {
        if (pat.empty()) return path.empty();
        if (pat.size() >= 2 && pat[0] == '*' && pat[1] == '*') {
            // "**" plus an optional following '/' may swallow any prefix.
            std::string_view rest = pat.substr(2);
            if (!rest.empty() && rest[0] == '/') {
                std::string_view with_sep = rest.substr(1);
                for (std::size_t i = 0; i <= path.size(); ++i) {
                    if (match_here(with_sep, path.substr(i))) return true;
                    if (match_here(rest, path.substr(i))) return true;
                }
                return false;
            }
            for (std::size_t i = 0; i <= path.size(); ++i)
                if (match_here(rest, path.substr(i))) return true;
            return false;
        }
        if (pat[0] == '*') {
            std::string_view rest = pat.substr(1);
            for (std::size_t i = 0; i <= path.size(); ++i) {
                if (match_here(rest, path.substr(i))) return true;
                if (i < path.size() && path[i] == '/') break;
            }
            return false;
        }
        if (path.empty()) return false;
        if (pat[0] == '?') {
            if (path[0] == '/') return false;
        } else if (pat[0] != path[0]) {
            return false;
        }
        pat.remove_prefix(1);
        path.remove_prefix(1);
    }
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
    return match_here(pattern, path);
}

bool glob_match_any(const std::vector<std::string>& patterns, std::string_view path) {
    for (const auto& p : patterns)
        if (glob_match(p, path)) return true;
    return false;
}

}  // namespace mgrowth
