#include "mgrowth/pipeline/toml_lite.hpp"

#include <cctype>
#include <regex>
#include <stdexcept>
#include <string>

namespace mgrowth::pipeline {

namespace {

[[noreturn]] void fail(int line_no, const std::string& message) {
    throw std::runtime_error("TOML line " + std::to_string(line_no) + ": " + message);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        else if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

bool is_bare_date(std::string_view tok) {
    static const std::regex date_re(R"(^\d{4}-\d{2}-\d{2}$)");
    return std::regex_match(std::string(tok), date_re);
}

nlohmann::json parse_scalar(std::string_view tok, int line_no) {
    tok = trim(tok);
    if (tok.empty()) fail(line_no, "missing value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"') fail(line_no, "unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
            if (tok[i] == '\\' && i + 2 < tok.size()) {
                ++i;
                switch (tok[i]) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: fail(line_no, "unsupported escape in string");
                }
            } else {
                out += tok[i];
            }
        }
        return out;
    }
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (is_bare_date(tok)) return std::string(tok);
    std::string s(tok);
    try {
        if (s.find_first_of(".eE") == std::string::npos) {
            std::size_t used = 0;
            long long v = std::stoll(s, &used);
            if (used == s.size()) return v;
        }
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
        // fall through to the error below
    }
    fail(line_no, "cannot parse value '" + s + "'");
}

nlohmann::json parse_value(std::string_view tok, int line_no) {
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '[') {
        if (tok.back() != ']') fail(line_no, "arrays must close on the same line");
        auto inner = trim(tok.substr(1, tok.size() - 2));
        nlohmann::json arr = nlohmann::json::array();
        if (inner.empty()) return arr;
        std::size_t start = 0;
        bool in_string = false;
        for (std::size_t i = 0; i <= inner.size(); ++i) {
            if (i < inner.size() && inner[i] == '"') in_string = !in_string;
            if (i == inner.size() || (inner[i] == ',' && !in_string)) {
                arr.push_back(parse_scalar(inner.substr(start, i - start), line_no));
                start = i + 1;
            }
        }
        return arr;
    }
    return parse_scalar(tok, line_no);
}

}  // namespace

nlohmann::json parse_toml(std::string_view text) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        line = trim(strip_comment(line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated table header");
            auto name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) fail(line_no, "empty table name");
            table = &root;
            std::size_t start = 0;
            while (start <= name.size()) {
                auto dot = name.find('.', start);
                auto part = trim(name.substr(start, dot == std::string_view::npos
                                                        ? name.size() - start
                                                        : dot - start));
                if (part.empty()) fail(line_no, "empty table name component");
                table = &(*table)[std::string(part)];
                if (dot == std::string_view::npos) break;
                start = dot + 1;
            }
            if (!table->is_object() && !table->is_null())
                fail(line_no, "table redefines a value");
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        auto key = trim(line.substr(0, eq));
        if (key.empty()) fail(line_no, "empty key");
        if (key.find('.') != std::string_view::npos) fail(line_no, "dotted keys are not supported");
        if (key.front() == '"') key = key.substr(1, key.size() - 2);
        (*table)[std::string(key)] = parse_value(line.substr(eq + 1), line_no);
    }
    return root;
}

}  // namespace mgrowth::pipeline
