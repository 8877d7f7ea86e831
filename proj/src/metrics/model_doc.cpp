#include "mgrowth/metrics/model_doc.hpp"

#include <cctype>

namespace mgrowth::metrics {

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    ModelDocument parse() {
        ModelDocument doc;
        std::vector<Section*> stack;
        while (true) {
            skip_whitespace();
            if (at_end()) break;
            char c = text_[pos_];
            if (c == '}') {
                if (stack.empty()) fail("unbalanced '}'");
                stack.pop_back();
                advance();
                continue;
            }
            if (c == '{') fail("expected section name before '{'");
            std::size_t name_end = try_section_open();
            if (name_end != npos) {
                Section section;
                section.name = std::string(text_.substr(pos_, name_end - pos_));
                Section* inserted;
                if (stack.empty()) {
                    doc.roots.push_back(std::move(section));
                    inserted = &doc.roots.back();
                } else {
                    stack.back()->children.push_back(std::move(section));
                    inserted = &stack.back()->children.back();
                }
                stack.push_back(inserted);
                advance_past_open_brace(name_end);
                continue;
            }
            // Anything else is an attribute line.
            if (stack.empty()) fail("attribute outside of any section");
            stack.back()->attributes.push_back(take_rest_of_line());
        }
        if (!stack.empty())
            fail("unclosed section '" + stack.back()->name + "' at end of input");
        return doc;
    }

private:
    static constexpr std::size_t npos = std::string_view::npos;

    bool at_end() const { return pos_ >= text_.size(); }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_whitespace() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    }

    // Returns one past the section name if the text at pos_ reads
    // `ident [spaces] {` on a single line, npos otherwise.
    std::size_t try_section_open() const {
        if (!ident_start(text_[pos_])) return npos;
        std::size_t i = pos_ + 1;
        while (i < text_.size() && ident_char(text_[i])) ++i;
        std::size_t name_end = i;
        while (i < text_.size() && (text_[i] == ' ' || text_[i] == '\t')) ++i;
        if (i < text_.size() && text_[i] == '{') return name_end;
        return npos;
    }

    void advance_past_open_brace(std::size_t name_end) {
        while (pos_ < name_end) advance();
        while (text_[pos_] != '{') advance();
        advance();
    }

    std::string take_rest_of_line() {
        std::size_t start = pos_;
        while (!at_end() && text_[pos_] != '\n') advance();
        std::string_view raw = text_.substr(start, pos_ - start);
        while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' || raw.back() == '\r'))
            raw.remove_suffix(1);
        return std::string(raw);
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_, col_);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

void print_section(const Section& s, int depth, std::string& out) {
    std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    out += indent;
    out += s.name;
    out += " {\n";
    for (const auto& attr : s.attributes) {
        out += indent;
        out += "  ";
        out += attr;
        out += '\n';
    }
    for (const auto& child : s.children) print_section(child, depth + 1, out);
    out += indent;
    out += "}\n";
}

std::int64_t count_in(const Section& s) {
    std::int64_t n = s.name == "Block" ? 1 : 0;
    for (const auto& child : s.children) n += count_in(child);
    return n;
}

}  // namespace

ModelDocument parse_model(std::string_view content) {
    return Scanner(content).parse();
}

std::string to_text(const ModelDocument& doc) {
    std::string out;
    for (const auto& root : doc.roots) print_section(root, 0, out);
    return out;
}

std::int64_t count_blocks(const ModelDocument& doc) {
    std::int64_t n = 0;
    for (const auto& root : doc.roots) n += count_in(root);
    return n;
}

}  // namespace mgrowth::metrics
