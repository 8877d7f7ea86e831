#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mgrowth::metrics {

/**
 * One node of a block-structured model file.
 *
 * The on-disk format is a minimal .mdl-like text: `Name {` opens a section,
 * `}` closes it, and any other non-blank line inside a section is kept
 * verbatim as an attribute line. Several sections may share a physical line.
 */
struct Section {
    std::string name;
    std::vector<std::string> attributes;
    std::vector<Section> children;

    bool operator==(const Section&) const = default;
};

/// A parsed model file. Top level may hold more than one section.
struct ModelDocument {
    std::vector<Section> roots;

    bool operator==(const ModelDocument&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column)
        : std::runtime_error(message + " at line " + std::to_string(line) + ", column " +
                             std::to_string(column)),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Parses model text into a section tree. Throws ParseError with position info.
ModelDocument parse_model(std::string_view content);

/// Serializes a document back to model text (two-space indentation).
std::string to_text(const ModelDocument& doc);

/// Number of sections named "Block" at any nesting depth.
std::int64_t count_blocks(const ModelDocument& doc);

}  // namespace mgrowth::metrics
