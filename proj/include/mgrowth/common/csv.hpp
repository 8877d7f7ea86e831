#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mgrowth::csv {

/// Quotes a field per RFC 4180 when it contains a comma, quote, or newline.
std::string escape(const std::string& field);

/// Deterministic shortest round-trip formatting for doubles.
std::string format_double(double v);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/**
 * Reads an entire RFC-4180 stream, header included. Quoted fields may
 * contain commas, escaped quotes ("") and newlines. CRLF is accepted.
 */
std::vector<std::vector<std::string>> read_all(std::istream& in);

std::vector<std::vector<std::string>> read_file(const std::string& path);

}  // namespace mgrowth::csv
