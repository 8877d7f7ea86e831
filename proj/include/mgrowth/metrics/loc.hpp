#pragma once

#include <cstdint>
#include <string_view>

namespace mgrowth::metrics {

/**
 * Physical line count of a text blob.
 *
 * Lines are delimited by '\n'; a "\r\n" pair counts as one delimiter and a
 * trailing line without a terminator still counts. Blank lines count; the
 * model files carry no comments, so nothing is stripped. Empty input is 0.
 */
std::int64_t count_loc(std::string_view content);

}  // namespace mgrowth::metrics
