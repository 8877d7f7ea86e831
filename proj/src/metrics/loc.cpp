#include "mgrowth/metrics/loc.hpp"

namespace mgrowth::metrics {

std::int64_t count_loc(std::string_view content) {
    if (content.empty()) return 0;
    std::int64_t lines = 0;
    for (char c : content)
        if (c == '\n') ++lines;
    if (content.back() != '\n') ++lines;
    return lines;
}

}  // namespace mgrowth::metrics
