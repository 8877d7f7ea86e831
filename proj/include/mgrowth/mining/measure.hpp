#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mgrowth/mining/repo.hpp"

namespace mgrowth::mining {

/// One measured revision of one model.
struct RevisionRecord {
    std::string model_id;
    std::string commit_id;
    std::int64_t timestamp = 0;
    std::int64_t loc = 0;
    std::int64_t block_count = 0;  // -1 when the block parser failed
    bool block_parse_failed = false;

    bool operator==(const RevisionRecord&) const = default;
};

/**
 * Applies both size metrics to every revision, order preserved. A block
 * parser failure records the -1 sentinel and flags the record instead of
 * aborting; the line count is still computed.
 */
std::vector<RevisionRecord> measure_revisions(const std::string& model_id,
                                              const std::vector<Revision>& revisions);

/// `model_id,commit_id,timestamp,loc,block_count` with a header row.
void write_revisions_csv(std::ostream& out, const std::vector<RevisionRecord>& records);
std::vector<RevisionRecord> read_revisions_csv(std::istream& in);

}  // namespace mgrowth::mining
