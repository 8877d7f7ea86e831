#include "mgrowth/mining/measure.hpp"

#include <ostream>
#include <stdexcept>

#include "mgrowth/common/csv.hpp"
#include "mgrowth/metrics/loc.hpp"
#include "mgrowth/metrics/model_doc.hpp"

namespace mgrowth::mining {

std::vector<RevisionRecord> measure_revisions(const std::string& model_id,
                                              const std::vector<Revision>& revisions) {
    std::vector<RevisionRecord> records;
    records.reserve(revisions.size());
    for (const auto& rev : revisions) {
        RevisionRecord rec;
        rec.model_id = model_id;
        rec.commit_id = rev.commit_id;
        rec.timestamp = rev.timestamp;
        rec.loc = metrics::count_loc(rev.content);
        try {
            rec.block_count = metrics::count_blocks(metrics::parse_model(rev.content));
        } catch (const metrics::ParseError&) {
            rec.block_count = -1;
            rec.block_parse_failed = true;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_revisions_csv(std::ostream& out, const std::vector<RevisionRecord>& records) {
    out << "model_id,commit_id,timestamp,loc,block_count\n";
    for (const auto& r : records)
        csv::write_row(out, {r.model_id, r.commit_id, std::to_string(r.timestamp),
                             std::to_string(r.loc), std::to_string(r.block_count)});
}

std::vector<RevisionRecord> read_revisions_csv(std::istream& in) {
    auto rows = csv::read_all(in);
    if (rows.empty()) throw std::runtime_error("revisions CSV is empty");
    std::vector<RevisionRecord> records;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != 5)
            throw std::runtime_error("revisions CSV row must have five fields");
        RevisionRecord rec;
        rec.model_id = row[0];
        rec.commit_id = row[1];
        rec.timestamp = std::stoll(row[2]);
        rec.loc = std::stoll(row[3]);
        rec.block_count = std::stoll(row[4]);
        rec.block_parse_failed = rec.block_count < 0;
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace mgrowth::mining
