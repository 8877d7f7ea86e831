#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgrowth/common/dates.hpp"

namespace mgrowth::mining {

/// Where to mine and which files count as models.
struct RepoSource {
    std::string root_path;
    std::vector<std::string> include_patterns;
    std::optional<Date> since;
    std::optional<Date> until;
};

/// One revision of one model file, content included.
struct Revision {
    std::string commit_id;
    std::int64_t timestamp = 0;  // UTC seconds
    std::string content;
};

/// model id (repo-relative path) to its chronological revisions.
using RevisionHistory = std::map<std::string, std::vector<Revision>>;

/**
 * Walks the history at root_path and returns, per matched model file, the
 * revisions in which that file changed, oldest first. Two backends:
 *
 *  - snapshot directory: `<root>/manifest.tsv` with lines
 *    `rev_index<TAB>commit_id<TAB>unix_timestamp` plus one subdirectory per
 *    rev_index holding the full tree at that revision. A file revision is
 *    recorded whenever the content differs from the previous snapshot.
 *  - git: `<root>/.git` present; first-parent linear history via the git
 *    command-line tool, renames treated as delete plus create.
 *
 * A file deleted mid-history simply stops producing revisions. Throws when
 * the root is neither of the two, or unreadable.
 */
RevisionHistory list_model_revisions(const RepoSource& src);

}  // namespace mgrowth::mining
