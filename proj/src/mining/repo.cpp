#include "mgrowth/mining/repo.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mgrowth/common/glob.hpp"

namespace fs = std::filesystem;

namespace mgrowth::mining {

namespace {

void validate(const RepoSource& src) {
    if (src.include_patterns.empty())
        throw std::invalid_argument("repo source needs at least one include pattern");
    if (src.since && src.until && *src.since > *src.until)
        throw std::invalid_argument("repo source has since > until");
}

bool within_window(const RepoSource& src, std::int64_t timestamp) {
    Date day = Date::from_timestamp(timestamp);
    if (src.since && day < *src.since) return false;
    if (src.until && day > *src.until) return false;
    return true;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    out += "'";
    return out;
}

std::string run_command(const std::string& command, int& exit_code) {
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("failed to start command: " + command);
    std::string output;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
    exit_code = pclose(pipe);
    return output;
}

// -------- snapshot directory backend --------

struct SnapshotEntry {
    long rev_index = 0;
    std::string commit_id;
    std::int64_t timestamp = 0;
};

std::vector<SnapshotEntry> read_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot read manifest: " + manifest_path.string());
    std::vector<SnapshotEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        SnapshotEntry e;
        std::string rev, ts;
        if (!std::getline(fields, rev, '\t') || !std::getline(fields, e.commit_id, '\t') ||
            !std::getline(fields, ts, '\t'))
            throw std::runtime_error("malformed manifest line: " + line);
        e.rev_index = std::stol(rev);
        e.timestamp = std::stoll(ts);
        entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(),
              [](const SnapshotEntry& a, const SnapshotEntry& b) {
                  return a.rev_index < b.rev_index;
              });
    return entries;
}

RevisionHistory mine_snapshots(const RepoSource& src, const fs::path& root) {
    auto entries = read_manifest(root / "manifest.tsv");
    RevisionHistory history;
    std::map<std::string, std::string> last_content;

    for (const auto& entry : entries) {
        fs::path rev_dir = root / std::to_string(entry.rev_index);
        if (!fs::is_directory(rev_dir))
            throw std::runtime_error("manifest names missing snapshot directory: " +
                                     rev_dir.string());
        // Sorted walk keeps the output independent of directory order.
        std::vector<std::string> files;
        for (const auto& item : fs::recursive_directory_iterator(rev_dir)) {
            if (!item.is_regular_file()) continue;
            files.push_back(fs::relative(item.path(), rev_dir).generic_string());
        }
        std::sort(files.begin(), files.end());

        for (const auto& rel : files) {
            if (!glob_match_any(src.include_patterns, rel)) continue;
            std::string content = read_file(rev_dir / rel);
            auto it = last_content.find(rel);
            bool changed = it == last_content.end() || it->second != content;
            last_content[rel] = content;
            if (!changed) continue;
            if (!within_window(src, entry.timestamp)) continue;
            history[rel].push_back({entry.commit_id, entry.timestamp, std::move(content)});
        }
    }
    return history;
}

// -------- git backend --------

struct GitCommit {
    std::string id;
    std::int64_t timestamp = 0;
    std::vector<std::pair<char, std::string>> changes;  // status letter, path
};

std::vector<GitCommit> git_log(const std::string& root) {
    int code = 0;
    // A repository without any commit yet has an empty history.
    run_command("git -C " + shell_quote(root) + " rev-parse HEAD > /dev/null 2>&1", code);
    if (code != 0) return {};

    std::string cmd = "git -C " + shell_quote(root) +
                      " -c core.quotepath=false"
                      " log --first-parent --reverse --no-renames --name-status"
                      " --format=%x01%H%x09%ct 2>/dev/null";
    std::string out = run_command(cmd, code);
    if (code != 0) throw std::runtime_error("git log failed for repository: " + root);

    std::vector<GitCommit> commits;
    std::istringstream lines(out);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        if (line[0] == '\x01') {
            auto tab = line.find('\t');
            GitCommit c;
            c.id = line.substr(1, tab - 1);
            c.timestamp = std::stoll(line.substr(tab + 1));
            commits.push_back(std::move(c));
            continue;
        }
        if (commits.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue;
        commits.back().changes.emplace_back(line[0], line.substr(tab + 1));
    }
    return commits;
}

std::string git_show(const std::string& root, const std::string& commit, const std::string& path) {
    int code = 0;
    std::string cmd = "git -C " + shell_quote(root) + " show " +
                      shell_quote(commit + ":" + path) + " 2>/dev/null";
    std::string out = run_command(cmd, code);
    if (code != 0)
        throw std::runtime_error("git show failed for " + commit + ":" + path);
    return out;
}

RevisionHistory mine_git(const RepoSource& src, const fs::path& root) {
    RevisionHistory history;
    for (const auto& commit : git_log(root.string())) {
        for (const auto& [status, path] : commit.changes) {
            if (status == 'D') continue;  // deletion ends the series
            if (!glob_match_any(src.include_patterns, path)) continue;
            if (!within_window(src, commit.timestamp)) continue;
            history[path].push_back(
                {commit.id, commit.timestamp, git_show(root.string(), commit.id, path)});
        }
    }
    return history;
}

}  // namespace

RevisionHistory list_model_revisions(const RepoSource& src) {
    validate(src);
    fs::path root(src.root_path);
    if (!fs::is_directory(root))
        throw std::runtime_error("repository root is not a readable directory: " + src.root_path);
    if (fs::exists(root / "manifest.tsv")) return mine_snapshots(src, root);
    if (fs::exists(root / ".git")) return mine_git(src, root);
    throw std::runtime_error("repository root is neither a snapshot export nor a git repository: " +
                             src.root_path);
}

}  // namespace mgrowth::mining
