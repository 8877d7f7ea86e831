#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mgrowth/mining/measure.hpp"
#include "mgrowth/mining/repo.hpp"

using namespace mgrowth;
using namespace mgrowth::mining;
namespace fs = std::filesystem;

namespace {

// Builds snapshot-export repositories under a unique temp root.
class SnapshotBuilder {
public:
    SnapshotBuilder() {
        root_ = fs::temp_directory_path() /
                ("mgrowth_test_" + std::to_string(counter_++) + "_" +
                 std::to_string(::getpid()));
        fs::create_directories(root_);
    }
    ~SnapshotBuilder() { fs::remove_all(root_); }

    void add_revision(long rev, const std::string& commit, std::int64_t timestamp,
                      const std::vector<std::pair<std::string, std::string>>& files) {
        fs::path dir = root_ / std::to_string(rev);
        fs::create_directories(dir);
        for (const auto& [rel, content] : files) {
            fs::create_directories((dir / rel).parent_path());
            std::ofstream out(dir / rel, std::ios::binary);
            out << content;
        }
        std::ofstream manifest(root_ / "manifest.tsv", std::ios::app);
        manifest << rev << '\t' << commit << '\t' << timestamp << '\n';
    }

    std::string path() const { return root_.string(); }

private:
    static inline int counter_ = 0;
    fs::path root_;
};

}  // namespace

TEST_CASE("snapshot mining keeps only revisions that changed each file") {
    SnapshotBuilder repo;
    repo.add_revision(0, "c1", 1000, {{"a.mdl", "A1"}, {"b.mdl", "B1"}});
    repo.add_revision(1, "c2", 2000, {{"a.mdl", "A1"}, {"b.mdl", "B2"}});  // only B changes
    repo.add_revision(2, "c3", 3000, {{"a.mdl", "A2"}, {"b.mdl", "B2"}});  // only A changes

    RepoSource src{repo.path(), {"*.mdl"}, {}, {}};
    auto history = list_model_revisions(src);
    REQUIRE(history.size() == 2);
    REQUIRE(history.at("a.mdl").size() == 2);
    CHECK(history.at("a.mdl")[0].commit_id == "c1");
    CHECK(history.at("a.mdl")[1].commit_id == "c3");
    CHECK(history.at("a.mdl")[1].content == "A2");
    REQUIRE(history.at("b.mdl").size() == 2);
    CHECK(history.at("b.mdl")[0].commit_id == "c1");
    CHECK(history.at("b.mdl")[1].commit_id == "c2");
}

TEST_CASE("snapshot mining returns an empty map when nothing matches") {
    SnapshotBuilder repo;
    repo.add_revision(0, "c1", 1000, {{"readme.txt", "hello"}});
    RepoSource src{repo.path(), {"*.mdl"}, {}, {}};
    CHECK(list_model_revisions(src).empty());
}

TEST_CASE("snapshot timestamps equal the manifest ground truth") {
    SnapshotBuilder repo;
    std::vector<std::int64_t> times{1000, 5000, 86400 * 3, 86400 * 9 + 7, 86400 * 30};
    for (std::size_t i = 0; i < times.size(); ++i)
        repo.add_revision(static_cast<long>(i), "c" + std::to_string(i), times[i],
                          {{"m.mdl", "content v" + std::to_string(i)}});
    RepoSource src{repo.path(), {"m.mdl"}, {}, {}};
    auto history = list_model_revisions(src);
    REQUIRE(history.at("m.mdl").size() == times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(history.at("m.mdl")[i].timestamp == times[i]);
}

TEST_CASE("a deleted model's series simply ends") {
    SnapshotBuilder repo;
    repo.add_revision(0, "c1", 1000, {{"gone.mdl", "v1"}, {"stays.mdl", "s1"}});
    repo.add_revision(1, "c2", 2000, {{"gone.mdl", "v2"}, {"stays.mdl", "s1"}});
    repo.add_revision(2, "c3", 3000, {{"stays.mdl", "s2"}});  // gone.mdl deleted
    RepoSource src{repo.path(), {"*.mdl"}, {}, {}};
    auto history = list_model_revisions(src);
    REQUIRE(history.at("gone.mdl").size() == 2);
    CHECK(history.at("gone.mdl").back().commit_id == "c2");
}

TEST_CASE("since and until filter by day") {
    SnapshotBuilder repo;
    repo.add_revision(0, "c1", 86400 * 10, {{"m.mdl", "v1"}});
    repo.add_revision(1, "c2", 86400 * 20, {{"m.mdl", "v2"}});
    repo.add_revision(2, "c3", 86400 * 30, {{"m.mdl", "v3"}});
    RepoSource src{repo.path(), {"m.mdl"}, Date(15), Date(25)};
    auto history = list_model_revisions(src);
    REQUIRE(history.at("m.mdl").size() == 1);
    CHECK(history.at("m.mdl")[0].commit_id == "c2");
}

TEST_CASE("unreadable root or invalid source is fatal") {
    RepoSource src{"/nonexistent/path/xyz", {"*.mdl"}, {}, {}};
    CHECK_THROWS_AS(list_model_revisions(src), std::runtime_error);

    SnapshotBuilder repo;  // no manifest, no .git
    RepoSource empty{repo.path(), {"*.mdl"}, {}, {}};
    CHECK_THROWS_AS(list_model_revisions(empty), std::runtime_error);

    RepoSource no_patterns{repo.path(), {}, {}, {}};
    CHECK_THROWS_AS(list_model_revisions(no_patterns), std::invalid_argument);
}

TEST_CASE("measure_revisions keeps order and applies both metrics") {
    std::vector<Revision> revisions{
        {"c1", 1000, "Model {\n Block {\n }\n}\n"},
        {"c2", 2000, ""},
        {"c3", 3000, "Model {\n Block { } Block { }\n}\n"},
    };
    auto records = measure_revisions("m.mdl", revisions);
    REQUIRE(records.size() == 3);
    CHECK(records[0].loc == 4);
    CHECK(records[0].block_count == 1);
    CHECK(records[1].loc == 0);
    CHECK(records[1].block_count == 0);
    CHECK(records[2].loc == 3);
    CHECK(records[2].block_count == 2);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].commit_id == revisions[i].commit_id);
        CHECK_FALSE(records[i].block_parse_failed);
    }
}

TEST_CASE("a parse failure flags the record but keeps the line count") {
    std::vector<Revision> revisions{{"c1", 1000, "Model {\n  unbalanced\n"}};
    auto records = measure_revisions("broken.mdl", revisions);
    REQUIRE(records.size() == 1);
    CHECK(records[0].block_count == -1);
    CHECK(records[0].block_parse_failed);
    CHECK(records[0].loc == 2);
}

TEST_CASE("revisions CSV round trip") {
    std::vector<RevisionRecord> records{
        {"models/a.mdl", "c1", 1000, 10, 3, false},
        {"models/a.mdl", "c2", 2000, 12, -1, true},
        {"weird,name.mdl", "c3", 3000, 5, 1, false},
    };
    std::ostringstream out;
    write_revisions_csv(out, records);
    std::istringstream in(out.str());
    auto back = read_revisions_csv(in);
    CHECK(back == records);
}

TEST_CASE("mining a harness corpus matches its size manifest") {
    SnapshotBuilder repo;
    // Known LOC/BC per revision, built as ground truth.
    struct Expected {
        std::int64_t loc, bc;
    };
    std::vector<Expected> expected;
    for (int rev = 0; rev < 4; ++rev) {
        std::string content = "Model {\n";
        std::int64_t blocks = rev + 1;
        for (std::int64_t b = 0; b < blocks; ++b) content += "  Block {\n  }\n";
        content += "}\n";
        expected.push_back({static_cast<std::int64_t>(2 + 2 * blocks), blocks});
        repo.add_revision(rev, "c" + std::to_string(rev), 1000 * (rev + 1),
                          {{"m.mdl", content}});
    }
    RepoSource src{repo.path(), {"*.mdl"}, {}, {}};
    auto history = list_model_revisions(src);
    auto records = measure_revisions("m.mdl", history.at("m.mdl"));
    REQUIRE(records.size() == expected.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].loc == expected[i].loc);
        CHECK(records[i].block_count == expected[i].bc);
    }
}

TEST_CASE("mining is deterministic across runs") {
    SnapshotBuilder repo;
    repo.add_revision(0, "c1", 1000, {{"x.mdl", "Model {\n}\n"}, {"y.mdl", "System {\n}\n"}});
    repo.add_revision(1, "c2", 2000, {{"x.mdl", "Model {\n a 1\n}\n"}, {"y.mdl", "System {\n}\n"}});
    RepoSource src{repo.path(), {"*.mdl"}, {}, {}};

    auto render = [&] {
        std::ostringstream out;
        for (const auto& [id, revs] : list_model_revisions(src)) {
            std::vector<Revision> copy = revs;
            auto records = measure_revisions(id, copy);
            write_revisions_csv(out, records);
        }
        return out.str();
    };
    CHECK(render() == render());
}

TEST_CASE("git-backed mining agrees with the commands that built the repo") {
    int has_git = std::system("git --version > /dev/null 2>&1");
    if (has_git != 0) {
        MESSAGE("git unavailable; skipping");
        return;
    }
    fs::path root = fs::temp_directory_path() / ("mgrowth_git_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    auto git = [&](const std::string& args) {
        std::string cmd = "cd '" + root.string() + "' && git " + args + " > /dev/null 2>&1";
        REQUIRE(std::system(cmd.c_str()) == 0);
    };
    auto write = [&](const std::string& rel, const std::string& content) {
        std::ofstream out(root / rel, std::ios::binary);
        out << content;
    };
    git("init -q");
    git("config user.email t@example.com");
    git("config user.name t");
    auto commit = [&](const std::string& message, long when) {
        git("add -A");
        git("-c commit.gpgsign=false commit -q -m '" + message + "' --date='@" +
            std::to_string(when) + "'");
        // Pin the committer clock too; %ct reads the committer timestamp.
        std::string cmd = "cd '" + root.string() +
                          "' && GIT_COMMITTER_DATE='@" + std::to_string(when) +
                          " +0000' git -c commit.gpgsign=false commit -q --amend --no-edit "
                          "--date='@" +
                          std::to_string(when) + " +0000' > /dev/null 2>&1";
        REQUIRE(std::system(cmd.c_str()) == 0);
    };

    write("one.mdl", "Model {\n}\n");
    commit("first", 1600000000);
    write("two.mdl", "System {\n}\n");
    commit("second", 1600086400);
    write("one.mdl", "Model {\n Block {\n }\n}\n");
    commit("third", 1600172800);

    RepoSource src{root.string(), {"*.mdl"}, {}, {}};
    auto history = list_model_revisions(src);
    REQUIRE(history.size() == 2);
    REQUIRE(history.at("one.mdl").size() == 2);
    CHECK(history.at("one.mdl")[0].content == "Model {\n}\n");
    CHECK(history.at("one.mdl")[1].content == "Model {\n Block {\n }\n}\n");
    CHECK(history.at("one.mdl")[0].timestamp == 1600000000);
    CHECK(history.at("one.mdl")[1].timestamp == 1600172800);
    REQUIRE(history.at("two.mdl").size() == 1);
    CHECK(history.at("two.mdl")[0].timestamp == 1600086400);

    fs::remove_all(root);
}
