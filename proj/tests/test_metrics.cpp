#include <string>

#include "doctest.h"
#include "mgrowth/common/rng.hpp"
#include "mgrowth/metrics/loc.hpp"
#include "mgrowth/metrics/model_doc.hpp"
#include "support/synthetic.hpp"

using namespace mgrowth;
using namespace mgrowth::metrics;

TEST_CASE("count_loc basics") {
    CHECK(count_loc("") == 0);
    CHECK(count_loc("a\nb\nc\n") == 3);
    CHECK(count_loc("a\nb\nc") == 3);  // unterminated final line still counts
    CHECK(count_loc("\n") == 1);
    CHECK(count_loc("a\r\nb\r\n") == 2);
    CHECK(count_loc("single") == 1);
}

TEST_CASE("count_loc matches the generator on large input") {
    Rng rng(7);
    std::string content;
    const int lines = 10000;
    for (int i = 0; i < lines; ++i) {
        int len = static_cast<int>(rng.below(40));
        for (int c = 0; c < len; ++c) content += static_cast<char>('a' + rng.below(26));
        content += '\n';
    }
    CHECK(count_loc(content) == lines);
}

TEST_CASE("count_loc is monotone under appending a line") {
    // s ends in a complete (unterminated) line; appending "\nx" adds one.
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::string s = "head";
        int lines = static_cast<int>(rng.below(20));
        for (int i = 0; i < lines; ++i) s += "\nline" + std::to_string(i);
        CHECK(count_loc(s + "\nx") == count_loc(s) + 1);
    }
}

TEST_CASE("parse_model on the smallest document") {
    auto doc = parse_model("Model {\n}\n");
    REQUIRE(doc.roots.size() == 1);
    CHECK(doc.roots[0].name == "Model");
    CHECK(doc.roots[0].children.empty());
    CHECK(doc.roots[0].attributes.empty());
}

TEST_CASE("parse_model handles nesting on one line") {
    auto doc = parse_model("Model { System { Block { } Block { } } }");
    REQUIRE(doc.roots.size() == 1);
    const auto& system = doc.roots[0].children.at(0);
    CHECK(system.name == "System");
    REQUIRE(system.children.size() == 2);
    CHECK(system.children[0].name == "Block");
    CHECK(system.children[1].name == "Block");
}

TEST_CASE("parse_model keeps attribute lines verbatim") {
    auto doc = parse_model("Block {\n  Name \"controller\"\n  Ports [1, 2]\n}\n");
    REQUIRE(doc.roots.size() == 1);
    REQUIRE(doc.roots[0].attributes.size() == 2);
    CHECK(doc.roots[0].attributes[0] == "Name \"controller\"");
    CHECK(doc.roots[0].attributes[1] == "Ports [1, 2]");
}

TEST_CASE("parse_model reports positions on errors") {
    CHECK_THROWS_AS(parse_model("Model {\n"), ParseError);
    CHECK_THROWS_AS(parse_model("}\n"), ParseError);
    CHECK_THROWS_AS(parse_model("Model {\n}\n}\n"), ParseError);
    CHECK_THROWS_AS(parse_model("{\n}\n"), ParseError);  // missing name token
    CHECK_THROWS_AS(parse_model("stray attribute\n"), ParseError);
    try {
        parse_model("Model {\n}\n}\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("count_blocks counts nested Block sections") {
    CHECK(count_blocks(parse_model("Model { System { } }")) == 0);
    CHECK(count_blocks(parse_model("System{ Block{} System{ Block{} Block{} } }")) == 3);
    CHECK(count_blocks(parse_model("")) == 0);
}

TEST_CASE("print then reparse preserves generated trees") {
    Rng rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        int placed = 0;
        auto doc = synthetic::random_document(rng, static_cast<int>(rng.below(12)), placed);
        auto text = to_text(doc);
        auto reparsed = parse_model(text);
        CHECK(reparsed == doc);
        CHECK(count_blocks(reparsed) == count_blocks(doc));
    }
}

TEST_CASE("generated trees count exactly the planted Block nodes") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        int placed = 0;
        auto doc = synthetic::random_document(rng, 1 + static_cast<int>(rng.below(15)), placed);
        CHECK(count_blocks(doc) == placed);
    }
}
