#include <catch2/catch_amalgamated.hpp>

#include "mpprl/blocking.hpp"
#include "mpprl/records.hpp"
#include "mpprl/soundex.hpp"

using namespace mpprl;

TEST_CASE("soundex encodes the classic reference names") {
    CHECK(soundex("Robert") == "R163");
    CHECK(soundex("Rupert") == "R163");
    CHECK(soundex("Smith") == "S530");
    CHECK(soundex("Smyth") == "S530");
    CHECK(soundex("Ashcraft") == "A261");  // h is transparent between equal codes
    CHECK(soundex("Tymczak") == "T522");
    CHECK(soundex("Pfister") == "P236");
    CHECK(soundex("Honeyman") == "H555");
    CHECK(soundex("Jackson") == "J250");
}

TEST_CASE("soundex is case-insensitive and ignores non-letters") {
    CHECK(soundex("smith") == soundex("SMITH"));
    CHECK(soundex("o'brien") == soundex("obrien"));
    CHECK(soundex("  washington 12 ") == soundex("washington"));
}

TEST_CASE("soundex degenerate inputs") {
    CHECK(soundex("") == "Z000");
    CHECK(soundex("123-?") == "Z000");
    CHECK(soundex("a") == "A000");
    CHECK(soundex("hw") == "H000");
}

TEST_CASE("blocking key concatenates per-attribute codes") {
    PlainRecord rec{"r1", "e1", {"sarah", "smith", "ashford", "2100"}};
    CHECK(blocking_key(rec, {0}) == soundex("sarah"));
    CHECK(blocking_key(rec, {0, 1}) == soundex("sarah") + soundex("smith"));
    CHECK_THROWS_AS(blocking_key(rec, {7}), std::invalid_argument);
}

namespace {

EncodedDatabase make_db(int party, const std::vector<std::pair<std::string, std::string>>&
                                       id_bkv) {
    EncodedDatabase db;
    db.party_index = party;
    for (const auto& [id, bkv] : id_bkv) {
        EncodedRecord rec;
        rec.record_id = id;
        rec.bkv = bkv;
        rec.bf = BloomFilter(8);
        db.records.push_back(std::move(rec));
    }
    return db;
}

}  // namespace

TEST_CASE("block index partitions every party's records by key") {
    std::vector<EncodedDatabase> dbs = {
        make_db(0, {{"a0", "S530"}, {"a1", "R163"}, {"a2", "S530"}}),
        make_db(1, {{"b0", "S530"}, {"b1", "B650"}}),
    };
    const BlockIndex index = build_blocks(dbs);
    REQUIRE(index.blocks.size() == 3);
    REQUIRE(index.party_count == 2);

    const auto& s530 = index.blocks.at("S530");
    CHECK(s530[0] == std::vector<std::size_t>{0, 2});
    CHECK(s530[1] == std::vector<std::size_t>{0});
    CHECK(BlockIndex::parties_present(s530) == 2);

    const auto& r163 = index.blocks.at("R163");
    CHECK(r163[0] == std::vector<std::size_t>{1});
    CHECK(r163[1].empty());
    CHECK(BlockIndex::parties_present(r163) == 1);

    // every record lands in exactly one block
    std::size_t total = 0;
    for (const auto& [key, lists] : index.blocks)
        for (const auto& l : lists) total += l.size();
    CHECK(total == 5);
}

TEST_CASE("blocking pairs completeness counts co-blocked matching sets") {
    std::vector<EncodedDatabase> dbs(2);
    dbs[0].party_index = 0;
    dbs[1].party_index = 1;
    auto add = [](EncodedDatabase& db, const std::string& id, const std::string& ent,
                  const std::string& bkv) {
        EncodedRecord rec;
        rec.record_id = id;
        rec.entity_id = ent;
        rec.bkv = bkv;
        db.records.push_back(std::move(rec));
    };
    // e1 shares a block, e2 is split across blocks, e3 is unmatched.
    add(dbs[0], "a0", "e1", "S530");
    add(dbs[1], "b0", "e1", "S530");
    add(dbs[0], "a1", "e2", "S530");
    add(dbs[1], "b1", "e2", "X999");
    add(dbs[0], "a2", "e3", "K200");
    CHECK(blocking_recall(dbs) == Catch::Approx(0.5));

    std::vector<EncodedDatabase> no_matches(1);
    add(no_matches[0], "a0", "e9", "S530");
    CHECK(blocking_recall(no_matches) == 1.0);
}
