#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mpprl/cluster.hpp"
#include "mpprl/csv.hpp"
#include "mpprl/records.hpp"

using namespace mpprl;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {}
    ~TempFile() { std::filesystem::remove(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("csv escaping round trips awkward fields") {
    const std::vector<std::string> fields = {"plain", "with,comma", "with \"quote\"",
                                             "", "  spaced  "};
    const std::string line = csv_join(fields);
    CHECK(csv_split(line) == fields);

    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("csv reader skips comment lines and parses the header") {
    TempFile tmp("mpprl_test_table.csv");
    {
        std::ofstream out(tmp.str());
        out << "# generated for a test\n";
        out << "# seed=42\n";
        out << "col_a,col_b\n";
        out << "1,\"x,y\"\n";
        out << "2,z\n";
    }
    const CsvTable table = read_csv(tmp.str());
    CHECK(table.header == std::vector<std::string>{"col_a", "col_b"});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0] == std::vector<std::string>{"1", "x,y"});
    CHECK(table.rows[1] == std::vector<std::string>{"2", "z"});

    CHECK_THROWS_AS(read_csv("/nonexistent/file.csv"), std::runtime_error);
}

TEST_CASE("base64 round trips arbitrary bytes") {
    std::mt19937_64 rng(12);
    for (std::size_t len : {0u, 1u, 2u, 3u, 4u, 57u, 256u}) {
        std::vector<std::uint8_t> data(len);
        for (auto& b : data) b = static_cast<std::uint8_t>(rng());
        CHECK(base64_decode(base64_encode(data)) == data);
    }
    CHECK(base64_encode({'M', 'a', 'n'}) == "TWFu");
    CHECK(base64_encode({'M', 'a'}) == "TWE=");
    CHECK(base64_encode({'M'}) == "TQ==");
}

TEST_CASE("plaintext database files round trip") {
    PlainDatabase db;
    db.party_index = 2;
    db.records.push_back({"r0", "e1", {"sarah", "smith", "ashford", "2100"}});
    db.records.push_back({"r1", "", {"o'brien, jr", "taylor", "belmont", "2107"}});

    TempFile tmp("mpprl_test_plain.csv");
    write_plain_csv(db, tmp.str(), {"seed=42", "parties=3"});
    const PlainDatabase back = read_plain_csv(tmp.str(), 2);

    CHECK(back.party_index == 2);
    REQUIRE(back.records.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.records[i].record_id == db.records[i].record_id);
        CHECK(back.records[i].entity_id == db.records[i].entity_id);
        CHECK(back.records[i].qid_values == db.records[i].qid_values);
    }
}

TEST_CASE("encoded database files round trip bit-exactly") {
    EncodingParams params;
    params.bf_length = 256;
    params.num_hashes = 8;

    PlainDatabase plain;
    plain.party_index = 1;
    plain.records.push_back({"r0", "e1", {"sarah", "smith", "ashford", "2100"}});
    plain.records.push_back({"r1", "e2", {"john", "walker", "clayton", "2114"}});
    const EncodedDatabase db = encode_database(plain, params, {0, 1});

    TempFile tmp("mpprl_test_encoded.csv");
    write_encoded_csv(db, params, tmp.str());
    const EncodedDatabase back = read_encoded_csv(tmp.str(), 1, &params);

    REQUIRE(back.records.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.records[i].record_id == db.records[i].record_id);
        CHECK(back.records[i].entity_id == db.records[i].entity_id);
        CHECK(back.records[i].bkv == db.records[i].bkv);
        CHECK(back.records[i].bf == db.records[i].bf);
    }

    EncodingParams wrong = params;
    wrong.iteration_salt = "other";
    CHECK_THROWS_AS(read_encoded_csv(tmp.str(), 1, &wrong), std::invalid_argument);
}

TEST_CASE("match cluster files round trip") {
    MatchSet matches;
    matches.clusters.push_back({{{0, "a0"}, {1, "b0"}, {2, "c0"}}});
    matches.clusters.push_back({{{0, "a1"}, {2, "c1"}}});

    TempFile tmp("mpprl_test_matches.csv");
    {
        std::ofstream out(tmp.str());
        write_matches_csv(matches, out, {"threshold=0.8"});
    }
    const MatchSet back = read_matches_csv(tmp.str());
    REQUIRE(back.clusters.size() == 2);
    CHECK(back.clusters[0].members == matches.clusters[0].members);
    CHECK(back.clusters[1].members == matches.clusters[1].members);
}
