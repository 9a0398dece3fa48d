#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>
#include <vector>

#include "mpprl/cluster.hpp"
#include "mpprl/protocol.hpp"

using namespace mpprl;

namespace {

BloomFilter random_bf(std::size_t length, std::mt19937_64& rng) {
    BloomFilter bf(length);
    for (std::size_t i = 0; i < length; ++i)
        if (rng() % 3 == 0) bf.set(i);
    return bf;
}

}  // namespace

TEST_CASE("ring summation equals a direct vector sum") {
    std::mt19937_64 rng(123);
    SummationHub hub(42);
    for (int round = 0; round < 200; ++round) {
        const std::size_t p = 1 + rng() % 6;
        const std::size_t len = 64;
        std::vector<BloomFilter> bfs;
        for (std::size_t i = 0; i < p; ++i) bfs.push_back(random_bf(len, rng));
        std::vector<const BloomFilter*> ptrs;
        for (const auto& bf : bfs) ptrs.push_back(&bf);

        SummationSession session = hub.open_session(len);
        const CountingBloomFilter result = secure_sum(ptrs, session);
        const CountingBloomFilter expect = sum_to_cbf(ptrs);
        REQUIRE(result.counts == expect.counts);
        REQUIRE(result.num_summands == p);
    }
}

TEST_CASE("summing p filters takes exactly p + 1 messages around the ring") {
    std::mt19937_64 rng(5);
    SummationHub hub(42);
    for (std::size_t p = 1; p <= 6; ++p) {
        std::vector<BloomFilter> bfs;
        for (std::size_t i = 0; i < p; ++i) bfs.push_back(random_bf(32, rng));
        std::vector<const BloomFilter*> ptrs;
        for (const auto& bf : bfs) ptrs.push_back(&bf);

        SummationSession session = hub.open_session(32);
        secure_sum(ptrs, session);
        REQUIRE(session.transcript.size() == p + 1);

        // hop 0: unit -> first party; hop i: party i forwards; last hop
        // returns to the unit
        CHECK(session.transcript.front().sender == 0);
        CHECK(session.transcript.front().receiver == 1);
        for (std::size_t i = 1; i <= p; ++i) {
            CHECK(session.transcript[i].step == i);
            CHECK(session.transcript[i].sender == static_cast<int>(i));
            CHECK(session.transcript[i].receiver ==
                  (i == p ? 0 : static_cast<int>(i + 1)));
        }
    }
}

TEST_CASE("sessions are single-use and shape-checked") {
    SummationHub hub(1);
    BloomFilter bf(16);
    bf.set(2);
    const std::vector<const BloomFilter*> one = {&bf};

    SummationSession session = hub.open_session(16);
    secure_sum(one, session);
    CHECK_THROWS_AS(secure_sum(one, session), std::logic_error);

    SummationSession fresh = hub.open_session(16);
    CHECK_THROWS_AS(secure_sum({}, fresh), std::invalid_argument);

    SummationSession short_session = hub.open_session(8);
    CHECK_THROWS_AS(secure_sum(one, short_session), std::invalid_argument);

    BloomFilter other(8);
    SummationSession mixed = hub.open_session(16);
    CHECK_THROWS_AS(secure_sum({&bf, &other}, mixed), std::invalid_argument);
}

TEST_CASE("with a zero blinding vector the messages are the plain partial sums") {
    std::mt19937_64 rng(9);
    const std::size_t len = 24;
    std::vector<BloomFilter> bfs;
    for (int i = 0; i < 3; ++i) bfs.push_back(random_bf(len, rng));
    std::vector<const BloomFilter*> ptrs;
    for (const auto& bf : bfs) ptrs.push_back(&bf);

    SummationSession session;
    session.random_vector.assign(len, 0);
    session.keep_vectors = true;
    secure_sum(ptrs, session);

    REQUIRE(session.message_vectors.size() == 4);
    std::vector<std::uint32_t> partial(len, 0);
    CHECK(session.message_vectors[0] == partial);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t beta = 0; beta < len; ++beta)
            partial[beta] += bfs[i].test(beta) ? 1u : 0u;
        CHECK(session.message_vectors[i + 1] == partial);
    }
}

TEST_CASE("nonzero blinding hides the partial sums") {
    std::mt19937_64 rng(10);
    SummationHub hub(42);
    const std::size_t len = 64;
    std::vector<BloomFilter> bfs = {random_bf(len, rng), random_bf(len, rng)};
    SummationSession session = hub.open_session(len, true);
    secure_sum({&bfs[0], &bfs[1]}, session);

    // every intermediate message carries values far outside 0..p
    for (const auto& vec : session.message_vectors) {
        bool any_large = false;
        for (std::uint32_t v : vec)
            if (v > 1000) any_large = true;
        CHECK(any_large);
    }

    // two sessions of the same hub use different blinding vectors
    SummationSession other = hub.open_session(len);
    CHECK(other.random_vector != session.random_vector);
    CHECK(other.session_id != session.session_id);
}

TEST_CASE("transcript export is one row per message") {
    SummationHub hub(3);
    BloomFilter bf(8);
    std::vector<const BloomFilter*> ptrs = {&bf, &bf, &bf};
    SummationSession session = hub.open_session(8);
    secure_sum(ptrs, session);

    std::ostringstream out;
    append_transcript_csv(session, out);
    std::size_t lines = 0;
    for (char c : out.str())
        if (c == '\n') ++lines;
    CHECK(lines == 4);
}

TEST_CASE("summation-backed similarity equals the direct multi-filter dice") {
    std::mt19937_64 rng(77);
    const std::size_t len = 200;

    std::vector<EncodedDatabase> dbs(3);
    for (std::size_t party = 0; party < 3; ++party) {
        dbs[party].party_index = static_cast<int>(party);
        for (int i = 0; i < 4; ++i) {
            EncodedRecord rec;
            rec.record_id = "r" + std::to_string(i);
            rec.bf = random_bf(len, rng);
            dbs[party].records.push_back(std::move(rec));
        }
    }
    std::vector<const EncodedDatabase*> ordered = {&dbs[0], &dbs[1], &dbs[2]};
    StaticRecordAccess access(ordered);

    DirectProvider direct(access, SimilarityMode::set_dice);
    SummationHub hub(42);
    ProtocolStats stats;
    ProtocolProvider protocol(access, hub, &stats);

    const std::vector<MemberRef> members = {{0, 1}, {1, 2}};
    const MemberRef rec{2, 3};
    const double a = direct.cluster_record(members, rec, 2);
    const double b = protocol.cluster_record(members, rec, 2);
    REQUIRE(a == b);  // bit-identical, not approximately equal

    // 3 summands => 4 messages, booked under iteration 2
    CHECK(stats.sessions_per_iteration.at(2) == 1);
    CHECK(stats.messages_per_iteration.at(2) == 4);
}
