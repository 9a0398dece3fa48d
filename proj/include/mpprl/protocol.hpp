#pragma once

#include <atomic>
#include <cstdint>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpprl/bloom.hpp"
#include "mpprl/hashing.hpp"

namespace mpprl {

// One hop of the ring: party 0 is the linkage unit, parties 1..p the
// database owners in summation order.
struct SummationMessage {
    std::size_t step = 0;
    int sender = 0;
    int receiver = 0;
    std::uint32_t vector_digest = 0;
};

// State of one secure-summation run. Sessions are single-use; the blinding
// vector R is drawn uniformly from [0, 2^32).
struct SummationSession {
    std::uint64_t session_id = 0;
    std::vector<std::uint32_t> random_vector;
    std::vector<SummationMessage> transcript;
    std::vector<std::vector<std::uint32_t>> message_vectors;  // kept on request
    bool keep_vectors = false;
    bool used = false;
};

// Hands out independent sessions; safe to call from concurrent block workers.
class SummationHub {
  public:
    explicit SummationHub(std::uint64_t seed) : seeds_(seed) {}

    SummationSession open_session(std::size_t length, bool keep_vectors = false) {
        SummationSession s;
        s.session_id = next_id_.fetch_add(1, std::memory_order_relaxed);
        s.keep_vectors = keep_vectors;
        std::mt19937_64 rng(seeds_.derive("blinding", s.session_id));
        s.random_vector.resize(length);
        for (auto& v : s.random_vector)
            v = static_cast<std::uint32_t>(rng());
        return s;
    }

  private:
    SeedStream seeds_;
    std::atomic<std::uint64_t> next_id_{0};
};

namespace detail {

inline std::uint32_t vector_digest(const std::vector<std::uint32_t>& v) {
    std::uint64_t h = 0x9ae16a3b2f90404fULL;
    for (std::uint32_t x : v) h = mix64(h ^ x);
    return static_cast<std::uint32_t>(h);
}

inline void record_message(SummationSession& s, std::size_t step, int sender,
                           int receiver, const std::vector<std::uint32_t>& payload) {
    s.transcript.push_back({step, sender, receiver, vector_digest(payload)});
    if (s.keep_vectors) s.message_vectors.push_back(payload);
}

}  // namespace detail

// Ring summation: LU sends R to the first party, each party adds its BF and
// forwards, the last party returns the blinded total, and the LU unblinds.
// All arithmetic is mod 2^32, so every intermediate message is uniformly
// distributed. The result equals sum_to_cbf(bfs) exactly; p BFs cost p+1
// messages.
inline CountingBloomFilter secure_sum(const std::vector<const BloomFilter*>& bfs,
                                      SummationSession& session) {
    if (bfs.empty()) throw std::invalid_argument("secure_sum: need at least 1 BF");
    if (session.used) throw std::logic_error("secure_sum: session reuse");
    session.used = true;

    const std::size_t len = bfs.front()->length();
    if (session.random_vector.size() != len)
        throw std::invalid_argument("secure_sum: session length mismatch");
    for (const BloomFilter* bf : bfs)
        if (bf->length() != len)
            throw std::invalid_argument("secure_sum: length mismatch");

    std::vector<std::uint32_t> running = session.random_vector;
    detail::record_message(session, 0, 0, 1, running);

    for (std::size_t i = 0; i < bfs.size(); ++i) {
        for (std::size_t beta = 0; beta < len; ++beta)
            running[beta] += bfs[i]->test(beta) ? 1u : 0u;  // wraps mod 2^32
        const int sender = static_cast<int>(i + 1);
        const int receiver = (i + 1 == bfs.size()) ? 0 : static_cast<int>(i + 2);
        detail::record_message(session, i + 1, sender, receiver, running);
    }

    CountingBloomFilter cbf;
    cbf.num_summands = bfs.size();
    cbf.counts.resize(len);
    for (std::size_t beta = 0; beta < len; ++beta)
        cbf.counts[beta] = running[beta] - session.random_vector[beta];
    return cbf;
}

// Transcript dump for the privacy tests: one CSV row per message.
inline void append_transcript_csv(const SummationSession& session, std::ostream& out) {
    for (const auto& msg : session.transcript)
        out << session.session_id << ',' << msg.step << ',' << msg.sender << ','
            << msg.receiver << ',' << msg.vector_digest << '\n';
}

}  // namespace mpprl
