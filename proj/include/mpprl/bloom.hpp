#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mpprl/hashing.hpp"

namespace mpprl {

// Parameters of the q-gram / Bloom filter encoding shared by all parties.
struct EncodingParams {
    std::size_t bf_length = 1000;   // l
    std::size_t num_hashes = 30;    // k
    std::size_t gram_length = 2;    // q
    std::uint64_t seed1 = 0x243f6a8885a308d3ULL;
    std::uint64_t seed2 = 0x13198a2e03707344ULL;
    std::string iteration_salt;     // distinguishes per-iteration re-encodings

    void validate() const {
        if (bf_length < 1) throw std::invalid_argument("bf_length must be >= 1");
        if (num_hashes < 1) throw std::invalid_argument("num_hashes must be >= 1");
        if (gram_length < 1) throw std::invalid_argument("gram_length must be >= 1");
    }

    std::uint32_t salt_digest() const {
        return static_cast<std::uint32_t>(
            hash_bytes(iteration_salt, seed1 ^ std::rotl(seed2, 32)));
    }
};

// Fixed-length bit vector with a cached set-bit count. Immutable in practice
// once an encoder has produced it.
class BloomFilter {
  public:
    BloomFilter() = default;

    explicit BloomFilter(std::size_t length)
        : length_(length), words_((length + 63) / 64, 0) {}

    std::size_t length() const { return length_; }
    std::size_t cardinality() const { return cardinality_; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    bool test(std::size_t pos) const {
        return (words_[pos / 64] >> (pos % 64)) & 1u;
    }

    void set(std::size_t pos) {
        std::uint64_t& w = words_[pos / 64];
        std::uint64_t bit = 1ULL << (pos % 64);
        if (!(w & bit)) {
            w |= bit;
            ++cardinality_;
        }
    }

    friend bool operator==(const BloomFilter& a, const BloomFilter& b) = default;

  private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
    std::size_t cardinality_ = 0;
};

// Per-position counts aggregated from several equal-length Bloom filters.
struct CountingBloomFilter {
    std::vector<std::uint32_t> counts;
    std::size_t num_summands = 0;

    std::size_t length() const { return counts.size(); }
};

// Distinct contiguous substrings of length q of the lowercased,
// whitespace-trimmed value. Returned sorted and deduplicated.
inline std::vector<std::string> extract_qgrams(std::string_view value,
                                               const EncodingParams& params) {
    std::size_t begin = 0, end = value.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(value[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(value[end - 1]))) --end;

    std::string lowered;
    lowered.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i)
        lowered.push_back(static_cast<char>(
            std::tolower(static_cast<unsigned char>(value[i]))));

    std::vector<std::string> grams;
    const std::size_t q = params.gram_length;
    if (lowered.size() >= q)
        for (std::size_t i = 0; i + q <= lowered.size(); ++i)
            grams.push_back(lowered.substr(i, q));
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    return grams;
}

namespace detail {

inline void hash_gram_into(const std::string& gram, const EncodingParams& params,
                           std::uint64_t salted1, std::uint64_t salted2,
                           BloomFilter& bf) {
    const std::uint64_t h1 = hash_bytes(gram, salted1);
    const std::uint64_t h2 = hash_bytes(gram, salted2);
    for (std::size_t i = 1; i <= params.num_hashes; ++i)
        bf.set(static_cast<std::size_t>((h1 + i * h2) % params.bf_length));
}

}  // namespace detail

// Record-level (CLK) encoding: the q-grams of every QID value are hash-mapped
// into one shared Bloom filter via double hashing, keyed by the seed pair and
// the iteration salt. No grams cross attribute boundaries.
inline BloomFilter encode_record(const std::vector<std::string>& qid_values,
                                 const EncodingParams& params) {
    params.validate();
    if (qid_values.empty())
        throw std::invalid_argument("encode_record: no QID values");

    const std::uint64_t salted1 = hash_bytes(params.iteration_salt, params.seed1);
    const std::uint64_t salted2 = hash_bytes(params.iteration_salt, params.seed2);

    BloomFilter bf(params.bf_length);
    bool any_gram = false;
    bool any_nonempty = false;
    for (const auto& value : qid_values) {
        for (char c : value)
            if (!std::isspace(static_cast<unsigned char>(c))) any_nonempty = true;
        for (const auto& gram : extract_qgrams(value, params)) {
            detail::hash_gram_into(gram, params, salted1, salted2, bf);
            any_gram = true;
        }
    }
    if (!any_nonempty)
        throw std::invalid_argument("encode_record: all QID values empty");
    (void)any_gram;  // values shorter than q legitimately produce no grams
    return bf;
}

// Dice coefficient of two equal-length filters: 2z / (x1 + x2).
inline double dice_bf(const BloomFilter& a, const BloomFilter& b) {
    if (a.length() != b.length())
        throw std::invalid_argument("dice_bf: length mismatch");
    std::size_t z = 0;
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i)
        z += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
    const std::size_t denom = a.cardinality() + b.cardinality();
    if (denom == 0) return 0.0;
    return 2.0 * static_cast<double>(z) / static_cast<double>(denom);
}

// Generalized Dice coefficient of p >= 2 filters: p*z / sum(x_i), where z is
// the popcount of the AND of all filters.
inline double dice_bf(const std::vector<const BloomFilter*>& filters) {
    if (filters.size() < 2)
        throw std::invalid_argument("dice_bf: need at least 2 filters");
    const std::size_t len = filters.front()->length();
    std::size_t denom = 0;
    for (const BloomFilter* f : filters) {
        if (f->length() != len)
            throw std::invalid_argument("dice_bf: length mismatch");
        denom += f->cardinality();
    }
    if (denom == 0) return 0.0;

    const std::size_t nwords = filters.front()->words().size();
    std::size_t z = 0;
    for (std::size_t w = 0; w < nwords; ++w) {
        std::uint64_t acc = filters.front()->words()[w];
        for (std::size_t i = 1; i < filters.size() && acc; ++i)
            acc &= filters[i]->words()[w];
        z += static_cast<std::size_t>(std::popcount(acc));
    }
    return static_cast<double>(filters.size()) * static_cast<double>(z) /
           static_cast<double>(denom);
}

inline double dice_bf(const std::vector<BloomFilter>& filters) {
    std::vector<const BloomFilter*> ptrs;
    ptrs.reserve(filters.size());
    for (const auto& f : filters) ptrs.push_back(&f);
    return dice_bf(ptrs);
}

// Vector addition of equal-length filters into a counting Bloom filter.
inline CountingBloomFilter sum_to_cbf(const std::vector<const BloomFilter*>& filters) {
    if (filters.empty())
        throw std::invalid_argument("sum_to_cbf: need at least 1 filter");
    const std::size_t len = filters.front()->length();
    CountingBloomFilter cbf;
    cbf.counts.assign(len, 0);
    cbf.num_summands = filters.size();
    for (const BloomFilter* f : filters) {
        if (f->length() != len)
            throw std::invalid_argument("sum_to_cbf: length mismatch");
        for (std::size_t beta = 0; beta < len; ++beta)
            cbf.counts[beta] += f->test(beta) ? 1u : 0u;
    }
    return cbf;
}

inline CountingBloomFilter sum_to_cbf(const std::vector<BloomFilter>& filters) {
    std::vector<const BloomFilter*> ptrs;
    ptrs.reserve(filters.size());
    for (const auto& f : filters) ptrs.push_back(&f);
    return sum_to_cbf(ptrs);
}

// Dice coefficient of the p summed filters recovered from their CBF alone:
// p * |{beta : c[beta] = p}| / sum(c[beta]).
inline double dice_cbf(const CountingBloomFilter& cbf) {
    if (cbf.num_summands < 2)
        throw std::invalid_argument("dice_cbf: need at least 2 summands");
    std::size_t z = 0;
    std::uint64_t denom = 0;
    for (std::uint32_t count : cbf.counts) {
        if (count == cbf.num_summands) ++z;
        denom += count;
    }
    if (denom == 0) return 0.0;
    return static_cast<double>(cbf.num_summands) * static_cast<double>(z) /
           static_cast<double>(denom);
}

// ---------------------------------------------------------------------------
// Wire format: 16-byte header (magic "MBF1", l, k, salt digest), then the
// packed bit array prefixed with its byte count. All fields little-endian,
// bit beta stored at byte beta/8, bit beta%8.

namespace detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

inline std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace detail

inline constexpr std::uint8_t kBfMagic[4] = {'M', 'B', 'F', '1'};

inline std::vector<std::uint8_t> serialize_bf(const BloomFilter& bf,
                                              const EncodingParams& params) {
    std::vector<std::uint8_t> out;
    const std::uint32_t nbytes = static_cast<std::uint32_t>((bf.length() + 7) / 8);
    out.reserve(20 + nbytes);
    for (std::uint8_t b : kBfMagic) out.push_back(b);
    detail::put_u32(out, static_cast<std::uint32_t>(bf.length()));
    detail::put_u32(out, static_cast<std::uint32_t>(params.num_hashes));
    detail::put_u32(out, params.salt_digest());
    detail::put_u32(out, nbytes);
    for (std::uint32_t byte = 0; byte < nbytes; ++byte) {
        std::uint8_t b = 0;
        for (int bit = 0; bit < 8; ++bit) {
            const std::size_t pos = byte * 8u + static_cast<std::size_t>(bit);
            if (pos < bf.length() && bf.test(pos)) b |= static_cast<std::uint8_t>(1 << bit);
        }
        out.push_back(b);
    }
    return out;
}

// Deserializes and, when params are given, checks that the stream was written
// under the same l / k / salt.
inline BloomFilter deserialize_bf(const std::vector<std::uint8_t>& data,
                                  const EncodingParams* expected = nullptr) {
    if (data.size() < 20 || !std::equal(std::begin(kBfMagic), std::end(kBfMagic), data.begin()))
        throw std::invalid_argument("deserialize_bf: bad magic");
    const std::uint32_t length = detail::get_u32(data.data() + 4);
    const std::uint32_t k = detail::get_u32(data.data() + 8);
    const std::uint32_t digest = detail::get_u32(data.data() + 12);
    const std::uint32_t nbytes = detail::get_u32(data.data() + 16);
    if (data.size() != 20u + nbytes || nbytes != (length + 7) / 8)
        throw std::invalid_argument("deserialize_bf: truncated payload");
    if (expected) {
        if (length != expected->bf_length || k != expected->num_hashes ||
            digest != expected->salt_digest())
            throw std::invalid_argument("deserialize_bf: encoding parameter mismatch");
    }
    BloomFilter bf(length);
    for (std::uint32_t pos = 0; pos < length; ++pos)
        if ((data[20 + pos / 8] >> (pos % 8)) & 1u) bf.set(pos);
    return bf;
}

}  // namespace mpprl
