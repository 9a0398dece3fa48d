#pragma once

#include <array>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpprl/bloom.hpp"
#include "mpprl/csv.hpp"
#include "mpprl/soundex.hpp"

namespace mpprl {

// QID schema used throughout: first name, last name, city, zipcode.
inline constexpr std::array<const char*, 4> kQidNames = {"first_name", "last_name",
                                                         "city", "zipcode"};

struct PlainRecord {
    std::string record_id;
    std::string entity_id;                 // ground truth; may be empty
    std::vector<std::string> qid_values;   // kQidNames order
};

struct PlainDatabase {
    int party_index = 0;
    std::vector<PlainRecord> records;
};

// A record as seen by the linkage unit: no plaintext QIDs, only the blocking
// key value and the Bloom filter.
struct EncodedRecord {
    std::string record_id;
    std::string entity_id;   // optional, carried for evaluation only
    std::string bkv;
    BloomFilter bf;
};

struct EncodedDatabase {
    int party_index = 0;
    std::vector<EncodedRecord> records;
};

inline std::size_t qid_index(const std::string& name) {
    for (std::size_t i = 0; i < kQidNames.size(); ++i)
        if (name == kQidNames[i]) return i;
    throw std::invalid_argument("unknown QID attribute: " + name);
}

// Blocking key = concatenated Soundex codes of the key attributes, computed
// on the plaintext side before encoding.
inline std::string blocking_key(const PlainRecord& rec,
                                const std::vector<std::size_t>& key_attrs) {
    std::string bkv;
    for (std::size_t attr : key_attrs) {
        if (attr >= rec.qid_values.size())
            throw std::invalid_argument("blocking attribute missing from record " +
                                        rec.record_id);
        bkv += soundex(rec.qid_values[attr]);
    }
    return bkv;
}

inline EncodedDatabase encode_database(const PlainDatabase& db,
                                       const EncodingParams& params,
                                       const std::vector<std::size_t>& key_attrs) {
    EncodedDatabase out;
    out.party_index = db.party_index;
    out.records.reserve(db.records.size());
    for (const auto& rec : db.records) {
        EncodedRecord enc;
        enc.record_id = rec.record_id;
        enc.entity_id = rec.entity_id;
        enc.bkv = blocking_key(rec, key_attrs);
        enc.bf = encode_record(rec.qid_values, params);
        out.records.push_back(std::move(enc));
    }
    return out;
}

// ---------------------------------------------------------------------------
// File formats

inline void write_plain_csv(const PlainDatabase& db, const std::string& path,
                            const std::vector<std::string>& config_header = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& line : config_header) out << "# " << line << "\n";
    out << "record_id,entity_id,first_name,last_name,city,zipcode\n";
    for (const auto& rec : db.records) {
        std::vector<std::string> fields = {rec.record_id, rec.entity_id};
        fields.insert(fields.end(), rec.qid_values.begin(), rec.qid_values.end());
        out << csv_join(fields) << "\n";
    }
}

inline PlainDatabase read_plain_csv(const std::string& path, int party_index) {
    const CsvTable table = read_csv(path);
    if (table.header.size() < 2 + kQidNames.size())
        throw std::runtime_error("malformed plaintext file " + path);
    PlainDatabase db;
    db.party_index = party_index;
    for (const auto& row : table.rows) {
        if (row.size() < 2 + kQidNames.size())
            throw std::runtime_error("short row in " + path);
        PlainRecord rec;
        rec.record_id = row[0];
        rec.entity_id = row[1];
        rec.qid_values.assign(row.begin() + 2, row.begin() + 2 + kQidNames.size());
        db.records.push_back(std::move(rec));
    }
    return db;
}

// Encoded-party file: record_id, bkv, base64-serialized BF, optional entity_id.
inline void write_encoded_csv(const EncodedDatabase& db, const EncodingParams& params,
                              const std::string& path,
                              const std::vector<std::string>& config_header = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& line : config_header) out << "# " << line << "\n";
    out << "record_id,bkv,bf,entity_id\n";
    for (const auto& rec : db.records) {
        out << csv_join({rec.record_id, rec.bkv,
                         base64_encode(serialize_bf(rec.bf, params)), rec.entity_id})
            << "\n";
    }
}

inline EncodedDatabase read_encoded_csv(const std::string& path, int party_index,
                                        const EncodingParams* expected = nullptr) {
    const CsvTable table = read_csv(path);
    if (table.header.size() < 3)
        throw std::runtime_error("malformed encoded file " + path);
    EncodedDatabase db;
    db.party_index = party_index;
    for (const auto& row : table.rows) {
        if (row.size() < 3) throw std::runtime_error("short row in " + path);
        EncodedRecord rec;
        rec.record_id = row[0];
        rec.bkv = row[1];
        rec.bf = deserialize_bf(base64_decode(row[2]), expected);
        if (row.size() > 3) rec.entity_id = row[3];
        db.records.push_back(std::move(rec));
    }
    return db;
}

}  // namespace mpprl
