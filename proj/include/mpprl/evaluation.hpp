#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mpprl/bloom.hpp"
#include "mpprl/cluster.hpp"
#include "mpprl/records.hpp"

namespace mpprl {

// (party index, record id) -> entity id
struct GroundTruth {
    std::map<std::pair<int, std::string>, std::string> entity_of;

    static GroundTruth from_plain(const std::vector<PlainDatabase>& dbs) {
        GroundTruth t;
        for (const auto& db : dbs)
            for (const auto& rec : db.records)
                t.entity_of[{db.party_index, rec.record_id}] = rec.entity_id;
        return t;
    }

    static GroundTruth from_encoded(const std::vector<EncodedDatabase>& dbs) {
        GroundTruth t;
        for (const auto& db : dbs)
            for (const auto& rec : db.records)
                t.entity_of[{db.party_index, rec.record_id}] = rec.entity_id;
        return t;
    }
};

struct QualityReport {
    std::uint64_t true_matches = 0;      // TM
    std::uint64_t false_matches = 0;     // FM
    std::uint64_t false_non_matches = 0; // FN
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

// Pairwise scoring over clusters. The pair universe for recall is every
// cross-party record pair sharing an entity in the ground truth, so records
// lost to blocking count as false non-matches. Entities with fewer than
// min_subset_size records cannot appear in any output cluster, so they are
// excluded from the recall universe (but their output pairs still score).
inline QualityReport score_linkage(const MatchSet& matches, const GroundTruth& truth,
                                   std::size_t min_subset_size = 2) {
    std::map<std::string, std::map<int, std::uint64_t>> per_entity;
    for (const auto& [key, entity] : truth.entity_of)
        if (!entity.empty()) ++per_entity[entity][key.first];

    QualityReport report;
    std::uint64_t tm_eligible = 0;
    for (const auto& cluster : matches.clusters) {
        for (std::size_t i = 0; i < cluster.members.size(); ++i) {
            auto it_i = truth.entity_of.find(cluster.members[i]);
            if (it_i == truth.entity_of.end())
                throw std::invalid_argument("score_linkage: unknown record " +
                                            cluster.members[i].second);
            for (std::size_t j = i + 1; j < cluster.members.size(); ++j) {
                auto it_j = truth.entity_of.find(cluster.members[j]);
                if (it_j == truth.entity_of.end())
                    throw std::invalid_argument("score_linkage: unknown record " +
                                                cluster.members[j].second);
                if (!it_i->second.empty() && it_i->second == it_j->second) {
                    ++report.true_matches;
                    std::uint64_t t = 0;
                    for (const auto& [party, count] : per_entity[it_i->second])
                        t += count;
                    if (t >= min_subset_size) ++tm_eligible;
                } else {
                    ++report.false_matches;
                }
            }
        }
    }

    // Total true cross-party pairs among eligible entities.
    std::uint64_t total_true = 0;
    for (const auto& [entity, parties] : per_entity) {
        std::uint64_t t = 0, same_party = 0;
        for (const auto& [party, count] : parties) {
            t += count;
            same_party += count * (count - 1) / 2;
        }
        if (t < min_subset_size) continue;
        total_true += t * (t - 1) / 2 - same_party;
    }
    report.false_non_matches = total_true > tm_eligible ? total_true - tm_eligible : 0;

    const std::uint64_t tm = report.true_matches;
    report.precision = (tm + report.false_matches) == 0
                           ? 0.0
                           : static_cast<double>(tm) /
                                 static_cast<double>(tm + report.false_matches);
    report.recall = (tm + report.false_non_matches) == 0
                        ? 0.0
                        : static_cast<double>(tm) /
                              static_cast<double>(tm + report.false_non_matches);
    report.f_measure = (report.precision + report.recall) == 0.0
                           ? 0.0
                           : 2.0 * report.precision * report.recall /
                                 (report.precision + report.recall);
    return report;
}

// ---------------------------------------------------------------------------
// Worst-case linkage attack (D_G == D, hash functions known to the adversary)

struct AttackReport {
    double dr_mean = 0.0;      // average probability of suspicion 1/n_g
    double dr_marketer = 0.0;  // fraction of records with n_g == 1
    std::size_t targets = 0;
};

namespace detail {

inline std::string bf_key(const BloomFilter& bf) {
    return std::string(reinterpret_cast<const char*>(bf.words().data()),
                       bf.words().size() * sizeof(std::uint64_t));
}

// g is consistent with CBF c of x summands iff every 1-bit of g has count >= 1
// and every count == x position is set in g. Intermediate counts reveal
// nothing about individual BFs.
inline bool consistent_with_cbf(const BloomFilter& g,
                                const std::vector<std::uint64_t>& nonzero_mask,
                                const std::vector<std::uint64_t>& full_mask) {
    const auto& gw = g.words();
    for (std::size_t w = 0; w < gw.size(); ++w) {
        if (gw[w] & ~nonzero_mask[w]) return false;
        if (full_mask[w] & ~gw[w]) return false;
    }
    return true;
}

}  // namespace detail

// BF-mode attack: each target's probability of suspicion is 1 over the number
// of global records whose encoding matches the target's bit pattern exactly.
// The global database is treated as a multiset.
inline AttackReport attack_bf(const std::vector<EncodedDatabase>& encoded,
                              const std::vector<std::vector<std::string>>& global_qids,
                              const EncodingParams& params) {
    std::unordered_map<std::string, std::uint64_t> pattern_count;
    for (const auto& qids : global_qids)
        ++pattern_count[detail::bf_key(encode_record(qids, params))];

    AttackReport report;
    double sum_ps = 0.0;
    std::size_t unique = 0;
    for (const auto& db : encoded) {
        for (const auto& rec : db.records) {
            const auto it = pattern_count.find(detail::bf_key(rec.bf));
            if (it == pattern_count.end())
                throw std::logic_error("attack_bf: target with n_g = 0");
            sum_ps += 1.0 / static_cast<double>(it->second);
            if (it->second == 1) ++unique;
            ++report.targets;
        }
    }
    if (report.targets) {
        report.dr_mean = sum_ps / static_cast<double>(report.targets);
        report.dr_marketer = static_cast<double>(unique) /
                             static_cast<double>(report.targets);
    }
    return report;
}

// CBF-mode attack: records inside a match cluster of x >= 2 records are only
// exposed through the cluster's CBF; their n_g is the number of global
// encodings consistent with that CBF. Records outside any cluster degrade to
// the BF-mode case.
inline AttackReport attack_cbf(const std::vector<EncodedDatabase>& encoded,
                               const MatchSet& matches,
                               const std::vector<std::vector<std::string>>& global_qids,
                               const EncodingParams& params) {
    std::map<std::pair<int, std::string>, const BloomFilter*> bf_of;
    for (const auto& db : encoded)
        for (const auto& rec : db.records)
            bf_of[{db.party_index, rec.record_id}] = &rec.bf;

    std::vector<BloomFilter> global_bfs;
    global_bfs.reserve(global_qids.size());
    std::unordered_map<std::string, std::uint64_t> pattern_count;
    for (const auto& qids : global_qids) {
        global_bfs.push_back(encode_record(qids, params));
        ++pattern_count[detail::bf_key(global_bfs.back())];
    }

    std::map<std::pair<int, std::string>, double> ps_of;
    for (const auto& cluster : matches.clusters) {
        if (cluster.members.size() < 2) continue;
        const std::size_t x = cluster.members.size();
        const std::size_t nwords = bf_of.begin()->second->words().size();
        std::vector<std::uint32_t> counts(params.bf_length, 0);
        for (const auto& member : cluster.members) {
            const auto it = bf_of.find(member);
            if (it == bf_of.end())
                throw std::invalid_argument("attack_cbf: unknown record " + member.second);
            for (std::size_t beta = 0; beta < params.bf_length; ++beta)
                counts[beta] += it->second->test(beta) ? 1u : 0u;
        }
        std::vector<std::uint64_t> nonzero_mask(nwords, 0), full_mask(nwords, 0);
        for (std::size_t beta = 0; beta < params.bf_length; ++beta) {
            if (counts[beta] > 0) nonzero_mask[beta / 64] |= 1ULL << (beta % 64);
            if (counts[beta] == x) full_mask[beta / 64] |= 1ULL << (beta % 64);
        }
        std::uint64_t n_g = 0;
        for (const auto& g : global_bfs)
            if (detail::consistent_with_cbf(g, nonzero_mask, full_mask)) ++n_g;
        if (n_g == 0) throw std::logic_error("attack_cbf: cluster with n_g = 0");
        for (const auto& member : cluster.members)
            ps_of[member] = 1.0 / static_cast<double>(n_g);
    }

    AttackReport report;
    double sum_ps = 0.0;
    std::size_t unique = 0;
    for (const auto& db : encoded) {
        for (const auto& rec : db.records) {
            double ps;
            const auto it = ps_of.find({db.party_index, rec.record_id});
            if (it != ps_of.end()) {
                ps = it->second;
            } else {
                const auto pc = pattern_count.find(detail::bf_key(rec.bf));
                if (pc == pattern_count.end())
                    throw std::logic_error("attack_cbf: target with n_g = 0");
                ps = 1.0 / static_cast<double>(pc->second);
            }
            sum_ps += ps;
            if (ps == 1.0) ++unique;
            ++report.targets;
        }
    }
    if (report.targets) {
        report.dr_mean = sum_ps / static_cast<double>(report.targets);
        report.dr_marketer = static_cast<double>(unique) /
                             static_cast<double>(report.targets);
    }
    return report;
}

}  // namespace mpprl
