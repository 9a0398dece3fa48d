#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mpprl/records.hpp"

namespace mpprl {

// Union of per-party blocks keyed by blocking key value. For each key the
// vector holds, per party position, the indices of that party's records.
struct BlockIndex {
    std::map<std::string, std::vector<std::vector<std::size_t>>> blocks;
    std::size_t party_count = 0;

    // Number of parties with at least one record in the block.
    static std::size_t parties_present(const std::vector<std::vector<std::size_t>>& lists) {
        std::size_t n = 0;
        for (const auto& l : lists)
            if (!l.empty()) ++n;
        return n;
    }
};

// Groups the (already encoded) records of all parties by their BKV. Every
// record lands in exactly one block per party; empty lists are only stored
// as placeholders inside keys that exist for some party.
inline BlockIndex build_blocks(const std::vector<EncodedDatabase>& dbs) {
    BlockIndex index;
    index.party_count = dbs.size();
    for (std::size_t party = 0; party < dbs.size(); ++party) {
        for (std::size_t i = 0; i < dbs[party].records.size(); ++i) {
            auto& lists = index.blocks[dbs[party].records[i].bkv];
            if (lists.empty()) lists.resize(dbs.size());
            lists[party].push_back(i);
        }
    }
    return index;
}

// Pairs completeness of the blocking on ground-truth data: the fraction of
// true matching sets whose records all share one block. Diagnostic only.
inline double blocking_recall(const std::vector<EncodedDatabase>& dbs) {
    std::map<std::string, std::set<std::string>> entity_bkvs;
    std::map<std::string, int> entity_count;
    for (const auto& db : dbs) {
        for (const auto& rec : db.records) {
            if (rec.entity_id.empty()) continue;
            entity_bkvs[rec.entity_id].insert(rec.bkv);
            ++entity_count[rec.entity_id];
        }
    }
    std::size_t matched_sets = 0, co_blocked = 0;
    for (const auto& [entity, bkvs] : entity_bkvs) {
        if (entity_count[entity] < 2) continue;
        ++matched_sets;
        if (bkvs.size() == 1) ++co_blocked;
    }
    if (matched_sets == 0) return 1.0;
    return static_cast<double>(co_blocked) / static_cast<double>(matched_sets);
}

}  // namespace mpprl
