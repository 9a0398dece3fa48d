#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mpprl/assignment.hpp"
#include "mpprl/blocking.hpp"
#include "mpprl/bloom.hpp"
#include "mpprl/protocol.hpp"
#include "mpprl/records.hpp"

namespace mpprl {

enum class Ordering { random, size_descending, quality_descending };
enum class MappingKind { early, late, greedy };
enum class SimilarityMode { average, set_dice };

struct LinkageConfig {
    double sim_threshold = 0.8;              // s_t
    std::size_t min_subset_size = 2;         // s_m
    Ordering ordering = Ordering::size_descending;
    MappingKind mapping = MappingKind::early;
    SimilarityMode sim_mode = SimilarityMode::average;
    std::uint64_t seed = 1;
    double overlap_cap_factor = 10.0;  // late guard: membership cap = factor * |block|
    std::size_t workers = 1;
    std::vector<double> quality_scores;      // required for quality_descending

    void validate(std::size_t party_count) const {
        if (!(sim_threshold > 0.0 && sim_threshold <= 1.0))
            throw std::invalid_argument("sim_threshold must be in (0,1]");
        if (min_subset_size < 2 || min_subset_size > party_count)
            throw std::invalid_argument("min_subset_size must satisfy 2 <= s_m <= p");
        if (ordering == Ordering::quality_descending &&
            quality_scores.size() != party_count)
            throw std::invalid_argument(
                "quality_descending ordering needs one score per party");
    }
};

// Database processing order as a permutation of party positions.
inline std::vector<std::size_t> order_databases(const std::vector<std::size_t>& sizes,
                                                const LinkageConfig& cfg) {
    if (sizes.size() < 2)
        throw std::invalid_argument("order_databases: need at least 2 databases");
    std::vector<std::size_t> order(sizes.size());
    std::iota(order.begin(), order.end(), 0);
    switch (cfg.ordering) {
        case Ordering::random: {
            std::mt19937_64 rng(SeedStream(cfg.seed).derive("ordering"));
            std::shuffle(order.begin(), order.end(), rng);
            break;
        }
        case Ordering::size_descending:
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return sizes[a] > sizes[b];
            });
            break;
        case Ordering::quality_descending:
            if (cfg.quality_scores.size() != sizes.size())
                throw std::invalid_argument("order_databases: missing quality scores");
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return cfg.quality_scores[a] > cfg.quality_scores[b];
            });
            break;
    }
    return order;
}

// Average similarity between a cluster's member BFs and one record BF.
inline double avg_similarity(const std::vector<const BloomFilter*>& members,
                             const BloomFilter& rec) {
    if (members.empty()) throw std::invalid_argument("avg_similarity: empty cluster");
    double sum = 0.0;
    for (const BloomFilter* m : members) sum += dice_bf(*m, rec);
    return sum / static_cast<double>(members.size());
}

// (ordered party position, record index within that party's database)
using MemberRef = std::pair<std::size_t, std::size_t>;

// Record BF lookup, parameterized on the linkage iteration so protocol mode
// can re-encode per iteration.
class RecordAccess {
  public:
    virtual ~RecordAccess() = default;
    virtual const BloomFilter& bf(MemberRef ref, std::size_t iteration) const = 0;
};

class StaticRecordAccess : public RecordAccess {
  public:
    explicit StaticRecordAccess(std::vector<const EncodedDatabase*> ordered)
        : ordered_(std::move(ordered)) {}

    const BloomFilter& bf(MemberRef ref, std::size_t) const override {
        return ordered_[ref.first]->records[ref.second].bf;
    }

  private:
    std::vector<const EncodedDatabase*> ordered_;
};

// Re-encodes each party's records with a per-iteration salt; caches one
// encoded copy per (party, iteration).
class ReencodingRecordAccess : public RecordAccess {
  public:
    ReencodingRecordAccess(std::vector<const PlainDatabase*> ordered,
                           EncodingParams params, bool fresh_salt_per_iteration)
        : ordered_(std::move(ordered)), params_(std::move(params)),
          fresh_salt_(fresh_salt_per_iteration) {}

    const BloomFilter& bf(MemberRef ref, std::size_t iteration) const override {
        const std::size_t key = fresh_salt_ ? iteration : 0;
        std::lock_guard<std::mutex> lock(mutex_);
        auto& party_cache = cache_[ref.first];
        auto it = party_cache.find(key);
        if (it == party_cache.end()) {
            EncodingParams p = params_;
            if (fresh_salt_)
                p.iteration_salt += "#it" + std::to_string(iteration);
            std::vector<BloomFilter> encoded;
            encoded.reserve(ordered_[ref.first]->records.size());
            for (const auto& rec : ordered_[ref.first]->records)
                encoded.push_back(encode_record(rec.qid_values, p));
            it = party_cache.emplace(key, std::move(encoded)).first;
        }
        return it->second[ref.second];
    }

  private:
    std::vector<const PlainDatabase*> ordered_;
    EncodingParams params_;
    bool fresh_salt_;
    mutable std::mutex mutex_;
    mutable std::map<std::size_t, std::map<std::size_t, std::vector<BloomFilter>>> cache_;
};

// Cluster-to-record similarity used by the incremental clustering core.
class SimilarityProvider {
  public:
    virtual ~SimilarityProvider() = default;
    virtual double cluster_record(const std::vector<MemberRef>& members,
                                  MemberRef rec, std::size_t iteration) = 0;
};

// Direct BF comparison at the linkage unit.
class DirectProvider : public SimilarityProvider {
  public:
    DirectProvider(const RecordAccess& access, SimilarityMode mode)
        : access_(access), mode_(mode) {}

    double cluster_record(const std::vector<MemberRef>& members, MemberRef rec,
                          std::size_t iteration) override {
        const BloomFilter& rbf = access_.bf(rec, iteration);
        if (mode_ == SimilarityMode::average) {
            double sum = 0.0;
            for (const MemberRef& m : members)
                sum += dice_bf(access_.bf(m, iteration), rbf);
            return sum / static_cast<double>(members.size());
        }
        std::vector<const BloomFilter*> filters;
        filters.reserve(members.size() + 1);
        for (const MemberRef& m : members) filters.push_back(&access_.bf(m, iteration));
        filters.push_back(&rbf);
        return dice_bf(filters);
    }

  private:
    const RecordAccess& access_;
    SimilarityMode mode_;
};

struct ProtocolStats {
    // per linkage iteration: number of summation sessions and messages
    std::map<std::size_t, std::uint64_t> sessions_per_iteration;
    std::map<std::size_t, std::uint64_t> messages_per_iteration;
    std::mutex mutex;

    void record(std::size_t iteration, std::uint64_t messages) {
        std::lock_guard<std::mutex> lock(mutex);
        ++sessions_per_iteration[iteration];
        messages_per_iteration[iteration] += messages;
    }
};

// Similarity of cluster members plus the new record, computed by the LU from
// the CBF obtained through secure summation; it never touches individual BFs
// of the new party. Equals the multi-way Dice of the underlying BFs exactly.
class ProtocolProvider : public SimilarityProvider {
  public:
    ProtocolProvider(const RecordAccess& access, SummationHub& hub,
                     ProtocolStats* stats = nullptr,
                     std::function<void(const SummationSession&)> sink = {})
        : access_(access), hub_(hub), stats_(stats), sink_(std::move(sink)) {}

    double cluster_record(const std::vector<MemberRef>& members, MemberRef rec,
                          std::size_t iteration) override {
        std::vector<const BloomFilter*> filters;
        filters.reserve(members.size() + 1);
        for (const MemberRef& m : members) filters.push_back(&access_.bf(m, iteration));
        filters.push_back(&access_.bf(rec, iteration));
        SummationSession session = hub_.open_session(filters.front()->length());
        const CountingBloomFilter cbf = secure_sum(filters, session);
        if (stats_) stats_->record(iteration, session.transcript.size());
        if (sink_) {
            std::lock_guard<std::mutex> lock(sink_mutex_);
            sink_(session);
        }
        return dice_cbf(cbf);
    }

  private:
    const RecordAccess& access_;
    SummationHub& hub_;
    ProtocolStats* stats_;
    std::function<void(const SummationSession&)> sink_;
    std::mutex sink_mutex_;
};

// ---------------------------------------------------------------------------
// Block-local incremental clustering

struct ClusterVertex {
    std::vector<MemberRef> members;
};

struct BlockLinkResult {
    std::vector<ClusterVertex> clusters;
    std::uint64_t comparisons = 0;
    bool overflowed = false;  // late-mapping memory guard hit, block aborted
};

namespace detail {

inline std::size_t block_size(const std::vector<std::vector<std::size_t>>& block_records) {
    std::size_t n = 0;
    for (const auto& recs : block_records) n += recs.size();
    return n;
}

}  // namespace detail

// Early mapping (and its greedy baseline): one mapping round per party, edges
// pruned immediately, vertices merged under the one-to-one constraint.
inline BlockLinkResult link_early(const std::vector<std::vector<std::size_t>>& block_records,
                                  const LinkageConfig& cfg, SimilarityProvider& sim) {
    BlockLinkResult result;
    const std::size_t parties = block_records.size();
    for (std::size_t pos = 0; pos < parties; ++pos) {
        const auto& recs = block_records[pos];
        if (pos == 0) {
            for (std::size_t idx : recs)
                result.clusters.push_back({{{pos, idx}}});
            continue;
        }

        // Candidate edges at avg similarity >= s_t.
        std::vector<std::vector<std::pair<std::size_t, double>>> edges(
            result.clusters.size());
        std::vector<char> rec_has_edge(recs.size(), 0);
        std::vector<char> clu_has_edge(result.clusters.size(), 0);
        for (std::size_t vi = 0; vi < result.clusters.size(); ++vi) {
            for (std::size_t ri = 0; ri < recs.size(); ++ri) {
                const double s = sim.cluster_record(result.clusters[vi].members,
                                                    {pos, recs[ri]}, pos);
                ++result.comparisons;
                if (s >= cfg.sim_threshold) {
                    edges[vi].emplace_back(ri, s);
                    rec_has_edge[ri] = 1;
                    clu_has_edge[vi] = 1;
                }
            }
        }

        // One-to-one mapping over the vertices and records that carry edges.
        std::vector<std::size_t> rows, cols;
        std::vector<long> col_of(recs.size(), -1);
        for (std::size_t vi = 0; vi < result.clusters.size(); ++vi)
            if (clu_has_edge[vi]) rows.push_back(vi);
        for (std::size_t ri = 0; ri < recs.size(); ++ri) {
            if (rec_has_edge[ri]) {
                col_of[ri] = static_cast<long>(cols.size());
                cols.push_back(ri);
            }
        }
        SimilarityMatrix matrix(rows.size(), cols.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (const auto& [ri, s] : edges[rows[r]])
                matrix.at(r, static_cast<std::size_t>(col_of[ri])) = s;

        Assignment mapping;
        if (cfg.mapping == MappingKind::greedy) {
            std::vector<std::size_t> x_order(rows.size());
            std::iota(x_order.begin(), x_order.end(), 0);  // insertion order
            mapping = greedy(matrix, x_order);
        } else {
            mapping = hungarian(matrix);
        }

        std::vector<char> rec_matched(recs.size(), 0);
        for (const auto& [r, c] : mapping.pairs) {
            const std::size_t ri = cols[c];
            result.clusters[rows[r]].members.push_back({pos, recs[ri]});
            rec_matched[ri] = 1;
        }
        for (std::size_t ri = 0; ri < recs.size(); ++ri)
            if (!rec_matched[ri])
                result.clusters.push_back({{{pos, recs[ri]}}});
    }
    return result;
}

// Late mapping phase 1: merge every edge >= s_t without mapping. All edges of
// an iteration are computed against the pre-merge clusters, then every record
// joins each cluster it has an edge to, so clusters may overlap and hold
// multiple records of one party. Sets `overflowed` and returns an empty graph
// when the memory guard (total membership over all clusters) trips.
inline std::vector<ClusterVertex> late_merge_phase(
    const std::vector<std::vector<std::size_t>>& block_records,
    const LinkageConfig& cfg, SimilarityProvider& sim, std::uint64_t& comparisons,
    bool& overflowed) {
    const std::size_t parties = block_records.size();
    const std::size_t cap = static_cast<std::size_t>(
        cfg.overlap_cap_factor * static_cast<double>(
            std::max<std::size_t>(1, detail::block_size(block_records))));

    std::vector<ClusterVertex> clusters;
    for (std::size_t pos = 0; pos < parties; ++pos) {
        const auto& recs = block_records[pos];
        if (pos == 0) {
            for (std::size_t idx : recs) clusters.push_back({{{pos, idx}}});
            continue;
        }
        std::vector<std::vector<std::size_t>> joins(clusters.size());
        std::vector<char> rec_matched(recs.size(), 0);
        for (std::size_t vi = 0; vi < clusters.size(); ++vi) {
            for (std::size_t ri = 0; ri < recs.size(); ++ri) {
                const double s =
                    sim.cluster_record(clusters[vi].members, {pos, recs[ri]}, pos);
                ++comparisons;
                if (s >= cfg.sim_threshold) {
                    joins[vi].push_back(ri);
                    rec_matched[ri] = 1;
                }
            }
        }
        std::size_t membership = 0;
        for (std::size_t vi = 0; vi < clusters.size(); ++vi) {
            for (std::size_t ri : joins[vi])
                clusters[vi].members.push_back({pos, recs[ri]});
            membership += clusters[vi].members.size();
        }
        for (std::size_t ri = 0; ri < recs.size(); ++ri) {
            if (!rec_matched[ri]) {
                clusters.push_back({{{pos, recs[ri]}}});
                ++membership;
            }
        }
        if (membership > cap) {
            overflowed = true;
            return {};
        }
    }
    return clusters;
}

// Late mapping phase 2: for each party in order, split its records into
// singletons, remap them one-to-one onto the clusters they came from, and
// merge. Leaves the graph free of overlaps and multi-record parties.
inline std::vector<ClusterVertex> late_mapping_phase(
    std::vector<ClusterVertex> clusters, std::size_t parties,
    const LinkageConfig& cfg, SimilarityProvider& sim, std::uint64_t& comparisons) {
    for (std::size_t pos = 0; pos < parties; ++pos) {
        std::map<std::size_t, std::vector<std::size_t>> former;  // rec idx -> cluster ids
        std::vector<ClusterVertex> remaining;
        for (auto& c : clusters) {
            std::vector<MemberRef> keep;
            std::vector<std::size_t> removed;
            for (const MemberRef& m : c.members) {
                if (m.first == pos) removed.push_back(m.second);
                else keep.push_back(m);
            }
            // Clusters with identical remaining members are kept as separate
            // mapping targets: two near-duplicate entities then each claim one
            // copy, instead of the mapping discarding one of them outright.
            std::size_t cluster_id = static_cast<std::size_t>(-1);
            if (!keep.empty()) {
                cluster_id = remaining.size();
                remaining.push_back({std::move(keep)});
            }
            for (std::size_t rec : removed) {
                if (cluster_id != static_cast<std::size_t>(-1))
                    former[rec].push_back(cluster_id);
                else
                    former.try_emplace(rec);  // singleton with no candidates
            }
        }

        // Unique split records, in stable (record index) order.
        std::vector<std::size_t> split_recs;
        for (const auto& [rec, _] : former) split_recs.push_back(rec);

        // Edges only to a record's former clusters, weighted by the
        // recomputed average similarity. The merge itself was already
        // threshold-checked in phase 1, so the weight is not re-thresholded
        // against the fully merged cluster here.
        SimilarityMatrix matrix(split_recs.size(), remaining.size());
        for (std::size_t r = 0; r < split_recs.size(); ++r) {
            const auto& candidates = former[split_recs[r]];
            for (std::size_t ci : candidates) {
                const double s = sim.cluster_record(remaining[ci].members,
                                                    {pos, split_recs[r]}, parties + pos);
                ++comparisons;
                matrix.at(r, ci) = s;
            }
        }

        const Assignment mapping = hungarian(matrix);
        std::vector<char> rec_matched(split_recs.size(), 0);
        for (const auto& [r, c] : mapping.pairs) {
            remaining[c].members.push_back({pos, split_recs[r]});
            rec_matched[r] = 1;
        }
        for (std::size_t r = 0; r < split_recs.size(); ++r)
            if (!rec_matched[r]) remaining.push_back({{{pos, split_recs[r]}}});
        clusters = std::move(remaining);
    }
    return clusters;
}

inline BlockLinkResult link_late(const std::vector<std::vector<std::size_t>>& block_records,
                                 const LinkageConfig& cfg, SimilarityProvider& sim) {
    BlockLinkResult result;
    auto clusters = late_merge_phase(block_records, cfg, sim, result.comparisons,
                                     result.overflowed);
    if (result.overflowed) return result;
    result.clusters = late_mapping_phase(std::move(clusters), block_records.size(),
                                         cfg, sim, result.comparisons);
    return result;
}

inline BlockLinkResult link_block(const std::vector<std::vector<std::size_t>>& block_records,
                                  const LinkageConfig& cfg, SimilarityProvider& sim) {
    if (cfg.mapping == MappingKind::late) return link_late(block_records, cfg, sim);
    return link_early(block_records, cfg, sim);
}

// ---------------------------------------------------------------------------
// Whole-run driver

struct MatchCluster {
    std::vector<std::pair<int, std::string>> members;  // (party_index, record_id)
};

struct MatchSet {
    std::vector<MatchCluster> clusters;
};

struct LinkageResult {
    MatchSet matches;
    std::uint64_t comparisons = 0;
    std::size_t blocks_processed = 0;
    std::size_t blocks_skipped = 0;    // single-party blocks
    std::size_t blocks_overflowed = 0;
    double blocking_pairs_completeness = 0.0;
    double runtime_seconds = 0.0;
};

namespace detail {

struct OrderedView {
    std::vector<std::size_t> order;                      // position -> original party pos
    std::vector<const EncodedDatabase*> dbs;             // in processing order
};

inline OrderedView order_view(const std::vector<EncodedDatabase>& dbs,
                              const LinkageConfig& cfg) {
    std::vector<std::size_t> sizes;
    sizes.reserve(dbs.size());
    for (const auto& db : dbs) sizes.push_back(db.records.size());
    OrderedView view;
    view.order = order_databases(sizes, cfg);
    for (std::size_t pos : view.order) view.dbs.push_back(&dbs[pos]);
    return view;
}

}  // namespace detail

// Size >= s_m filter over all per-block final vertices, with deterministic
// cluster and member ordering.
inline MatchSet collect_matches(const std::vector<BlockLinkResult>& graphs,
                                const LinkageConfig& cfg,
                                const std::vector<const EncodedDatabase*>& ordered_dbs) {
    MatchSet out;
    for (const auto& graph : graphs) {
        for (const auto& vertex : graph.clusters) {
            if (vertex.members.size() < cfg.min_subset_size) continue;
            MatchCluster cluster;
            for (const MemberRef& m : vertex.members)
                cluster.members.emplace_back(ordered_dbs[m.first]->party_index,
                                             ordered_dbs[m.first]->records[m.second].record_id);
            std::sort(cluster.members.begin(), cluster.members.end());
            out.clusters.push_back(std::move(cluster));
        }
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const MatchCluster& a, const MatchCluster& b) {
                  return a.members < b.members;
              });
    return out;
}

// Runs blocking plus per-block incremental clustering over a worker pool.
// `make_provider` is invoked once and shared; providers must be reentrant.
inline LinkageResult run_linkage_with(const std::vector<EncodedDatabase>& dbs,
                                      const LinkageConfig& cfg,
                                      const RecordAccess& access,
                                      SimilarityProvider& provider) {
    cfg.validate(dbs.size());
    const auto start = std::chrono::steady_clock::now();
    (void)access;

    const detail::OrderedView view = detail::order_view(dbs, cfg);

    std::vector<EncodedDatabase const*> ordered = view.dbs;
    std::vector<EncodedDatabase> ordered_copy;  // build_blocks wants values
    ordered_copy.reserve(ordered.size());
    for (const auto* db : ordered) ordered_copy.push_back(*db);
    const BlockIndex index = build_blocks(ordered_copy);

    std::vector<const std::vector<std::vector<std::size_t>>*> work;
    std::size_t skipped = 0;
    for (const auto& [key, lists] : index.blocks) {
        if (BlockIndex::parties_present(lists) < 2) {
            ++skipped;
            continue;
        }
        work.push_back(&lists);
    }

    std::vector<BlockLinkResult> results(work.size());
    const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= work.size()) break;
            results[i] = link_block(*work[i], cfg, provider);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    LinkageResult out;
    out.blocks_processed = work.size();
    out.blocks_skipped = skipped;
    for (const auto& r : results) {
        out.comparisons += r.comparisons;
        if (r.overflowed) ++out.blocks_overflowed;
    }
    out.matches = collect_matches(results, cfg, view.dbs);
    out.blocking_pairs_completeness = blocking_recall(ordered_copy);
    out.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

// Direct-BF mode: the LU compares the stored Bloom filters.
inline LinkageResult run_linkage(const std::vector<EncodedDatabase>& dbs,
                                 const LinkageConfig& cfg) {
    const detail::OrderedView view = detail::order_view(dbs, cfg);
    StaticRecordAccess access(view.dbs);
    DirectProvider provider(access, cfg.sim_mode);
    return run_linkage_with(dbs, cfg, access, provider);
}

// CBF-protocol mode: similarities are obtained through secure summation over
// the plaintext-holding parties; the LU sees only CBFs. With
// `fresh_salt_per_iteration` the parties re-encode at every iteration.
inline LinkageResult run_linkage_protocol(const std::vector<PlainDatabase>& plain_dbs,
                                          const EncodingParams& params,
                                          const std::vector<std::size_t>& key_attrs,
                                          const LinkageConfig& cfg,
                                          bool fresh_salt_per_iteration = false,
                                          ProtocolStats* stats = nullptr,
                                          std::function<void(const SummationSession&)>
                                              transcript_sink = {}) {
    std::vector<EncodedDatabase> encoded;
    encoded.reserve(plain_dbs.size());
    for (const auto& db : plain_dbs)
        encoded.push_back(encode_database(db, params, key_attrs));

    const detail::OrderedView view = detail::order_view(encoded, cfg);
    std::vector<const PlainDatabase*> plain_ordered;
    for (std::size_t pos : view.order) plain_ordered.push_back(&plain_dbs[pos]);

    ReencodingRecordAccess access(plain_ordered, params, fresh_salt_per_iteration);
    SummationHub hub(SeedStream(cfg.seed).derive("secure-summation"));
    ProtocolProvider provider(access, hub, stats, std::move(transcript_sink));
    return run_linkage_with(encoded, cfg, access, provider);
}

// MatchSet CSV: cluster_id, party_index, record_id, cluster_size.
inline void write_matches_csv(const MatchSet& matches, std::ostream& out,
                              const std::vector<std::string>& config_header = {}) {
    for (const auto& line : config_header) out << "# " << line << "\n";
    out << "cluster_id,party_index,record_id,cluster_size\n";
    for (std::size_t id = 0; id < matches.clusters.size(); ++id)
        for (const auto& [party, rec] : matches.clusters[id].members)
            out << id << ',' << party << ',' << csv_escape(rec) << ','
                << matches.clusters[id].members.size() << "\n";
}

inline MatchSet read_matches_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    std::map<std::size_t, MatchCluster> by_id;
    for (const auto& row : table.rows) {
        if (row.size() < 4) throw std::runtime_error("short row in " + path);
        by_id[std::stoull(row[0])].members.emplace_back(std::stoi(row[1]), row[2]);
    }
    MatchSet out;
    for (auto& [id, cluster] : by_id) out.clusters.push_back(std::move(cluster));
    return out;
}

}  // namespace mpprl
