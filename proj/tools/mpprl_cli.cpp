// Command-line driver: synthetic data generation, encoding, linkage in both
// direct and summation-protocol modes, evaluation, linkage attack and
// benchmark sweeps. Exit codes: 0 ok, 2 config error, 3 data error.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpprl/mpprl.hpp"

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// shared option bundles

struct EncodeOpts {
    std::size_t bf_length = 1000;
    std::size_t num_hashes = 30;
    std::size_t gram_length = 2;
    std::uint64_t seed1 = 0x243f6a8885a308d3ULL;
    std::uint64_t seed2 = 0x13198a2e03707344ULL;
    std::string salt;
    std::string block_attrs = "first_name,last_name";

    mpprl::EncodingParams params() const {
        mpprl::EncodingParams p;
        p.bf_length = bf_length;
        p.num_hashes = num_hashes;
        p.gram_length = gram_length;
        p.seed1 = seed1;
        p.seed2 = seed2;
        p.iteration_salt = salt;
        p.validate();
        return p;
    }

    std::vector<std::size_t> attrs() const {
        std::vector<std::size_t> out;
        std::stringstream ss(block_attrs);
        std::string name;
        while (std::getline(ss, name, ','))
            if (!name.empty()) out.push_back(mpprl::qid_index(name));
        if (out.empty()) throw ConfigError("no blocking attributes given");
        return out;
    }

    void echo(std::vector<std::string>& header) const {
        header.push_back("bf_length=" + std::to_string(bf_length));
        header.push_back("num_hashes=" + std::to_string(num_hashes));
        header.push_back("gram_length=" + std::to_string(gram_length));
        header.push_back("seed1=" + std::to_string(seed1));
        header.push_back("seed2=" + std::to_string(seed2));
        header.push_back("salt=" + salt);
        header.push_back("block_attrs=" + block_attrs);
    }
};

void add_encode_opts(CLI::App* app, EncodeOpts& o) {
    app->add_option("--bf-length", o.bf_length, "Bloom filter length l");
    app->add_option("--num-hashes", o.num_hashes, "hash functions k");
    app->add_option("--gram-length", o.gram_length, "q-gram length");
    app->add_option("--seed1", o.seed1, "first hash seed");
    app->add_option("--seed2", o.seed2, "second hash seed");
    app->add_option("--salt", o.salt, "encoding salt");
    app->add_option("--block-attrs", o.block_attrs,
                    "comma-separated blocking attributes");
}

struct LinkOpts {
    double threshold = 0.8;
    std::size_t min_subset = 2;
    std::string ordering = "size";
    std::string mapping = "early";
    std::string sim_mode = "average";
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    double overlap_cap = 10.0;

    mpprl::LinkageConfig config() const {
        mpprl::LinkageConfig cfg;
        cfg.sim_threshold = threshold;
        cfg.min_subset_size = min_subset;
        cfg.seed = seed;
        cfg.workers = workers;
        cfg.overlap_cap_factor = overlap_cap;
        if (ordering == "size") cfg.ordering = mpprl::Ordering::size_descending;
        else if (ordering == "random") cfg.ordering = mpprl::Ordering::random;
        else throw ConfigError("unknown ordering: " + ordering);
        if (mapping == "early") cfg.mapping = mpprl::MappingKind::early;
        else if (mapping == "late") cfg.mapping = mpprl::MappingKind::late;
        else if (mapping == "greedy") cfg.mapping = mpprl::MappingKind::greedy;
        else throw ConfigError("unknown mapping: " + mapping);
        if (sim_mode == "average") cfg.sim_mode = mpprl::SimilarityMode::average;
        else if (sim_mode == "set-dice") cfg.sim_mode = mpprl::SimilarityMode::set_dice;
        else throw ConfigError("unknown similarity mode: " + sim_mode);
        return cfg;
    }

    void echo(std::vector<std::string>& header) const {
        header.push_back("threshold=" + std::to_string(threshold));
        header.push_back("min_subset=" + std::to_string(min_subset));
        header.push_back("ordering=" + ordering);
        header.push_back("mapping=" + mapping);
        header.push_back("sim_mode=" + sim_mode);
        header.push_back("seed=" + std::to_string(seed));
        header.push_back("workers=" + std::to_string(workers));
    }
};

void add_link_opts(CLI::App* app, LinkOpts& o) {
    app->add_option("--threshold", o.threshold, "similarity threshold s_t");
    app->add_option("--min-subset", o.min_subset, "minimum cluster size s_m");
    app->add_option("--ordering", o.ordering, "database ordering: size|random");
    app->add_option("--mapping", o.mapping, "mapping kind: early|late|greedy");
    app->add_option("--sim-mode", o.sim_mode, "cluster similarity: average|set-dice");
    app->add_option("--seed", o.seed, "linkage seed");
    app->add_option("--workers", o.workers, "worker threads for the block loop");
    app->add_option("--overlap-cap", o.overlap_cap,
                    "late-mapping cluster cap as a multiple of the block size");
}

// ---------------------------------------------------------------------------
// helpers

std::vector<mpprl::PlainDatabase> load_plain(const std::vector<std::string>& paths) {
    if (paths.empty()) throw ConfigError("no input files given");
    std::vector<mpprl::PlainDatabase> dbs;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        try {
            dbs.push_back(mpprl::read_plain_csv(paths[i], static_cast<int>(i)));
        } catch (const std::exception& e) {
            throw DataError(std::string(e.what()));
        }
    }
    return dbs;
}

std::vector<mpprl::EncodedDatabase> load_encoded(const std::vector<std::string>& paths) {
    if (paths.empty()) throw ConfigError("no input files given");
    std::vector<mpprl::EncodedDatabase> dbs;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        try {
            dbs.push_back(mpprl::read_encoded_csv(paths[i], static_cast<int>(i)));
        } catch (const std::exception& e) {
            throw DataError(std::string(e.what()));
        }
    }
    return dbs;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::stringstream conv(item);
        T value;
        if (!(conv >> value)) throw ConfigError("bad " + what + " list entry: " + item);
        out.push_back(value);
    }
    if (out.empty()) throw ConfigError("empty " + what + " list");
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

long peak_memory_kb() {
    struct rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return usage.ru_maxrss;
}

// ---------------------------------------------------------------------------
// subcommands

struct GenerateArgs {
    std::size_t parties = 3;
    std::size_t records = 1000;
    double full_overlap = 0.25;
    double subset_overlap = 0.25;
    std::string subset_dist;  // "2:0.1,3:0.15"
    double corruption = 0.0;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string prefix = "party";
};

mpprl::OverlapSpec to_spec(const GenerateArgs& a) {
    mpprl::OverlapSpec spec;
    spec.num_parties = a.parties;
    spec.records_per_party = a.records;
    spec.full_overlap_fraction = a.full_overlap;
    spec.subset_overlap_fraction = a.subset_overlap;
    spec.corruption_rate = a.corruption;
    spec.seed = a.seed;
    if (!a.subset_dist.empty()) {
        std::stringstream ss(a.subset_dist);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw ConfigError("bad subset distribution entry: " + item);
            spec.subset_size_distribution[std::stoul(item.substr(0, colon))] =
                std::stod(item.substr(colon + 1));
        }
    }
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

int cmd_generate(const GenerateArgs& a) {
    const mpprl::OverlapSpec spec = to_spec(a);
    const mpprl::GeneratedData data = mpprl::generate(spec);

    std::vector<std::string> header = {
        "command=generate",
        "parties=" + std::to_string(a.parties),
        "records=" + std::to_string(a.records),
        "full_overlap=" + std::to_string(a.full_overlap),
        "subset_overlap=" + std::to_string(a.subset_overlap),
        "subset_dist=" + a.subset_dist,
        "corruption=" + std::to_string(a.corruption),
        "seed=" + std::to_string(a.seed),
    };
    for (std::size_t p = 0; p < data.parties.size(); ++p) {
        const std::string path =
            a.out_dir + "/" + a.prefix + std::to_string(p) + ".csv";
        try {
            mpprl::write_plain_csv(data.parties[p], path, header);
        } catch (const std::exception& e) {
            throw DataError(e.what());
        }
    }
    std::cout << "generated,parties=" << data.parties.size()
              << ",records_per_party=" << a.records
              << ",corrupted=" << data.corrupted_records << "\n";
    return 0;
}

struct EncodeArgs {
    std::vector<std::string> inputs;
    std::string out_dir = ".";
    std::string prefix = "encoded";
    EncodeOpts enc;
};

int cmd_encode(const EncodeArgs& a) {
    const mpprl::EncodingParams params = a.enc.params();
    const auto attrs = a.enc.attrs();
    const auto plain = load_plain(a.inputs);

    std::vector<std::string> header = {"command=encode"};
    a.enc.echo(header);
    for (std::size_t p = 0; p < plain.size(); ++p) {
        const mpprl::EncodedDatabase db = mpprl::encode_database(plain[p], params, attrs);
        const std::string path =
            a.out_dir + "/" + a.prefix + std::to_string(p) + ".csv";
        try {
            mpprl::write_encoded_csv(db, params, path, header);
        } catch (const std::exception& e) {
            throw DataError(e.what());
        }
    }
    std::cout << "encoded,parties=" << plain.size() << "\n";
    return 0;
}

struct LinkArgs {
    std::vector<std::string> inputs;
    std::string mode = "bf-direct";
    std::string out = "matches.csv";
    std::string stats_out;
    std::string transcript_out;
    bool fresh_salt = false;
    EncodeOpts enc;
    LinkOpts link;
};

int cmd_link(const LinkArgs& a) {
    mpprl::LinkageConfig cfg = a.link.config();

    std::vector<std::string> header = {"command=link", "mode=" + a.mode};
    a.link.echo(header);

    mpprl::LinkageResult result;
    mpprl::ProtocolStats stats;
    if (a.mode == "bf-direct") {
        const auto dbs = load_encoded(a.inputs);
        try {
            cfg.validate(dbs.size());
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        result = mpprl::run_linkage(dbs, cfg);
    } else if (a.mode == "cbf-protocol") {
        const auto plain = load_plain(a.inputs);
        try {
            cfg.validate(plain.size());
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        cfg.sim_mode = mpprl::SimilarityMode::set_dice;  // what the CBF exposes
        a.enc.echo(header);
        std::ofstream transcript;
        std::function<void(const mpprl::SummationSession&)> sink;
        if (!a.transcript_out.empty()) {
            transcript = open_out(a.transcript_out);
            transcript << "session_id,step,sender,receiver,digest\n";
            sink = [&transcript](const mpprl::SummationSession& s) {
                mpprl::append_transcript_csv(s, transcript);
            };
        }
        result = mpprl::run_linkage_protocol(plain, a.enc.params(), a.enc.attrs(), cfg,
                                             a.fresh_salt, &stats, sink);
    } else {
        throw ConfigError("unknown mode: " + a.mode);
    }

    {
        auto out = open_out(a.out);
        mpprl::write_matches_csv(result.matches, out, header);
    }
    if (!a.stats_out.empty()) {
        auto out = open_out(a.stats_out);
        for (const auto& line : header) out << "# " << line << "\n";
        out << "metric,value\n";
        out << "clusters," << result.matches.clusters.size() << "\n";
        out << "comparisons," << result.comparisons << "\n";
        out << "blocks_processed," << result.blocks_processed << "\n";
        out << "blocks_skipped," << result.blocks_skipped << "\n";
        out << "blocks_overflowed," << result.blocks_overflowed << "\n";
        out << "pairs_completeness," << result.blocking_pairs_completeness << "\n";
        out << "runtime_seconds," << result.runtime_seconds << "\n";
        for (const auto& [it, sessions] : stats.sessions_per_iteration)
            out << "sessions_iteration_" << it << "," << sessions << "\n";
        for (const auto& [it, messages] : stats.messages_per_iteration)
            out << "messages_iteration_" << it << "," << messages << "\n";
    }
    std::cout << "linked,clusters=" << result.matches.clusters.size()
              << ",comparisons=" << result.comparisons << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string matches = "matches.csv";
    std::vector<std::string> truth;
    std::string out;
};

int cmd_evaluate(const EvaluateArgs& a) {
    mpprl::MatchSet matches;
    try {
        matches = mpprl::read_matches_csv(a.matches);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
    const auto plain = load_plain(a.truth);
    const mpprl::GroundTruth truth = mpprl::GroundTruth::from_plain(plain);

    mpprl::QualityReport q;
    try {
        q = mpprl::score_linkage(matches, truth);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }

    std::ostringstream row;
    row << "true_matches,false_matches,false_non_matches,precision,recall,f_measure\n"
        << q.true_matches << ',' << q.false_matches << ',' << q.false_non_matches
        << ',' << q.precision << ',' << q.recall << ',' << q.f_measure << "\n";
    if (!a.out.empty()) {
        auto out = open_out(a.out);
        out << "# command=evaluate\n# matches=" << a.matches << "\n" << row.str();
    }
    std::cout << row.str();
    return 0;
}

struct AttackArgs {
    std::vector<std::string> encoded;
    std::vector<std::string> global;
    std::string matches;
    std::string mode = "bf";
    std::string out;
    EncodeOpts enc;
};

int cmd_attack(const AttackArgs& a) {
    const auto dbs = load_encoded(a.encoded);
    const auto global = load_plain(a.global);
    std::vector<std::vector<std::string>> global_qids;
    for (const auto& db : global)
        for (const auto& rec : db.records) global_qids.push_back(rec.qid_values);

    mpprl::AttackReport report;
    try {
        if (a.mode == "bf") {
            report = mpprl::attack_bf(dbs, global_qids, a.enc.params());
        } else if (a.mode == "cbf") {
            if (a.matches.empty())
                throw ConfigError("cbf attack mode needs --matches");
            const mpprl::MatchSet matches = mpprl::read_matches_csv(a.matches);
            report = mpprl::attack_cbf(dbs, matches, global_qids, a.enc.params());
        } else {
            throw ConfigError("unknown attack mode: " + a.mode);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }

    std::ostringstream row;
    row << "mode,targets,dr_mean,dr_marketer\n"
        << a.mode << ',' << report.targets << ',' << report.dr_mean << ','
        << report.dr_marketer << "\n";
    if (!a.out.empty()) {
        auto out = open_out(a.out);
        out << "# command=attack\n# mode=" << a.mode << "\n" << row.str();
    }
    std::cout << row.str();
    return 0;
}

struct BenchArgs {
    std::string parties_list = "3,5";
    std::string records_list = "500";
    std::string thresholds = "0.8";
    std::string min_subsets = "2";
    std::string mappings = "early,late,greedy";
    double corruption = 0.0;
    std::size_t repeats = 3;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::string out = "bench.csv";
    EncodeOpts enc;
};

int cmd_bench(const BenchArgs& a) {
    if (a.repeats < 3) throw ConfigError("bench needs at least 3 repeats");
    const auto parties = parse_list<std::size_t>(a.parties_list, "parties");
    const auto records = parse_list<std::size_t>(a.records_list, "records");
    const auto thresholds = parse_list<double>(a.thresholds, "threshold");
    const auto subsets = parse_list<std::size_t>(a.min_subsets, "min-subset");
    const auto mappings = parse_list<std::string>(a.mappings, "mapping");

    const mpprl::EncodingParams params = a.enc.params();
    const auto attrs = a.enc.attrs();

    auto out = open_out(a.out);
    out << "# command=bench\n# corruption=" << a.corruption << "\n# repeats="
        << a.repeats << "\n# seed=" << a.seed << "\n";
    out << "parties,records,threshold,min_subset,mapping,runtime_seconds,"
           "peak_memory_kb,comparisons,f_measure\n";

    for (std::size_t p : parties) {
        for (std::size_t n : records) {
            // one dataset per (p, n, repeat), shared across the other axes
            std::vector<std::vector<mpprl::EncodedDatabase>> encoded(a.repeats);
            std::vector<mpprl::GroundTruth> truths(a.repeats);
            for (std::size_t rep = 0; rep < a.repeats; ++rep) {
                mpprl::OverlapSpec spec;
                spec.num_parties = p;
                spec.records_per_party = n;
                spec.corruption_rate = a.corruption;
                spec.seed = a.seed + rep;
                const mpprl::GeneratedData data = mpprl::generate(spec);
                for (const auto& db : data.parties)
                    encoded[rep].push_back(mpprl::encode_database(db, params, attrs));
                truths[rep] = mpprl::GroundTruth::from_plain(data.parties);
            }
            for (double s_t : thresholds) {
                for (std::size_t s_m : subsets) {
                    if (s_m < 2 || s_m > p) continue;
                    for (const std::string& mapping : mappings) {
                        LinkOpts link;
                        link.threshold = s_t;
                        link.min_subset = s_m;
                        link.mapping = mapping;
                        link.seed = a.seed;
                        link.workers = a.workers;
                        const mpprl::LinkageConfig cfg = link.config();

                        std::vector<double> runtime, comparisons, f_measure;
                        for (std::size_t rep = 0; rep < a.repeats; ++rep) {
                            const auto start = std::chrono::steady_clock::now();
                            const mpprl::LinkageResult result =
                                mpprl::run_linkage(encoded[rep], cfg);
                            runtime.push_back(std::chrono::duration<double>(
                                                  std::chrono::steady_clock::now() - start)
                                                  .count());
                            comparisons.push_back(
                                static_cast<double>(result.comparisons));
                            f_measure.push_back(
                                mpprl::score_linkage(result.matches, truths[rep])
                                    .f_measure);
                        }
                        out << p << ',' << n << ',' << s_t << ',' << s_m << ','
                            << mapping << ',' << median(runtime) << ','
                            << peak_memory_kb() << ',' << median(comparisons) << ','
                            << median(f_measure) << "\n";
                        out.flush();
                    }
                }
            }
        }
    }
    std::cout << "bench,out=" << a.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-party private record linkage toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "generate synthetic party data");
    generate->set_config("--config");
    generate->add_option("--parties", gen.parties, "number of parties");
    generate->add_option("--records", gen.records, "records per party");
    generate->add_option("--full-overlap", gen.full_overlap,
                         "fraction of records in all-party entities");
    generate->add_option("--subset-overlap", gen.subset_overlap,
                         "fraction of records in proper-subset entities");
    generate->add_option("--subset-dist", gen.subset_dist,
                         "size:fraction pairs, e.g. 2:0.1,3:0.15");
    generate->add_option("--corruption", gen.corruption, "corruption rate");
    generate->add_option("--seed", gen.seed, "generation seed");
    generate->add_option("--out-dir", gen.out_dir, "output directory");
    generate->add_option("--prefix", gen.prefix, "output file prefix");

    EncodeArgs enc;
    CLI::App* encode = app.add_subcommand("encode", "encode plaintext party files");
    encode->set_config("--config");
    encode->add_option("--in", enc.inputs, "plaintext party files, in party order");
    encode->add_option("--out-dir", enc.out_dir, "output directory");
    encode->add_option("--prefix", enc.prefix, "output file prefix");
    add_encode_opts(encode, enc.enc);

    LinkArgs link;
    CLI::App* link_cmd = app.add_subcommand("link", "run the multi-party linkage");
    link_cmd->set_config("--config");
    link_cmd->add_option("--in", link.inputs,
                         "encoded files (bf-direct) or plaintext files (cbf-protocol)");
    link_cmd->add_option("--mode", link.mode, "bf-direct|cbf-protocol");
    link_cmd->add_option("--out", link.out, "match clusters output file");
    link_cmd->add_option("--stats-out", link.stats_out, "run statistics output file");
    link_cmd->add_option("--transcript-out", link.transcript_out,
                         "summation transcript output (cbf-protocol)");
    link_cmd->add_flag("--fresh-salt", link.fresh_salt,
                       "re-encode with a fresh salt every iteration (cbf-protocol)");
    add_encode_opts(link_cmd, link.enc);
    add_link_opts(link_cmd, link.link);

    EvaluateArgs eval;
    CLI::App* evaluate = app.add_subcommand("evaluate", "score matches against truth");
    evaluate->set_config("--config");
    evaluate->add_option("--matches", eval.matches, "match clusters file");
    evaluate->add_option("--truth", eval.truth, "plaintext party files with entity ids");
    evaluate->add_option("--out", eval.out, "report output file");

    AttackArgs atk;
    CLI::App* attack = app.add_subcommand("attack", "run the linkage attack");
    attack->set_config("--config");
    attack->add_option("--encoded", atk.encoded, "encoded party files (the targets)");
    attack->add_option("--global", atk.global, "global plaintext files (the adversary)");
    attack->add_option("--matches", atk.matches, "match clusters file (cbf mode)");
    attack->add_option("--mode", atk.mode, "bf|cbf");
    attack->add_option("--out", atk.out, "report output file");
    add_encode_opts(attack, atk.enc);

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "benchmark sweep");
    bench_cmd->set_config("--config");
    bench_cmd->add_option("--parties-list", bench.parties_list, "party counts");
    bench_cmd->add_option("--records-list", bench.records_list, "records per party");
    bench_cmd->add_option("--thresholds", bench.thresholds, "similarity thresholds");
    bench_cmd->add_option("--min-subsets", bench.min_subsets, "minimum cluster sizes");
    bench_cmd->add_option("--mappings", bench.mappings, "mapping kinds");
    bench_cmd->add_option("--corruption", bench.corruption, "corruption rate");
    bench_cmd->add_option("--repeats", bench.repeats, "repeats per cell (median)");
    bench_cmd->add_option("--seed", bench.seed, "root seed");
    bench_cmd->add_option("--workers", bench.workers, "worker threads");
    bench_cmd->add_option("--out", bench.out, "sweep output file");
    add_encode_opts(bench_cmd, bench.enc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (encode->parsed()) return cmd_encode(enc);
        if (link_cmd->parsed()) return cmd_link(link);
        if (evaluate->parsed()) return cmd_evaluate(eval);
        if (attack->parsed()) return cmd_attack(atk);
        if (bench_cmd->parsed()) return cmd_bench(bench);
    } catch (const ConfigError& e) {
        std::cerr << "error,config," << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error,config," << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error,data," << e.what() << "\n";
        return 3;
    }
    return 2;
}
