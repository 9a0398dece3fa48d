#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mpprl/hashing.hpp"
#include "mpprl/records.hpp"

namespace mpprl {

// Controlled overlap structure of the generated multi-party datasets.
// Fractions are per-party record fractions: a subset-size-s fraction of 0.05
// means 5% of every party's records belong to entities present in exactly s
// parties.
struct OverlapSpec {
    std::size_t num_parties = 3;
    std::size_t records_per_party = 1000;
    double full_overlap_fraction = 0.25;
    double subset_overlap_fraction = 0.25;
    // size (2..p-1) -> fraction of n; empty means a uniform split of
    // subset_overlap_fraction over 2..p-1.
    std::map<std::size_t, double> subset_size_distribution;
    double corruption_rate = 0.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (num_parties < 2) throw std::invalid_argument("need at least 2 parties");
        if (records_per_party == 0) throw std::invalid_argument("empty parties");
        if (full_overlap_fraction < 0 || subset_overlap_fraction < 0 ||
            full_overlap_fraction + subset_overlap_fraction > 1.0 + 1e-9)
            throw std::invalid_argument("overlap fractions must be in [0,1] and sum <= 1");
        double dist_sum = 0.0;
        for (const auto& [size, frac] : subset_size_distribution) {
            if (size < 2 || size > num_parties)
                throw std::invalid_argument("subset sizes must be in 2..p");
            if (frac < 0) throw std::invalid_argument("negative subset fraction");
            dist_sum += frac;
        }
        if (!subset_size_distribution.empty() &&
            std::abs(dist_sum - subset_overlap_fraction) > 1e-6)
            throw std::invalid_argument(
                "subset_size_distribution must sum to subset_overlap_fraction");
        if (corruption_rate < 0 || corruption_rate > 1)
            throw std::invalid_argument("corruption_rate must be in [0,1]");
    }
};

// ---------------------------------------------------------------------------
// Bundled synthetic name pool. Names are grouped into spelling-variant
// families so that distinct entities can be phonetically close, which is what
// makes one-to-one mapping non-trivial.

namespace namepool {

inline const std::vector<std::vector<std::string>>& first_name_families() {
    static const std::vector<std::vector<std::string>> families = {
        {"sarah", "sara", "zarah"},       {"catherine", "katherine", "kathryn"},
        {"john", "jon", "jhon"},          {"stephen", "steven", "stefan"},
        {"geoffrey", "jeffrey", "jeffry"},{"allan", "allen", "alan"},
        {"marc", "mark", "marck"},        {"erik", "eric", "erick"},
        {"brian", "bryan", "brien"},      {"kristen", "kristin", "kristan"},
        {"megan", "meghan", "meagan"},    {"rachel", "rachael"},
        {"lindsay", "lindsey"},           {"caitlin", "kaitlyn", "katelyn"},
        {"isabel", "isabelle", "isobel"}, {"hannah", "hanna", "hana"},
        {"rebecca", "rebekah"},           {"elliot", "elliott", "eliot"},
        {"philip", "phillip"},            {"nicolas", "nicholas", "nikolas"},
        {"frederic", "frederick", "fredrick"}, {"graham", "graeme"},
        {"shaun", "shawn", "sean"},       {"teresa", "theresa", "therese"},
        {"sofia", "sophia", "sophie"},    {"lily", "lilly", "lili"},
        {"abigail", "abigale"},           {"madeline", "madeleine", "madelyn"},
        {"gabriel", "gabriell"},          {"vivian", "vivien", "vivianne"},
        {"louis", "lewis", "luis"},       {"diana", "dianna", "dayana"},
        {"carol", "carole", "karol"},     {"jaime", "jamie", "jayme"},
        {"cassandra", "kassandra"},       {"marcia", "marsha"},
        {"deborah", "debora", "debra"},   {"cynthia", "cinthia"},
        {"gerald", "jerald", "gerold"},   {"lawrence", "laurence", "lorence"},
        {"maurice", "morris"},            {"bernard", "bernhard"},
        {"raymond", "ramond"},            {"clara", "klara", "claire"},
        {"ellen", "ellyn", "elin"},       {"irene", "irena"},
        {"juliet", "juliette", "julliet"},{"miriam", "myriam"},
        {"naomi", "noemi"},               {"olivia", "alivia"},
    };
    return families;
}

inline const std::vector<std::vector<std::string>>& last_name_families() {
    static const std::vector<std::vector<std::string>> families = {
        {"smith", "smyth", "smythe"},     {"johnson", "jonson", "johnsen"},
        {"williams", "wiliams"},          {"brown", "browne", "braun"},
        {"taylor", "tailor", "tayler"},   {"anderson", "andersen"},
        {"thompson", "thomson", "tomson"},{"white", "whyte", "wight"},
        {"harris", "harriss", "haris"},   {"martin", "marten", "martyn"},
        {"clark", "clarke", "clerk"},     {"lewis", "luis"},
        {"walker", "wallker"},            {"hall", "haul"},
        {"allen", "allan", "alen"},       {"young", "younge"},
        {"king", "kinge"},                {"wright", "write", "rite"},
        {"hill", "hille"},                {"green", "greene"},
        {"baker", "bakker"},              {"nelson", "neilson", "nilsson"},
        {"carter", "karter"},             {"mitchell", "mitchel"},
        {"roberts", "robberts"},          {"phillips", "philips", "fillips"},
        {"campbell", "cambell"},          {"parker", "parkar"},
        {"evans", "evens", "evanss"},     {"edwards", "edwardes"},
        {"collins", "colins", "collens"}, {"stewart", "stuart", "steward"},
        {"morris", "morriss", "maurice"}, {"murphy", "murphey"},
        {"cook", "cooke", "koch"},        {"rogers", "rodgers"},
        {"reed", "reid", "read"},         {"bailey", "baily", "bayley"},
        {"bell", "belle"},                {"cox", "coxe"},
        {"ward", "warde"},                {"gray", "grey"},
        {"watson", "whatson"},            {"brooks", "brookes"},
        {"bennett", "bennet", "benett"},  {"hughes", "hughs", "hews"},
        {"price", "pryce"},               {"sanders", "saunders"},
        {"myers", "meyers", "miers"},     {"foster", "forster"},
    };
    return families;
}

// City names are chosen so that any two share at most one bigram. Two
// entities with the same name in different cities then stay clearly below
// the match threshold instead of hovering at it.
inline const std::vector<std::string>& cities() {
    static const std::vector<std::string> v = {
        "balgowlah", "branxton", "bundeena", "cobbitty", "doonside",
        "drummoyne", "edgecliff", "fairfield", "freshwater", "glenhaven",
        "huskisson", "jamberoo", "kirrawee", "macquarie", "narellan",
        "oakhurst", "richmond", "rosehill", "springwood", "sylvania",
        "thornleigh", "vaucluse", "vineyard", "westmead",
    };
    return v;
}

// Three zipcodes per city, picked so that zips of different cities share at
// most one bigram, for the same reason as the city names above.
inline std::string zip_for(std::size_t city_index, std::size_t variant) {
    static const char* zips[24][3] = {
        {"77536", "79437", "37801"}, {"82186", "56809", "11977"},
        {"27810", "96086", "70040"}, {"38457", "10368", "88785"},
        {"61548", "42049", "90789"}, {"99881", "65162", "77984"},
        {"17313", "47552", "14431"}, {"17185", "49727", "19514"},
        {"99260", "85653", "82975"}, {"89582", "30621", "33563"},
        {"61900", "32405", "27760"}, {"76307", "74735", "52679"},
        {"36435", "66481", "58509"}, {"42946", "14693", "59525"},
        {"45418", "35442", "88353"}, {"93373", "75766", "20685"},
        {"30905", "87019", "45690"}, {"67659", "30855", "25539"},
        {"65289", "96583", "15137"}, {"35867", "25606", "64967"},
        {"12623", "82836", "48991"}, {"21677", "77450", "50139"},
        {"59138", "27199", "85237"}, {"83292", "24417", "31105"},
    };
    return zips[city_index % 24][variant % 3];
}

}  // namespace namepool

namespace detail {

// Variant spellings that can stand in for a family's canonical one without
// breaking the linkage signal: same Soundex code (so the pair still lands in
// one block) and enough shared bigrams that swapping this one attribute keeps
// whole-record similarity clearly above the default threshold.
inline std::vector<std::size_t> close_variants(const std::vector<std::string>& family) {
    auto grams = [](const std::string& s) {
        std::set<std::string> g;
        for (std::size_t i = 0; i + 2 <= s.size(); ++i) g.insert(s.substr(i, 2));
        return g;
    };
    std::vector<std::size_t> out = {0};
    const auto base = grams(family[0]);
    const std::string code = soundex(family[0]);
    for (std::size_t v = 1; v < family.size(); ++v) {
        if (soundex(family[v]) != code) continue;
        const auto g = grams(family[v]);
        std::size_t common = 0;
        for (const auto& q : g) common += base.count(q);
        // 13 approximates the bigram mass of the three unchanged attributes
        const double approx = 2.0 * (13.0 + static_cast<double>(common)) /
                              (26.0 + static_cast<double>(base.size() + g.size()));
        if (approx >= 0.80) out.push_back(v);
    }
    return out;
}

inline const std::vector<std::vector<std::size_t>>& variant_table(
    const std::vector<std::vector<std::string>>& families) {
    static std::map<const void*, std::vector<std::vector<std::size_t>>> cache;
    auto it = cache.find(&families);
    if (it == cache.end()) {
        std::vector<std::vector<std::size_t>> table;
        table.reserve(families.size());
        for (const auto& family : families) table.push_back(close_variants(family));
        it = cache.emplace(&families, std::move(table)).first;
    }
    return it->second;
}

}  // namespace detail

// One random entity: a (first-name family, last-name family, city, zip)
// identity. Most record instances use the entity's canonical spellings; some
// swap one name for a close variant, so two databases can hold "sarah smith"
// and "sara smith" for the same person.
struct Entity {
    std::string entity_id;
    std::size_t first_family = 0;
    std::size_t first_variant = 0;    // canonical spelling, index into the family
    std::vector<std::size_t> first_choices;  // spellings this entity may use
    std::size_t last_family = 0;
    bool vary_last = false;  // which single name field this entity misspells
    std::string city;
    std::string zip;

    // vary_prob is the chance that this record swaps one name for a close
    // variant. Only one field per entity ever varies, so two records of the
    // same entity never drift apart in two attributes at once.
    std::vector<std::string> record_values(std::mt19937_64& rng, double vary_prob) const {
        const auto& ff = namepool::first_name_families()[first_family];
        const auto& lf = namepool::last_name_families()[last_family];
        std::string first = ff[first_variant];
        std::string last = lf[0];
        if (rng() % 1000 < static_cast<std::uint64_t>(vary_prob * 1000.0)) {
            if (vary_last) {
                const auto& ok = detail::variant_table(
                    namepool::last_name_families())[last_family];
                last = lf[ok[rng() % ok.size()]];
            } else {
                first = ff[first_choices[rng() % first_choices.size()]];
            }
        }
        return {first, last, city, zip};
    }
};

// Applies 1-2 random character edit operations (insertion, deletion,
// substitution, transposition) to randomly selected QID values.
inline void corrupt(PlainRecord& record, std::mt19937_64& rng) {
    if (record.qid_values.empty())
        throw std::invalid_argument("corrupt: record has no QID values");
    const std::size_t ops = 1 + (rng() % 2);
    for (std::size_t op = 0; op < ops; ++op) {
        // pick a non-empty attribute
        std::vector<std::size_t> nonempty;
        for (std::size_t i = 0; i < record.qid_values.size(); ++i)
            if (!record.qid_values[i].empty()) nonempty.push_back(i);
        if (nonempty.empty()) return;
        std::string& value = record.qid_values[nonempty[rng() % nonempty.size()]];

        std::size_t kind = rng() % 4;
        if (kind == 3 && value.size() < 2) kind = 2;  // transpose needs 2 chars
        const char letter = static_cast<char>('a' + rng() % 26);
        switch (kind) {
            case 0:  // insertion
                value.insert(value.begin() + static_cast<long>(rng() % (value.size() + 1)),
                             letter);
                break;
            case 1:  // deletion
                if (value.size() > 1)
                    value.erase(value.begin() + static_cast<long>(rng() % value.size()));
                else
                    value[0] = letter;  // keep the attribute non-empty
                break;
            case 2:  // substitution
                value[rng() % value.size()] = letter;
                break;
            case 3: {  // transposition
                const std::size_t i = rng() % (value.size() - 1);
                std::swap(value[i], value[i + 1]);
                break;
            }
        }
    }
}

struct GeneratedData {
    std::vector<PlainDatabase> parties;
    std::map<std::size_t, std::size_t> entities_per_subset_size;
    std::size_t corrupted_records = 0;
};

namespace detail {

// Families whose canonical spellings share a Soundex code (cook and cox, or
// marc and marcia, say) land in the same block and differ by only a few
// characters, so they are treated as one family for the purpose of keeping
// look-alike entities apart.
inline std::vector<std::size_t> soundex_classes(
    const std::vector<std::vector<std::string>>& families) {
    std::vector<std::size_t> out(families.size());
    std::map<std::string, std::size_t> first_with_code;
    for (std::size_t i = 0; i < families.size(); ++i)
        out[i] = first_with_code.try_emplace(soundex(families[i][0]), i).first->second;
    return out;
}

inline std::size_t first_family_class(std::size_t ff) {
    static const std::vector<std::size_t> classes =
        soundex_classes(namepool::first_name_families());
    return classes[ff];
}

inline std::size_t last_family_class(std::size_t lf) {
    static const std::vector<std::size_t> classes =
        soundex_classes(namepool::last_name_families());
    return classes[lf];
}

// Long names leave city and zip too small a share of the record: two
// entities called, say, catherine phillips still encode above the match
// threshold even when they live in different cities. Such name combinations
// get a single global slot in the dedup key instead of one slot per city.
inline bool cross_city_confusable(std::size_t ff, std::size_t lf) {
    static const std::vector<char> table = [] {
        const auto& firsts = namepool::first_name_families();
        const auto& lasts = namepool::last_name_families();
        const EncodingParams params;
        // Synthetic stand-ins for the worst real city and zip pair: shortest
        // allowed length, exactly one shared bigram each, and letters that
        // never occur in the name pools.
        const std::string city_a = "qjzxvwkq", city_b = "yqjfygwq";
        const std::string zip_a = "11223", zip_b = "22987";
        std::vector<char> out(firsts.size() * lasts.size());
        for (std::size_t f = 0; f < firsts.size(); ++f)
            for (std::size_t l = 0; l < lasts.size(); ++l) {
                const BloomFilter a =
                    encode_record({firsts[f][0], lasts[l][0], city_a, zip_a}, params);
                const BloomFilter b =
                    encode_record({firsts[f][0], lasts[l][0], city_b, zip_b}, params);
                // the synthetic pair reads about 0.03 below the worst real
                // city pair, so the cutoff leans well below the 0.8 threshold
                out[f * lasts.size() + l] = dice_bf(a, b) >= 0.75;
            }
        // Confusability must agree within a Soundex class, otherwise a
        // global-slot entity and a per-city-slot entity of the same class
        // could land in different dedup keys yet still collide in a block.
        for (std::size_t f = 0; f < firsts.size(); ++f)
            for (std::size_t l = 0; l < lasts.size(); ++l)
                if (out[f * lasts.size() + l])
                    for (std::size_t f2 = 0; f2 < firsts.size(); ++f2)
                        for (std::size_t l2 = 0; l2 < lasts.size(); ++l2)
                            if (first_family_class(f2) == first_family_class(f) &&
                                last_family_class(l2) == last_family_class(l))
                                out[f2 * lasts.size() + l2] = 1;
        return out;
    }();
    return table[ff * namepool::last_name_families().size() + lf];
}

// Dedup key of an entity: look-alike entities (same Soundex classes) may
// coexist in different cities, except for confusable name combinations,
// which get the one-past-the-end city slot as a global singleton.
inline std::tuple<std::size_t, std::size_t, std::size_t> dedup_key(std::size_t ff,
                                                                   std::size_t lf,
                                                                   std::size_t city) {
    if (cross_city_confusable(ff, lf)) city = namepool::cities().size();
    return {first_family_class(ff), last_family_class(lf), city};
}

inline Entity draw_entity(std::size_t id, std::mt19937_64& rng,
                          std::set<std::tuple<std::size_t, std::size_t, std::size_t>>&
                              seen) {
    const auto& firsts = namepool::first_name_families();
    const auto& lasts = namepool::last_name_families();
    const auto& cities = namepool::cities();
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Entity e;
        e.entity_id = "E" + std::to_string(id);
        e.first_family = rng() % firsts.size();
        e.first_choices = variant_table(firsts)[e.first_family];
        e.last_family = rng() % lasts.size();
        e.vary_last = rng() % 2 == 0;
        const std::size_t city = rng() % cities.size();
        e.city = cities[city];
        e.zip = namepool::zip_for(city, rng());
        if (seen.insert(dedup_key(e.first_family, e.last_family, city)).second) return e;
    }
    throw std::runtime_error("datagen: name pool exhausted, too many entities requested");
}

// Two or three distinct entities of one household: same last name, city and
// zip code, with one fixed first-name spelling per entity from a single
// spelling-variant family. All of them misspell the shared last name, so any
// two of their records agree on city and zip, nearly agree on the last name,
// and differ only in close first-name variants. They compete for the same
// clusters in every mapping iteration, which is what separates the one-to-one
// mapping strategies.
inline std::vector<Entity> draw_twin_group(
    std::size_t& next_id, std::mt19937_64& rng,
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>>& seen,
    std::size_t max_group) {
    const auto& firsts = namepool::first_name_families();
    const auto& lasts = namepool::last_name_families();
    const auto& cities = namepool::cities();
    const auto& first_variants = variant_table(firsts);
    const auto& last_variants = variant_table(lasts);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const std::size_t ff = rng() % firsts.size();
        if (first_variants[ff].size() < 2) continue;
        const std::size_t lf = rng() % lasts.size();
        if (last_variants[lf].size() < 2) continue;
        const std::size_t city = rng() % cities.size();
        if (!seen.insert(dedup_key(ff, lf, city)).second) continue;

        const std::size_t group = std::min(first_variants[ff].size(), max_group);
        const std::string zip = namepool::zip_for(city, rng());
        std::vector<Entity> out(group);
        for (std::size_t i = 0; i < group; ++i) {
            Entity& e = out[i];
            e.entity_id = "E" + std::to_string(next_id++);
            e.first_family = ff;
            e.first_variant = first_variants[ff][i];
            e.first_choices = {first_variants[ff][i]};
            e.last_family = lf;
            e.vary_last = true;
            e.city = cities[city];
            e.zip = zip;
        }
        return out;
    }
    throw std::runtime_error("datagen: name pool exhausted, too many entities requested");
}

}  // namespace detail

// Generates p duplicate-free party datasets with the requested overlap
// structure and ground-truth entity ids, then corrupts the requested fraction
// of matching records.
inline GeneratedData generate(const OverlapSpec& spec) {
    spec.validate();
    SeedStream seeds(spec.seed);
    std::mt19937_64 entity_rng(seeds.derive("entities"));
    std::mt19937_64 shuffle_rng(seeds.derive("shuffle"));
    std::mt19937_64 corrupt_rng(seeds.derive("corruption"));

    const std::size_t p = spec.num_parties;
    const std::size_t n = spec.records_per_party;

    // records-per-party budget per subset size
    std::map<std::size_t, double> dist = spec.subset_size_distribution;
    if (dist.empty() && spec.subset_overlap_fraction > 0) {
        // uniform over proper subsets 2..p-1 (all in size 2 when p == 2 has none)
        std::vector<std::size_t> sizes;
        for (std::size_t s = 2; s < p; ++s) sizes.push_back(s);
        if (sizes.empty()) sizes.push_back(p);
        for (std::size_t s : sizes)
            dist[s] += spec.subset_overlap_fraction / static_cast<double>(sizes.size());
    }
    dist[p] += spec.full_overlap_fraction;

    // Moderate, party-independent spelling noise: enough that clusters see
    // mixed variants, not so much that an entity drifts apart.
    auto vary_prob = [&](std::size_t) { return 0.55; };

    GeneratedData out;
    out.parties.resize(p);
    for (std::size_t i = 0; i < p; ++i) out.parties[i].party_index = static_cast<int>(i);

    std::vector<std::size_t> deficit(p, n);
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
    std::size_t next_entity = 0;

    // Assign multi-party entities largest subset size first, always to the
    // parties with the most remaining capacity, so per-party counts stay
    // balanced and exact where divisible.
    for (auto it = dist.rbegin(); it != dist.rend(); ++it) {
        const auto [size, frac] = *it;
        if (size < 2 || frac <= 0) continue;
        const std::size_t total_records =
            static_cast<std::size_t>(std::llround(frac * static_cast<double>(n * p)));
        const std::size_t entities = total_records / size;
        std::size_t remaining = entities;
        while (remaining > 0) {
            // s parties with the largest deficit, ties to the lower index
            std::vector<std::size_t> order(p);
            for (std::size_t i = 0; i < p; ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return deficit[a] > deficit[b];
            });
            if (deficit[order[size - 1]] == 0) break;  // no room left

            // Proper-subset entities arrive as twin groups placed on the
            // same party set, so their records contend in every mapping
            // iteration. Full-overlap entities stay twin-free: their
            // clusters are the only survivors at s_m = p, where a single
            // mapping error voids a whole cluster.
            std::vector<Entity> drawn;
            if (size < p && remaining >= 2 && deficit[order[size - 1]] >= 2)
                drawn = detail::draw_twin_group(
                    next_entity, entity_rng, seen,
                    std::min(remaining, static_cast<std::size_t>(deficit[order[size - 1]])));
            else
                drawn.push_back(detail::draw_entity(next_entity++, entity_rng, seen));

            for (const Entity& entity : drawn) {
                ++out.entities_per_subset_size[size];
                --remaining;
                for (std::size_t i = 0; i < size; ++i) {
                    const std::size_t party = order[i];
                    PlainRecord rec;
                    rec.record_id = "P" + std::to_string(party) + "-R" +
                                    std::to_string(n - deficit[party]);
                    rec.entity_id = entity.entity_id;
                    rec.qid_values = entity.record_values(entity_rng, vary_prob(party));
                    out.parties[party].records.push_back(std::move(rec));
                    --deficit[party];
                }
            }
        }
    }

    // Fill the remainder with party-unique entities.
    for (std::size_t party = 0; party < p; ++party) {
        while (deficit[party] > 0) {
            const Entity entity = detail::draw_entity(next_entity++, entity_rng, seen);
            ++out.entities_per_subset_size[1];
            PlainRecord rec;
            rec.record_id = "P" + std::to_string(party) + "-R" +
                            std::to_string(n - deficit[party]);
            rec.entity_id = entity.entity_id;
            rec.qid_values = entity.record_values(entity_rng, vary_prob(party));
            out.parties[party].records.push_back(std::move(rec));
            --deficit[party];
        }
        std::shuffle(out.parties[party].records.begin(),
                     out.parties[party].records.end(), shuffle_rng);
    }

    // Corrupt an exact count of matching-record instances.
    if (spec.corruption_rate > 0) {
        std::map<std::string, std::size_t> entity_instances;
        for (const auto& db : out.parties)
            for (const auto& rec : db.records) ++entity_instances[rec.entity_id];
        std::vector<std::pair<std::size_t, std::size_t>> matched;  // (party, idx)
        for (std::size_t party = 0; party < p; ++party)
            for (std::size_t i = 0; i < out.parties[party].records.size(); ++i)
                if (entity_instances[out.parties[party].records[i].entity_id] >= 2)
                    matched.emplace_back(party, i);
        std::shuffle(matched.begin(), matched.end(), corrupt_rng);
        const std::size_t count = static_cast<std::size_t>(std::llround(
            spec.corruption_rate * static_cast<double>(matched.size())));
        for (std::size_t i = 0; i < count && i < matched.size(); ++i) {
            corrupt(out.parties[matched[i].first].records[matched[i].second], corrupt_rng);
            ++out.corrupted_records;
        }
    }
    return out;
}

}  // namespace mpprl
