#ifndef DIFFBAND_CLI_HPP
#define DIFFBAND_CLI_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "diffband/banded.hpp"
#include "diffband/io.hpp"
#include "diffband/oracle.hpp"
#include "diffband/parallel.hpp"
#include "diffband/pimmodel.hpp"
#include "diffband/readsim.hpp"

namespace diffband {

using Json = nlohmann::ordered_json;

/* ---- formatting ---- */

/// printf-style so output never depends on stream locale or state.
inline std::string format_number(double v, int significant = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, v);
    return buf;
}

inline std::string format_fraction(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

/// "100-250" or "150".
inline LengthRange parse_length_range(std::string_view text) {
    const auto dash = text.find('-');
    const auto lo = parse_number<std::size_t>(text.substr(0, dash));
    const auto hi = dash == std::string_view::npos ? lo : parse_number<std::size_t>(text.substr(dash + 1));
    if (!lo || !hi || *lo == 0 || *hi < *lo) throw Error("bad length range '" + std::string(text) + "'");
    return {*lo, *hi};
}

inline std::string format_length_range(LengthRange r) {
    return r.lo == r.hi ? std::to_string(r.lo) : std::to_string(r.lo) + "-" + std::to_string(r.hi);
}

/// Comma-separated values and inclusive ranges, e.g. "1-4,8,15".
inline std::vector<std::uint64_t> parse_value_list(std::string_view text) {
    std::vector<std::uint64_t> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        const auto dash = item.find('-');
        const auto lo = parse_number<std::uint64_t>(item.substr(0, dash));
        const auto hi = dash == std::string_view::npos ? lo : parse_number<std::uint64_t>(item.substr(dash + 1));
        if (!lo || !hi || *hi < *lo) throw Error("bad value list item '" + std::string(item) + "'");
        for (std::uint64_t v = *lo; v <= *hi; ++v) out.push_back(v);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (out.empty()) throw Error("empty value list");
    return out;
}

/* ---- align / editdist ---- */

struct AlignFlags {
    bool oracle = false;
    bool traceback = true;
};

inline Json align_record(const PairRecord& pair, const RunConfig& cfg, const AlignFlags& flags) {
    WavefrontOptions options = cfg.wavefront;
    options.record_traceback = flags.traceback;
    const BandedResult r = try_banded_align(pair.reference, pair.query, cfg.scheme, cfg.band, options);
    Json j;
    j["id"] = pair.id;
    if (r.escaped) {
        j["score"] = nullptr;
        if (flags.traceback) j["cigar"] = nullptr;
    } else {
        j["score"] = r.outcome.score;
        if (flags.traceback) j["cigar"] = r.outcome.cigar.str();
    }
    j["band_used"] = r.outcome.band_used;
    j["cells_computed"] = r.outcome.cells_computed;
    j["traceback_cells"] = r.outcome.traceback_cells;
    j["band_escape"] = r.escaped;
    if (r.escaped) j["best_edge_score"] = r.best_edge_score;
    if (flags.oracle) {
        const std::int64_t oracle = full_dp_score(pair.reference, pair.query, cfg.scheme);
        j["oracle_score"] = oracle;
        j["match"] = !r.escaped && r.outcome.score == oracle;
    }
    return j;
}

inline Json editdist_record(const PairRecord& pair, const RunConfig& cfg, const AlignFlags& flags) {
    const EditDistanceOutcome r = try_banded_edit_distance(pair.reference, pair.query, cfg.band, flags.traceback, cfg.wavefront);
    Json j;
    j["id"] = pair.id;
    if (r.escaped) j["distance"] = nullptr;
    else j["distance"] = r.levenshtein;
    if (r.affine_escaped) j["affine_cost"] = nullptr;
    else j["affine_cost"] = r.affine_cost;
    if (flags.traceback) {
        if (r.cigar) j["cigar"] = r.cigar->str();
        else j["cigar"] = nullptr;
    }
    j["band_used"] = r.band_used;
    j["cells_computed"] = r.cells_computed;
    j["traceback_cells"] = r.traceback_cells;
    j["band_escape"] = r.escaped;
    if (flags.oracle) {
        const std::int64_t oracle = edit_distance_full(pair.reference, pair.query).distance;
        j["oracle_distance"] = oracle;
        j["match"] = !r.escaped && r.levenshtein == oracle;
    }
    return j;
}

inline void write_records(std::span<const Json> records, std::ostream& out) {
    for (const Json& j : records) out << j.dump() << '\n';
}

inline void run_align(std::span<const PairRecord> pairs, const RunConfig& cfg, const AlignFlags& flags, std::ostream& out) {
    write_records(ordered_parallel_map(pairs, cfg.threads, [&](const PairRecord& p) { return align_record(p, cfg, flags); }),
                  out);
}

inline void run_editdist(std::span<const PairRecord> pairs, const RunConfig& cfg, const AlignFlags& flags,
                         std::ostream& out) {
    write_records(
        ordered_parallel_map(pairs, cfg.threads, [&](const PairRecord& p) { return editdist_record(p, cfg, flags); }),
        out);
}

/* ---- simreads ---- */

struct SimRequest {
    std::string genome;  // synthetic:<len>:<seed> or FASTA path
    std::string profile = "PacBio";
    std::size_t count = 100;
    LengthRange lengths{150, 150};
    std::uint64_t seed = 1;
    std::optional<double> insertion_continue;
    bool mask_n = false;
};

inline std::string truth_path(const std::string& out_path) { return out_path + ".truth.tsv"; }

inline std::vector<ReadPair> simulate(const SimRequest& req) {
    const NucleotideSequence genome = load_genome(req.genome, req.mask_n);
    return generate_dataset(genome, profile_by_name(req.profile), req.count, req.lengths, req.seed,
                            MutationOptions{req.insertion_continue});
}

/// Writes the pairs and truth files and returns a one-line summary.
inline Json run_simreads(const SimRequest& req, const std::string& out_path) {
    const std::vector<ReadPair> pairs = simulate(req);
    {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Error("cannot open '" + out_path + "' for writing");
        write_pairs(out, pairs);
    }
    {
        std::ofstream truth(truth_path(out_path), std::ios::binary);
        if (!truth) throw Error("cannot open '" + truth_path(out_path) + "' for writing");
        write_truth(truth, pairs);
    }
    const RealizedRates r = realized_rates(pairs);
    Json j;
    j["pairs"] = pairs.size();
    j["out"] = out_path;
    j["truth"] = truth_path(out_path);
    j["profile"] = req.profile;
    j["reference_bases"] = r.reference_bases;
    j["substitutions"] = r.substitutions;
    j["insertions"] = r.insertions;
    j["deletions"] = r.deletions;
    return j;
}

/* ---- validate ---- */

struct ValidateRequest {
    std::string profile = "Illumina";
    LengthRange lengths{100, 250};
    std::size_t count = 1000;
    std::vector<int> widths{10, 20, 30, 40, 50};
    std::vector<bool> adaptive{true, false};
    std::uint64_t seed = 1;
    std::optional<std::string> genome;  // default: synthetic, derived from seed
    ScoringScheme scheme = ScoringScheme::minimap2();
    BandPolicy band;  // slope, cap and rounding; base width comes from `widths`
    Direction tie = Direction::Down;
    std::optional<double> insertion_continue;
    unsigned threads = 1;
};

struct ValidateRow {
    bool adaptive;
    std::vector<double> fraction;  // per width
    std::vector<std::uint64_t> cell_bound_violations;  // reads with cells_computed > (m+n)*B, per width
};

struct ValidateReport {
    std::vector<ValidateRow> rows;
    std::size_t reads = 0;
};

inline ValidateReport validate_accuracy(const ValidateRequest& req) {
    if (req.widths.empty() || req.adaptive.empty()) throw Error("need at least one width and one adaptive setting");
    const NucleotideSequence genome =
        req.genome ? load_genome(*req.genome)
                   : synthetic_genome(std::max<std::size_t>(100000, 10 * req.lengths.hi), splitmix64(req.seed));
    const std::vector<ReadPair> reads = generate_dataset(genome, profile_by_name(req.profile), req.count, req.lengths,
                                                         req.seed, MutationOptions{req.insertion_continue});
    std::vector<BandPolicy> policies;
    for (int w : req.widths)
        policies.emplace_back(w, req.band.slope(), std::max(w, req.band.cap()), req.band.round_to_multiple());

    // Per read: for each (adaptive, width) a match bit and a cell-bound violation bit.
    struct Outcome {
        std::vector<bool> match;
        std::vector<bool> over;
    };
    const auto outcomes = ordered_parallel_map(std::span<const ReadPair>(reads), req.threads, [&](const ReadPair& p) {
        const std::int64_t oracle = full_dp_score(p.reference_window, p.read, req.scheme);
        Outcome o;
        for (bool adaptive : req.adaptive) {
            for (const BandPolicy& policy : policies) {
                const BandedResult r = try_banded_align(p.reference_window, p.read, req.scheme, policy,
                                                        {adaptive, req.tie, false});
                o.match.push_back(!r.escaped && r.outcome.score == oracle);
                const std::uint64_t bound =
                    (p.reference_window.size() + p.read.size()) * static_cast<std::uint64_t>(r.outcome.band_used);
                o.over.push_back(r.outcome.cells_computed > bound);
            }
        }
        return o;
    });

    ValidateReport report;
    report.reads = reads.size();
    for (std::size_t a = 0; a < req.adaptive.size(); ++a) {
        ValidateRow row{req.adaptive[a], {}, {}};
        for (std::size_t w = 0; w < policies.size(); ++w) {
            const std::size_t slot = a * policies.size() + w;
            std::uint64_t hits = 0, over = 0;
            for (const auto& o : outcomes) {
                hits += o.match[slot];
                over += o.over[slot];
            }
            row.fraction.push_back(static_cast<double>(hits) / static_cast<double>(reads.size()));
            row.cell_bound_violations.push_back(over);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

/// profile,length,adaptive,reads,w<..>... with match fractions.
inline void write_validate_csv(const ValidateRequest& req, const ValidateReport& report, std::ostream& out) {
    out << "profile,length,adaptive,reads";
    for (int w : req.widths) out << ",w" << w;
    out << '\n';
    for (const auto& row : report.rows) {
        out << req.profile << ',' << format_length_range(req.lengths) << ',' << (row.adaptive ? "on" : "off") << ','
            << report.reads;
        for (double f : row.fraction) out << ',' << format_fraction(f);
        out << '\n';
    }
}

inline void run_validate(const ValidateRequest& req, std::ostream& out) {
    write_validate_csv(req, validate_accuracy(req), out);
}

/* ---- pim / dse ---- */

inline constexpr std::string_view kPimColumns =
    "pairs,reference_length,query_length,bandwidth,bit_width,parallelism,cycles,latency_s,energy,reads_per_s,"
    "energy_per_read,cells_per_s,tbm_cells_used,tbm_capacity,tbm_overcommitted,writes_per_cell,lifetime_alignments,"
    "status";

inline void run_pim(const Workload& load, const RunConfig& cfg, std::ostream& out) {
    out << kPimColumns << '\n';
    out << load.pairs << ',' << load.reference_length << ',' << load.query_length << ',';
    try {
        const CostReport r = estimate_run(load, cfg.band, cfg.arch);
        const WriteTraffic w = estimate_write_traffic(load.iterations(), r.bit_width, r.parallelism, cfg.arch);
        out << r.bandwidth << ',' << r.bit_width << ',' << r.parallelism << ',' << r.cycles << ','
            << format_number(r.latency_seconds) << ',' << format_number(r.energy) << ','
            << format_number(r.reads_per_second) << ',' << format_number(r.energy_per_read) << ','
            << format_number(r.cells_per_second) << ',' << r.tbm_cells_used << ',' << r.tbm_capacity << ','
            << (r.tbm_overcommitted ? "yes" : "no") << ',' << format_number(r.writes_per_cell) << ','
            << format_number(w.lifetime_alignments) << ",ok\n";
    } catch (const CapacityExceeded&) {
        out << ",,,,,,,,,,,,,,capacity_exceeded\n";
    }
}

inline void run_dse(DseAxis axis, std::span<const std::uint64_t> values, std::span<const std::uint64_t> lengths,
                    const RunConfig& cfg, std::ostream& out) {
    out << (axis == DseAxis::TbmsPerTile ? "tbms_per_tile" : "column_width")
        << ",length,bandwidth,parallelism,reads_per_s,peripheral_area,status\n";
    for (const DseRow& row : dse_sweep(axis, values, lengths, cfg.scheme, cfg.band, cfg.arch)) {
        out << row.value << ',' << row.length << ',' << row.bandwidth << ',' << row.parallelism << ','
            << format_number(row.reads_per_second) << ',' << format_number(row.peripheral_area) << ','
            << (row.capacity_exceeded ? "capacity_exceeded" : "ok") << '\n';
    }
}

}  // namespace diffband

#endif
