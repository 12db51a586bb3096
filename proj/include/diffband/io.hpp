#ifndef DIFFBAND_IO_HPP
#define DIFFBAND_IO_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "diffband/banded.hpp"
#include "diffband/core.hpp"
#include "diffband/pimmodel.hpp"
#include "diffband/readsim.hpp"

namespace diffband {

namespace detail {

inline std::string_view chomp(std::string_view line) noexcept {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

inline std::string_view trim(std::string_view s) noexcept {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return in;
}

}  // namespace detail

/* ---- numbers ---- */

template <class T>
std::optional<T> parse_number(std::string_view text) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
    return value;
}

/// "a/b" or a plain integer.
inline std::optional<Rational> parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        const auto n = parse_number<std::int64_t>(text);
        return n ? std::optional<Rational>({*n, 1}) : std::nullopt;
    }
    const auto num = parse_number<std::int64_t>(text.substr(0, slash));
    const auto den = parse_number<std::int64_t>(text.substr(slash + 1));
    if (!num || !den) return std::nullopt;
    return Rational{*num, *den};
}

inline std::optional<bool> parse_switch(std::string_view text) {
    if (text == "on" || text == "true" || text == "1" || text == "yes") return true;
    if (text == "off" || text == "false" || text == "0" || text == "no") return false;
    return std::nullopt;
}

/* ---- FASTA ---- */

struct FastaRecord {
    std::string name;
    NucleotideSequence sequence;
    std::size_t masked = 0;  // N bases replaced by A
};

/// Headers start with '>'; the name is the first word. Lower case is accepted. With mask_n,
/// N/n becomes A and is counted; any other non-ACGT byte is an error.
inline std::vector<FastaRecord> parse_fasta(std::istream& in, const std::string& source, bool mask_n = false) {
    std::vector<FastaRecord> records;
    std::vector<Base> bases;
    std::size_t header_line = 0;
    auto finish = [&] {
        if (records.empty()) return;
        if (bases.empty()) throw ParseError(source, header_line, "empty record '" + records.back().name + "'");
        records.back().sequence = NucleotideSequence(std::move(bases));
        bases.clear();
    };
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        const std::string_view line = detail::chomp(raw);
        if (line.empty()) continue;
        if (line.front() == '>') {
            finish();
            const std::string_view rest = detail::trim(line.substr(1));
            const std::string_view name = rest.substr(0, rest.find_first_of(" \t"));
            if (name.empty()) throw ParseError(source, line_no, "malformed header: missing name");
            records.push_back({std::string(name), {}, 0});
            header_line = line_no;
            continue;
        }
        if (records.empty()) throw ParseError(source, line_no, "sequence data before first header");
        for (std::size_t col = 0; col < line.size(); ++col) {
            const char c = line[col];
            const char upper = (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
            if (auto b = base_from_char(upper)) {
                bases.push_back(*b);
            } else if (upper == 'N' && mask_n) {
                bases.push_back(Base::A);
                ++records.back().masked;
            } else {
                throw ParseError(source, line_no,
                                 "illegal character '" + std::string(1, c) + "' at column " + std::to_string(col + 1));
            }
        }
    }
    finish();
    if (records.empty()) throw ParseError(source, 1, "no FASTA records");
    return records;
}

inline std::vector<FastaRecord> parse_fasta_file(const std::string& path, bool mask_n = false) {
    auto in = detail::open_input(path);
    return parse_fasta(in, path, mask_n);
}

/* ---- pairs TSV ---- */

struct PairRecord {
    std::string id;
    NucleotideSequence reference;
    NucleotideSequence query;
};

inline constexpr std::string_view kPairsHeader = "id\treference\tquery";

/// `id<TAB>reference<TAB>query` per line, optional header, unique ids.
inline std::vector<PairRecord> parse_pairs(std::istream& in, const std::string& source) {
    std::vector<PairRecord> out;
    std::set<std::string, std::less<>> seen;
    std::string raw;
    bool first = true;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        const std::string_view line = detail::chomp(raw);
        if (line.empty()) continue;
        if (std::exchange(first, false) && line == kPairsHeader) continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos)
            throw ParseError(source, line_no, "expected 3 tab-separated fields");
        const std::string_view id = line.substr(0, t1);
        if (id.empty()) throw ParseError(source, line_no, "empty id");
        if (!seen.insert(std::string(id)).second) throw ParseError(source, line_no, "duplicate id '" + std::string(id) + "'");
        auto field = [&](std::string_view text, const char* what) {
            if (text.empty()) throw ParseError(source, line_no, std::string("empty ") + what);
            try {
                return NucleotideSequence::parse(text);
            } catch (const InvalidSequence& e) {
                throw ParseError(source, line_no, std::string(what) + ": " + e.what());
            }
        };
        out.push_back({std::string(id), field(line.substr(t1 + 1, t2 - t1 - 1), "reference"),
                       field(line.substr(t2 + 1), "query")});
    }
    return out;
}

inline std::vector<PairRecord> parse_pairs_file(const std::string& path) {
    auto in = detail::open_input(path);
    return parse_pairs(in, path);
}

inline void write_pairs(std::ostream& out, std::span<const ReadPair> pairs) {
    out << kPairsHeader << '\n';
    for (const auto& p : pairs) out << p.id << '\t' << p.reference_window.str() << '\t' << p.read.str() << '\n';
}

/// Compact edit list, e.g. "S12G,D40,I57T"; "-" when error-free.
inline std::string format_edits(std::span<const TruthEdit> edits) {
    if (edits.empty()) return "-";
    std::string s;
    for (const auto& e : edits) {
        if (!s.empty()) s += ',';
        s += e.kind == EditKind::Substitution ? 'S' : e.kind == EditKind::Insertion ? 'I' : 'D';
        s += std::to_string(e.position);
        if (e.kind != EditKind::Deletion) s += to_char(e.base);
    }
    return s;
}

inline void write_truth(std::ostream& out, std::span<const ReadPair> pairs) {
    out << "id\toffset\tseed\tedits\n";
    for (const auto& p : pairs) out << p.id << '\t' << p.offset << '\t' << p.seed << '\t' << format_edits(p.truth_edits) << '\n';
}

/* ---- genome source ---- */

/// `synthetic:<length>:<seed>` or a FASTA path (first record).
inline NucleotideSequence load_genome(const std::string& source, bool mask_n = false) {
    constexpr std::string_view prefix = "synthetic:";
    if (source.starts_with(prefix)) {
        const std::string_view rest = std::string_view(source).substr(prefix.size());
        const auto colon = rest.find(':');
        const auto length = parse_number<std::uint64_t>(rest.substr(0, colon));
        const auto seed = colon == std::string_view::npos ? std::optional<std::uint64_t>(0)
                                                           : parse_number<std::uint64_t>(rest.substr(colon + 1));
        if (!length || !seed || *length == 0) throw Error("bad genome source '" + source + "' (want synthetic:<len>:<seed>)");
        return synthetic_genome(*length, *seed);
    }
    return parse_fasta_file(source, mask_n).front().sequence;
}

/* ---- run configuration ---- */

struct RunConfig {
    ScoringScheme scheme = ScoringScheme::minimap2();
    BandPolicy band;
    WavefrontOptions wavefront;
    std::optional<std::string> profile;  // unset: each command keeps its own default
    std::optional<double> insertion_continue;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    ArchConfig arch;
};

namespace detail {

inline std::optional<ScoringScheme> scheme_preset(std::string_view name) {
    if (name == "minimap2") return ScoringScheme::minimap2();
    if (name == "bwa_mem") return ScoringScheme::bwa_mem();
    if (name == "affine_edit") return ScoringScheme::affine_edit();
    if (name == "unit_edit") return ScoringScheme::unit_edit();
    return std::nullopt;
}

}  // namespace detail

/// `key = value` lines, '#' starts a comment. Unknown keys are errors.
inline RunConfig parse_run_config(std::istream& in, const std::string& source) {
    RunConfig cfg;
    int match = cfg.scheme.match(), mismatch = cfg.scheme.mismatch();
    int gap_open = cfg.scheme.gap_open(), gap_extend = cfg.scheme.gap_extend();
    int w = cfg.band.base_width(), cap = cfg.band.cap();
    Rational slope = cfg.band.slope();
    bool round = cfg.band.round_to_multiple();
    std::size_t scheme_line = 0, band_line = 0;

    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        std::string_view line = detail::chomp(raw);
        line = detail::trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(source, line_no, "expected key = value");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        auto fail = [&](const std::string& why) -> ConfigError { return ConfigError(source, line_no, key + ": " + why); };
        auto as_int = [&](int lo = 0) {
            const auto v = parse_number<int>(value);
            if (!v || *v < lo) throw fail("expected an integer >= " + std::to_string(lo));
            return *v;
        };
        auto as_u32 = [&] {
            const auto v = parse_number<std::uint32_t>(value);
            if (!v) throw fail("expected a non-negative integer");
            return *v;
        };
        auto as_double = [&] {
            const auto v = parse_number<double>(value);
            if (!v || !(*v >= 0)) throw fail("expected a non-negative number");
            return *v;
        };
        auto as_switch = [&] {
            const auto v = parse_switch(value);
            if (!v) throw fail("expected on/off");
            return *v;
        };

        if (key.starts_with("scheme.")) scheme_line = line_no;
        if (key.starts_with("band.")) band_line = line_no;

        if (key == "scheme.preset") {
            const auto p = detail::scheme_preset(value);
            if (!p) throw fail("unknown preset (minimap2, bwa_mem, affine_edit, unit_edit)");
            match = p->match(), mismatch = p->mismatch(), gap_open = p->gap_open(), gap_extend = p->gap_extend();
        } else if (key == "scheme.match") {
            match = as_int();
        } else if (key == "scheme.mismatch") {
            mismatch = as_int();
        } else if (key == "scheme.gap_open") {
            gap_open = as_int();
        } else if (key == "scheme.gap_extend") {
            gap_extend = as_int();
        } else if (key == "band.w") {
            w = as_int(1);
        } else if (key == "band.cap") {
            cap = as_int(1);
        } else if (key == "band.slope") {
            const auto r = parse_rational(value);
            if (!r) throw fail("expected a rational like 1/100");
            slope = *r;
        } else if (key == "band.round") {
            round = as_switch();
        } else if (key == "band.adaptive") {
            cfg.wavefront.adaptive = as_switch();
        } else if (key == "band.tie") {
            if (value == "down") cfg.wavefront.tie = Direction::Down;
            else if (value == "right") cfg.wavefront.tie = Direction::Right;
            else throw fail("expected down or right");
        } else if (key == "sim.profile") {
            try {
                cfg.profile = profile_by_name(value).name;
            } catch (const Error& e) {
                throw fail(e.what());
            }
        } else if (key == "sim.insertion_continue") {
            const double c = as_double();
            if (c >= 1.0) throw fail("must be below 1");
            cfg.insertion_continue = c;
        } else if (key == "run.seed") {
            const auto v = parse_number<std::uint64_t>(value);
            if (!v) throw fail("expected an unsigned integer");
            cfg.seed = *v;
        } else if (key == "run.threads") {
            cfg.threads = static_cast<unsigned>(as_int(1));
        } else if (key == "arch.tiles") {
            cfg.arch.tiles = as_u32();
        } else if (key == "arch.subarray_rows") {
            cfg.arch.subarray_rows = as_u32();
        } else if (key == "arch.subarray_cols") {
            cfg.arch.subarray_cols = as_u32();
        } else if (key == "arch.tbms_per_tile") {
            cfg.arch.tbms_per_tile = as_u32();
        } else if (key == "arch.column_width") {
            cfg.arch.column_width = as_u32();
        } else if (key == "arch.clock_hz") {
            cfg.arch.clock_hz = as_double();
        } else if (key == "arch.write_endurance") {
            cfg.arch.write_endurance = as_double();
        } else if (key == "arch.traceback_fixed_cycles") {
            cfg.arch.traceback_fixed_cycles = as_u32();
        } else if (key == "arch.traceback_energy_per_cycle") {
            cfg.arch.traceback_energy_per_cycle = as_double();
        } else if (key == "arch.traceback_walk_cycles") {
            cfg.arch.traceback_walk_cycles = as_u32();
        } else if (key == "arch.peripheral_area_per_bit") {
            cfg.arch.peripheral_area_per_bit = as_double();
        } else if (key == "arch.cycles.xor") {
            cfg.arch.cycles.xor_per_bit = as_u32();
        } else if (key == "arch.cycles.add") {
            cfg.arch.cycles.add_per_bit = as_u32();
        } else if (key == "arch.cycles.invert") {
            cfg.arch.cycles.invert_per_bit = as_u32();
        } else if (key == "arch.cycles.select") {
            cfg.arch.cycles.select_per_bit = as_u32();
        } else if (key == "arch.cycles.copy") {
            cfg.arch.cycles.copy_per_row = as_u32();
        } else if (key == "arch.cycles.write_row") {
            cfg.arch.cycles.write_per_row = as_u32();
        } else if (key.starts_with("arch.energy.")) {
            Primitive p;
            try {
                p = primitive_from_name(std::string_view(key).substr(12));
            } catch (const UnknownPrimitive& e) {
                throw fail(e.what());
            }
            cfg.arch.energy_per_cycle[static_cast<std::size_t>(p)] = as_double();
        } else {
            throw ConfigError(source, line_no, "unknown key '" + key + "'");
        }
    }
    try {
        cfg.scheme = ScoringScheme(match, mismatch, gap_open, gap_extend);
    } catch (const Error& e) {
        throw ConfigError(source, scheme_line, e.what());
    }
    try {
        cfg.band = BandPolicy(w, slope, cap, round);
    } catch (const Error& e) {
        throw ConfigError(source, band_line, e.what());
    }
    try {
        cfg.arch.validate();
    } catch (const Error& e) {
        throw ConfigError(source, 0, e.what());
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    auto in = detail::open_input(path);
    return parse_run_config(in, path);
}

}  // namespace diffband

#endif
