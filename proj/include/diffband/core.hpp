#ifndef DIFFBAND_CORE_HPP
#define DIFFBAND_CORE_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffband/errors.hpp"

namespace diffband {

/* ---- nucleotides ---- */

/// 2-bit nucleotide code.
enum class Base : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

constexpr std::optional<Base> base_from_char(char c) noexcept {
    switch (c) {
        case 'A': return Base::A;
        case 'C': return Base::C;
        case 'G': return Base::G;
        case 'T': return Base::T;
        default: return std::nullopt;
    }
}

constexpr char to_char(Base b) noexcept { return "ACGT"[static_cast<int>(b)]; }

class NucleotideSequence {
public:
    NucleotideSequence() = default;
    explicit NucleotideSequence(std::vector<Base> bases) : bases_(std::move(bases)) {}

    /// Strict parse: only upper-case A, C, G, T are accepted.
    static NucleotideSequence parse(std::string_view text) {
        std::vector<Base> out;
        out.reserve(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            auto b = base_from_char(text[i]);
            if (!b) throw InvalidSequence(std::string("illegal nucleotide '") + text[i] + "'", i);
            out.push_back(*b);
        }
        return NucleotideSequence(std::move(out));
    }

    std::size_t size() const noexcept { return bases_.size(); }
    bool empty() const noexcept { return bases_.empty(); }
    Base operator[](std::size_t i) const noexcept { return bases_[i]; }
    std::span<const Base> bases() const noexcept { return bases_; }

    std::string str() const {
        std::string s(bases_.size(), 'A');
        std::transform(bases_.begin(), bases_.end(), s.begin(), to_char);
        return s;
    }

    NucleotideSequence reversed() const { return NucleotideSequence({bases_.rbegin(), bases_.rend()}); }

    NucleotideSequence slice(std::size_t offset, std::size_t length) const {
        auto first = bases_.begin() + static_cast<std::ptrdiff_t>(offset);
        return NucleotideSequence({first, first + static_cast<std::ptrdiff_t>(length)});
    }

    friend bool operator==(const NucleotideSequence&, const NucleotideSequence&) = default;

private:
    std::vector<Base> bases_;
};

/* ---- scoring ---- */

/// Affine-gap scheme. Scores are maximised: +match, -mismatch, and a gap of
/// length g costs gap_open + g * gap_extend.
class ScoringScheme {
public:
    static constexpr int kParameterLimit = 10000;

    constexpr ScoringScheme(int match, int mismatch, int gap_open, int gap_extend)
        : match_(match), mismatch_(mismatch), gap_open_(gap_open), gap_extend_(gap_extend) {
        if (match < 0 || mismatch < 0 || gap_open < 0 || gap_extend < 0)
            throw InvalidScheme("scoring parameters must be non-negative");
        if (gap_open + gap_extend == 0) throw InvalidScheme("gap_open + gap_extend must be positive");
        if (std::max({match, mismatch, gap_open, gap_extend}) > kParameterLimit)
            throw InvalidScheme("scoring parameter exceeds " + std::to_string(kParameterLimit));
    }

    static constexpr ScoringScheme minimap2() { return {2, 4, 4, 2}; }
    static constexpr ScoringScheme bwa_mem() { return {1, 4, 6, 1}; }
    /// Affine edit scheme: every operation costs one, first gap base costs two.
    static constexpr ScoringScheme affine_edit() { return {0, 1, 1, 1}; }
    /// Unit-cost scheme whose optimum is minus the Levenshtein distance.
    static constexpr ScoringScheme unit_edit() { return {0, 1, 0, 1}; }

    constexpr int match() const noexcept { return match_; }
    constexpr int mismatch() const noexcept { return mismatch_; }
    constexpr int gap_open() const noexcept { return gap_open_; }
    constexpr int gap_extend() const noexcept { return gap_extend_; }

    constexpr int max_substitution() const noexcept { return std::max(match_, mismatch_); }
    /// Cost of a one-base gap.
    constexpr int gap_first() const noexcept { return gap_open_ + gap_extend_; }
    /// Largest value a shifted difference can hold.
    constexpr int primed_max() const noexcept { return max_substitution() + 2 * gap_first(); }

    constexpr int substitution(Base r, Base q) const noexcept { return r == q ? match_ : -mismatch_; }

    friend constexpr bool operator==(const ScoringScheme&, const ScoringScheme&) = default;

private:
    int match_;
    int mismatch_;
    int gap_open_;
    int gap_extend_;
};

/// ceil(log2(M + 2o + 2e + 1)).
constexpr int min_bit_width(const ScoringScheme& s) noexcept {
    return static_cast<int>(std::bit_width(static_cast<unsigned>(s.primed_max())));
}

/* ---- bandwidth ---- */

struct Rational {
    std::int64_t num;
    std::int64_t den;
    friend constexpr bool operator==(const Rational&, const Rational&) = default;
};

class BandPolicy {
public:
    constexpr BandPolicy() : BandPolicy(10) {}
    constexpr explicit BandPolicy(int base_width, Rational slope = {1, 100}, int cap = 100, bool round_to_multiple = true)
        : w_(base_width), slope_(slope), cap_(cap), round_(round_to_multiple) {
        if (base_width < 1) throw InvalidPolicy("base bandwidth must be at least 1");
        if (cap < base_width) throw InvalidPolicy("bandwidth cap must be >= base bandwidth");
        if (slope.den <= 0 || slope.num < 0) throw InvalidPolicy("slope must be a non-negative rational");
    }

    constexpr int base_width() const noexcept { return w_; }
    constexpr Rational slope() const noexcept { return slope_; }
    constexpr int cap() const noexcept { return cap_; }
    constexpr bool round_to_multiple() const noexcept { return round_; }

    friend constexpr bool operator==(const BandPolicy&, const BandPolicy&) = default;

private:
    int w_;
    Rational slope_;
    int cap_;
    bool round_;
};

namespace detail {
constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) noexcept { return (a + b - 1) / b; }
}  // namespace detail

/// min(w + slope*L, cap), optionally rounded up to a multiple of w; exact rational arithmetic.
constexpr int compute_bandwidth(const BandPolicy& p, std::size_t length) {
    if (length < 1) throw InvalidPolicy("bandwidth requested for empty sequence");
    const std::int64_t den = p.slope().den;
    const std::int64_t cap_scaled = std::int64_t{p.cap()} * den;
    std::int64_t raw = std::int64_t{p.base_width()} * den + p.slope().num * static_cast<std::int64_t>(length);
    raw = std::min(raw, cap_scaled);
    std::int64_t band = p.round_to_multiple()
                            ? detail::ceil_div(raw, std::int64_t{p.base_width()} * den) * p.base_width()
                            : detail::ceil_div(raw, den);
    return static_cast<int>(std::min<std::int64_t>(band, p.cap()));
}

/// Bandwidth used for an (m, n) pair: the policy value, never wider than min(m, n) + 1.
constexpr int effective_bandwidth(const BandPolicy& p, std::size_t m, std::size_t n) {
    const int b = compute_bandwidth(p, std::max(m, n));
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(b), std::min(m, n) + 1));
}

/* ---- edit paths ---- */

/// 2-bit traceback code. Unset marks cells that carry no operation.
enum class EditOp : std::uint8_t { MatchOrMismatch = 0b00, Deletion = 0b01, Insertion = 0b10, Unset = 0b11 };

constexpr char cigar_letter(EditOp op) noexcept {
    switch (op) {
        case EditOp::MatchOrMismatch: return 'M';
        case EditOp::Deletion: return 'D';
        case EditOp::Insertion: return 'I';
        default: return '?';
    }
}

enum class Direction : std::uint8_t { Right = 0, Down = 1 };

struct CigarRun {
    EditOp op;
    std::uint32_t length;
    friend constexpr bool operator==(const CigarRun&, const CigarRun&) = default;
};

/// Run-length edit path. Deletion consumes reference only; Insertion consumes query only.
class Cigar {
public:
    Cigar() = default;

    void push(EditOp op, std::uint32_t count = 1) {
        if (count == 0) return;
        if (op == EditOp::Unset) throw CigarShapeMismatch("unset operation in edit path");
        if (!runs_.empty() && runs_.back().op == op)
            runs_.back().length += count;
        else
            runs_.push_back({op, count});
    }

    static Cigar parse(std::string_view text) {
        Cigar c;
        std::uint64_t len = 0;
        bool have_digits = false;
        for (char ch : text) {
            if (ch >= '0' && ch <= '9') {
                len = len * 10 + static_cast<std::uint64_t>(ch - '0');
                have_digits = true;
                continue;
            }
            EditOp op = ch == 'M' ? EditOp::MatchOrMismatch
                        : ch == 'D' ? EditOp::Deletion
                        : ch == 'I' ? EditOp::Insertion
                                    : EditOp::Unset;
            if (op == EditOp::Unset || !have_digits || len == 0)
                throw CigarShapeMismatch("malformed cigar '" + std::string(text) + "'");
            c.push(op, static_cast<std::uint32_t>(len));
            len = 0;
            have_digits = false;
        }
        if (have_digits) throw CigarShapeMismatch("malformed cigar '" + std::string(text) + "'");
        return c;
    }

    std::span<const CigarRun> runs() const noexcept { return runs_; }
    bool empty() const noexcept { return runs_.empty(); }

    std::size_t reference_length() const noexcept { return consumed(EditOp::Deletion); }
    std::size_t query_length() const noexcept { return consumed(EditOp::Insertion); }
    /// M + I + D count.
    std::size_t path_length() const noexcept {
        std::size_t t = 0;
        for (const auto& r : runs_) t += r.length;
        return t;
    }

    std::string str() const {
        std::string s;
        for (const auto& r : runs_) {
            s += std::to_string(r.length);
            s += cigar_letter(r.op);
        }
        return s;
    }

    Cigar reversed() const {
        Cigar c;
        c.runs_.assign(runs_.rbegin(), runs_.rend());
        return c;
    }

    friend bool operator==(const Cigar&, const Cigar&) = default;

private:
    std::size_t consumed(EditOp gap) const noexcept {
        std::size_t t = 0;
        for (const auto& r : runs_)
            if (r.op == EditOp::MatchOrMismatch || r.op == gap) t += r.length;
        return t;
    }

    std::vector<CigarRun> runs_;
};

struct AlignmentOutcome {
    std::int64_t score = 0;
    Cigar cigar;
    int band_used = 0;  // 0 for unbanded aligners
    std::vector<Direction> direction_log;
    std::uint64_t cells_computed = 0;
    std::uint64_t traceback_cells = 0;
    int max_primed_value = 0;
};

/// Independent rescoring of an edit path.
inline std::int64_t score_cigar(const NucleotideSequence& reference, const NucleotideSequence& query, const Cigar& cigar,
                                const ScoringScheme& scheme) {
    if (cigar.reference_length() != reference.size() || cigar.query_length() != query.size())
        throw CigarShapeMismatch("cigar " + cigar.str() + " consumes " + std::to_string(cigar.reference_length()) + "/" +
                                 std::to_string(cigar.query_length()) + " bases, sequences have " +
                                 std::to_string(reference.size()) + "/" + std::to_string(query.size()));
    std::int64_t total = 0;
    std::size_t i = 0, j = 0;
    for (const auto& run : cigar.runs()) {
        switch (run.op) {
            case EditOp::MatchOrMismatch:
                for (std::uint32_t k = 0; k < run.length; ++k, ++i, ++j)
                    total += scheme.substitution(reference[i], query[j]);
                break;
            case EditOp::Deletion:
                total -= scheme.gap_open() + std::int64_t{run.length} * scheme.gap_extend();
                i += run.length;
                break;
            case EditOp::Insertion:
                total -= scheme.gap_open() + std::int64_t{run.length} * scheme.gap_extend();
                j += run.length;
                break;
            case EditOp::Unset: throw CigarShapeMismatch("unset operation in edit path");
        }
    }
    return total;
}

inline void require_non_empty(const NucleotideSequence& reference, const NucleotideSequence& query) {
    if (reference.empty()) throw InvalidSequence("empty reference", 0);
    if (query.empty()) throw InvalidSequence("empty query", 0);
}

}  // namespace diffband

#endif
