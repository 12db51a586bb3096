#ifndef DIFFBAND_ORACLE_HPP
#define DIFFBAND_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "diffband/core.hpp"
#include "diffband/grid.hpp"

namespace diffband {

/// Marks gap states that cannot be entered (row 0 for E, column 0 for F).
inline constexpr std::int64_t kForbidden = std::numeric_limits<std::int64_t>::min() / 2;

/* H: best score ending at (i, j).
 * E: best score ending at (i, j) in a deletion (vertical move, consumes reference).
 * F: best score ending at (i, j) in an insertion (horizontal move, consumes query). */
struct DpMatrices {
    Grid<std::int64_t> H;
    Grid<std::int64_t> E;
    Grid<std::int64_t> F;
};

inline DpMatrices full_dp_matrices(const NucleotideSequence& reference, const NucleotideSequence& query,
                                   const ScoringScheme& scheme) {
    require_non_empty(reference, query);
    const std::size_t m = reference.size(), n = query.size();
    const std::int64_t o = scheme.gap_open(), e = scheme.gap_extend(), g = scheme.gap_first();
    DpMatrices dp{Grid<std::int64_t>(m + 1, n + 1, 0), Grid<std::int64_t>(m + 1, n + 1, kForbidden),
                  Grid<std::int64_t>(m + 1, n + 1, kForbidden)};
    for (std::size_t i = 1; i <= m; ++i) dp.H(i, 0) = -o - static_cast<std::int64_t>(i) * e;
    for (std::size_t j = 1; j <= n; ++j) dp.H(0, j) = -o - static_cast<std::int64_t>(j) * e;
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            const std::int64_t ev = std::max(dp.H(i - 1, j) - g, dp.E(i - 1, j) - e);
            const std::int64_t fv = std::max(dp.H(i, j - 1) - g, dp.F(i, j - 1) - e);
            const std::int64_t dv = dp.H(i - 1, j - 1) + scheme.substitution(reference[i - 1], query[j - 1]);
            dp.E(i, j) = ev;
            dp.F(i, j) = fv;
            dp.H(i, j) = std::max({dv, ev, fv});
        }
    }
    return dp;
}

/// Traceback over full matrices. Priority M > D > I; inside a gap, opening wins ties.
inline Cigar oracle_traceback(const DpMatrices& dp, const NucleotideSequence& reference,
                              const NucleotideSequence& query, const ScoringScheme& scheme) {
    enum class State { H, E, F } state = State::H;
    const std::int64_t g = scheme.gap_first();
    std::size_t i = reference.size(), j = query.size();
    Cigar rev;
    while (i > 0 || j > 0) {
        if (i == 0) {
            rev.push(EditOp::Insertion, static_cast<std::uint32_t>(j));
            break;
        }
        if (j == 0) {
            rev.push(EditOp::Deletion, static_cast<std::uint32_t>(i));
            break;
        }
        switch (state) {
            case State::H: {
                const std::int64_t h = dp.H(i, j);
                if (h == dp.H(i - 1, j - 1) + scheme.substitution(reference[i - 1], query[j - 1])) {
                    rev.push(EditOp::MatchOrMismatch);
                    --i;
                    --j;
                } else if (h == dp.E(i, j)) {
                    state = State::E;
                } else {
                    state = State::F;
                }
                break;
            }
            case State::E:
                rev.push(EditOp::Deletion);
                state = dp.E(i, j) == dp.H(i - 1, j) - g ? State::H : State::E;
                --i;
                break;
            case State::F:
                rev.push(EditOp::Insertion);
                state = dp.F(i, j) == dp.H(i, j - 1) - g ? State::H : State::F;
                --j;
                break;
        }
    }
    return rev.reversed();
}

inline AlignmentOutcome full_dp_align(const NucleotideSequence& reference, const NucleotideSequence& query,
                                      const ScoringScheme& scheme) {
    const DpMatrices dp = full_dp_matrices(reference, query, scheme);
    AlignmentOutcome out;
    out.score = dp.H(reference.size(), query.size());
    out.cigar = oracle_traceback(dp, reference, query, scheme);
    out.cells_computed = static_cast<std::uint64_t>(reference.size()) * query.size();
    return out;
}

/// Score only, O(n) memory.
inline std::int64_t full_dp_score(const NucleotideSequence& reference, const NucleotideSequence& query,
                                  const ScoringScheme& scheme) {
    require_non_empty(reference, query);
    const std::size_t m = reference.size(), n = query.size();
    const std::int64_t o = scheme.gap_open(), e = scheme.gap_extend(), g = scheme.gap_first();
    std::vector<std::int64_t> h(n + 1), ecol(n + 1, kForbidden);
    for (std::size_t j = 1; j <= n; ++j) h[j] = -o - static_cast<std::int64_t>(j) * e;
    h[0] = 0;
    const auto q = query.bases();
    for (std::size_t i = 1; i <= m; ++i) {
        std::int64_t diag = h[0];
        h[0] = -o - static_cast<std::int64_t>(i) * e;
        std::int64_t f = kForbidden;
        const Base r = reference[i - 1];
        for (std::size_t j = 1; j <= n; ++j) {
            const std::int64_t ev = std::max(h[j] - g, ecol[j] - e);
            f = std::max(h[j - 1] - g, f - e);
            const std::int64_t next = std::max({diag + scheme.substitution(r, q[j - 1]), ev, f});
            diag = h[j];
            ecol[j] = ev;
            h[j] = next;
        }
    }
    return h[n];
}

struct EditDistanceResult {
    std::int64_t distance = 0;
    Cigar cigar;
};

/// Unit-cost Levenshtein distance with a traceback (priority M > D > I).
inline EditDistanceResult edit_distance_full(const NucleotideSequence& reference, const NucleotideSequence& query) {
    require_non_empty(reference, query);
    const std::size_t m = reference.size(), n = query.size();
    Grid<std::int64_t> d(m + 1, n + 1, 0);
    for (std::size_t i = 0; i <= m; ++i) d(i, 0) = static_cast<std::int64_t>(i);
    for (std::size_t j = 0; j <= n; ++j) d(0, j) = static_cast<std::int64_t>(j);
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            d(i, j) = std::min({d(i - 1, j - 1) + (reference[i - 1] != query[j - 1] ? 1 : 0), d(i - 1, j) + 1,
                                d(i, j - 1) + 1});
    Cigar rev;
    std::size_t i = m, j = n;
    while (i > 0 && j > 0) {
        if (d(i, j) == d(i - 1, j - 1) + (reference[i - 1] != query[j - 1] ? 1 : 0)) {
            rev.push(EditOp::MatchOrMismatch);
            --i;
            --j;
        } else if (d(i, j) == d(i - 1, j) + 1) {
            rev.push(EditOp::Deletion);
            --i;
        } else {
            rev.push(EditOp::Insertion);
            --j;
        }
    }
    rev.push(EditOp::Deletion, static_cast<std::uint32_t>(i));
    rev.push(EditOp::Insertion, static_cast<std::uint32_t>(j));
    return {d(m, n), rev.reversed()};
}

/// Number of non-identity operations an edit path implies.
inline std::int64_t count_edits(const NucleotideSequence& reference, const NucleotideSequence& query, const Cigar& cigar) {
    if (cigar.reference_length() != reference.size() || cigar.query_length() != query.size())
        throw CigarShapeMismatch("cigar shape does not match sequences");
    std::int64_t edits = 0;
    std::size_t i = 0, j = 0;
    for (const auto& run : cigar.runs()) {
        if (run.op == EditOp::MatchOrMismatch) {
            for (std::uint32_t k = 0; k < run.length; ++k, ++i, ++j) edits += reference[i] != query[j] ? 1 : 0;
        } else {
            edits += run.length;
            (run.op == EditOp::Deletion ? i : j) += run.length;
        }
    }
    return edits;
}

}  // namespace diffband

#endif
