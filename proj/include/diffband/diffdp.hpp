#ifndef DIFFBAND_DIFFDP_HPP
#define DIFFBAND_DIFFDP_HPP

#include <algorithm>
#include <cstdint>
#include <string>

#include "diffband/core.hpp"
#include "diffband/grid.hpp"

namespace diffband {

/* Adjacent-cell score differences, all relative to absolute H:
 *   dH[i][j] = H[i][j] - H[i-1][j]       (i >= 1)
 *   dV[i][j] = H[i][j] - H[i][j-1]       (j >= 1)
 *   dE[i][j] = E[i+1][j] - H[i][j]       (j >= 1)
 *   dF[i][j] = F[i][j+1] - H[i][j]       (i >= 1)
 * Entries outside those domains are zero and carry no meaning. */
struct DiffMatrices {
    Grid<std::int64_t> dH;
    Grid<std::int64_t> dV;
    Grid<std::int64_t> dE;
    Grid<std::int64_t> dF;
};

inline DiffMatrices diff_dp_matrices(const NucleotideSequence& reference, const NucleotideSequence& query,
                                     const ScoringScheme& scheme) {
    require_non_empty(reference, query);
    const std::size_t m = reference.size(), n = query.size();
    const std::int64_t o = scheme.gap_open(), e = scheme.gap_extend(), g = scheme.gap_first();
    DiffMatrices d{Grid<std::int64_t>(m + 1, n + 1), Grid<std::int64_t>(m + 1, n + 1), Grid<std::int64_t>(m + 1, n + 1),
                   Grid<std::int64_t>(m + 1, n + 1)};
    for (std::size_t j = 1; j <= n; ++j) {
        d.dV(0, j) = j == 1 ? -g : -e;
        d.dE(0, j) = -g;
    }
    for (std::size_t i = 1; i <= m; ++i) {
        d.dH(i, 0) = i == 1 ? -g : -e;
        d.dF(i, 0) = -g;
    }
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            const std::int64_t a = std::max({std::int64_t{scheme.substitution(reference[i - 1], query[j - 1])},
                                             d.dE(i - 1, j) + d.dV(i - 1, j), d.dF(i, j - 1) + d.dH(i, j - 1)});
            const std::int64_t dh = a - d.dV(i - 1, j);
            const std::int64_t dv = a - d.dH(i, j - 1);
            d.dH(i, j) = dh;
            d.dV(i, j) = dv;
            d.dE(i, j) = std::max(-o, d.dE(i - 1, j) - dh) - e;
            d.dF(i, j) = std::max(-o, d.dF(i, j - 1) - dv) - e;
        }
    }
    return d;
}

/// Absolute H from unshifted differences, accumulated down each column.
inline Grid<std::int64_t> reconstruct_from_diffs(const DiffMatrices& d, const ScoringScheme& scheme) {
    const std::size_t rows = d.dH.rows(), cols = d.dH.cols();
    Grid<std::int64_t> h(rows, cols, 0);
    for (std::size_t j = 1; j < cols; ++j) h(0, j) = -scheme.gap_open() - static_cast<std::int64_t>(j) * scheme.gap_extend();
    for (std::size_t i = 1; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) h(i, j) = h(i - 1, j) + d.dH(i, j);
    return h;
}

/* ---- shifted (primed) form ----
 * dH' = dH + G, dV' = dV + G with G = o + e.
 * dE'[i][j] = dE[i][j] + dV[i][j] + 2G, dF'[i][j] = dF[i][j] + dH[i][j] + 2G.
 * A'[i][j] = H[i][j] - H[i-1][j-1] + 2G, s' = s + 2G.
 * All stored values lie in [0, M + 2G]. s' itself may be negative and is never stored. */

using PrimedValue = std::uint16_t;

/// Shifted substitution score.
constexpr int primed_substitution(Base r, Base q, const ScoringScheme& scheme) noexcept {
    return scheme.substitution(r, q) + 2 * scheme.gap_first();
}

/// Previous-iteration values a cell reads: up is (i-1, j), left is (i, j-1).
struct PrimedInputs {
    int sub;  // s'
    int de_up;
    int dv_up;
    int df_left;
    int dh_left;
};

struct PrimedCell {
    int a;
    int dh;
    int dv;
    int de;
    int df;
    friend constexpr bool operator==(const PrimedCell&, const PrimedCell&) = default;
};

constexpr int primed_a(const PrimedInputs& in) noexcept { return std::max({in.sub, in.de_up, in.df_left}); }

// The four updates below read only A' and previous-iteration values, so any order gives the same cell.
constexpr int primed_dh(int a, const PrimedInputs& in) noexcept { return a - in.dv_up; }
constexpr int primed_dv(int a, const PrimedInputs& in) noexcept { return a - in.dh_left; }
constexpr int primed_de(int a, const PrimedInputs& in, int gap_open) noexcept {
    return std::max(a, in.de_up + gap_open) - in.dh_left;
}
constexpr int primed_df(int a, const PrimedInputs& in, int gap_open) noexcept {
    return std::max(a, in.df_left + gap_open) - in.dv_up;
}

constexpr PrimedCell primed_update(const PrimedInputs& in, int gap_open) noexcept {
    const int a = primed_a(in);
    return {a, primed_dh(a, in), primed_dv(a, in), primed_de(a, in, gap_open), primed_df(a, in, gap_open)};
}

/// Boundary seed for row 0 (dV', dE') and column 0 (dH', dF') at 1-based offset k.
constexpr int primed_boundary_seed(std::size_t k, const ScoringScheme& scheme) noexcept {
    return k == 1 ? 0 : scheme.gap_open();
}

inline PrimedValue checked_primed(int v, const ScoringScheme& scheme, const char* what) {
    if (v < 0 || v > scheme.primed_max())
        throw PrecisionOverflow(std::string(what) + " = " + std::to_string(v) + " outside [0, " +
                                std::to_string(scheme.primed_max()) + "]");
    return static_cast<PrimedValue>(v);
}

/// A' is defined on interior cells only; the seeded borders of the other grids follow the comment above.
struct PrimedDiffMatrices {
    Grid<PrimedValue> a;
    Grid<PrimedValue> dH;
    Grid<PrimedValue> dV;
    Grid<PrimedValue> dE;
    Grid<PrimedValue> dF;
};

inline PrimedDiffMatrices parallel_diff_dp_matrices(const NucleotideSequence& reference, const NucleotideSequence& query,
                                                    const ScoringScheme& scheme) {
    require_non_empty(reference, query);
    const std::size_t m = reference.size(), n = query.size();
    PrimedDiffMatrices p{Grid<PrimedValue>(m + 1, n + 1), Grid<PrimedValue>(m + 1, n + 1),
                         Grid<PrimedValue>(m + 1, n + 1), Grid<PrimedValue>(m + 1, n + 1),
                         Grid<PrimedValue>(m + 1, n + 1)};
    for (std::size_t j = 1; j <= n; ++j) {
        const auto seed = checked_primed(primed_boundary_seed(j, scheme), scheme, "row seed");
        p.dV(0, j) = seed;
        p.dE(0, j) = seed;
    }
    for (std::size_t i = 1; i <= m; ++i) {
        const auto seed = checked_primed(primed_boundary_seed(i, scheme), scheme, "column seed");
        p.dH(i, 0) = seed;
        p.dF(i, 0) = seed;
    }
    const int o = scheme.gap_open();
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            const PrimedInputs in{primed_substitution(reference[i - 1], query[j - 1], scheme), p.dE(i - 1, j),
                                  p.dV(i - 1, j), p.dF(i, j - 1), p.dH(i, j - 1)};
            const PrimedCell c = primed_update(in, o);
            p.a(i, j) = checked_primed(c.a, scheme, "A'");
            p.dH(i, j) = checked_primed(c.dh, scheme, "dH'");
            p.dV(i, j) = checked_primed(c.dv, scheme, "dV'");
            p.dE(i, j) = checked_primed(c.de, scheme, "dE'");
            p.dF(i, j) = checked_primed(c.df, scheme, "dF'");
        }
    }
    return p;
}

/// H[i][j] = H[i-1][j] + dH'[i][j] - G, seeded from the global row-0 boundary.
inline Grid<std::int64_t> reconstruct_scores(const PrimedDiffMatrices& p, const ScoringScheme& scheme) {
    const std::size_t rows = p.dH.rows(), cols = p.dH.cols();
    const std::int64_t g = scheme.gap_first();
    Grid<std::int64_t> h(rows, cols, 0);
    for (std::size_t j = 1; j < cols; ++j) h(0, j) = -scheme.gap_open() - static_cast<std::int64_t>(j) * scheme.gap_extend();
    for (std::size_t i = 1; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) h(i, j) = h(i - 1, j) + p.dH(i, j) - g;
    return h;
}

/// Undo the shift; result matches diff_dp_matrices on the shared domain.
inline DiffMatrices unprime(const PrimedDiffMatrices& p, const ScoringScheme& scheme) {
    const std::size_t rows = p.dH.rows(), cols = p.dH.cols();
    const std::int64_t g = scheme.gap_first();
    DiffMatrices d{Grid<std::int64_t>(rows, cols), Grid<std::int64_t>(rows, cols), Grid<std::int64_t>(rows, cols),
                   Grid<std::int64_t>(rows, cols)};
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (i >= 1) {
                d.dH(i, j) = std::int64_t{p.dH(i, j)} - g;
                d.dF(i, j) = std::int64_t{p.dF(i, j)} - p.dH(i, j) - g;
            }
            if (j >= 1) {
                d.dV(i, j) = std::int64_t{p.dV(i, j)} - g;
                d.dE(i, j) = std::int64_t{p.dE(i, j)} - p.dV(i, j) - g;
            }
        }
    }
    return d;
}

/// Observed extremes of the unshifted differences, for range auditing.
struct DiffRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

struct DiffRangeReport {
    DiffRange dH, dV, dE, dF;
};

inline DiffRangeReport scan_diff_ranges(const DiffMatrices& d) {
    const std::size_t rows = d.dH.rows(), cols = d.dH.cols();
    auto scan = [&](const Grid<std::int64_t>& g, std::size_t row0, std::size_t col0) {
        DiffRange r{g(row0, col0), g(row0, col0)};
        for (std::size_t i = row0; i < rows; ++i)
            for (std::size_t j = col0; j < cols; ++j) {
                r.lo = std::min(r.lo, g(i, j));
                r.hi = std::max(r.hi, g(i, j));
            }
        return r;
    };
    return {scan(d.dH, 1, 0), scan(d.dV, 0, 1), scan(d.dE, 0, 1), scan(d.dF, 1, 0)};
}

}  // namespace diffband

#endif
