#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>

#include "diffband/banded.hpp"
#include "diffband/diffdp.hpp"
#include "diffband/oracle.hpp"
#include "support/reference_models.hpp"

namespace diffband {
namespace {

using testing::seq;

WavefrontOptions no_traceback(bool adaptive = true) { return {adaptive, Direction::Down, false}; }

TEST(BandedAlign, IdentityStaysOnDiagonal) {
    testing::PairFactory f(41);
    for (std::size_t len : {1u, 2u, 7u, 50u, 333u, 1000u}) {
        const auto s = seq(f.random_string(len));
        const auto out = banded_align(s, s, ScoringScheme::minimap2(), BandPolicy(10));
        EXPECT_EQ(out.score, 2 * static_cast<std::int64_t>(len));
        EXPECT_EQ(out.cigar.str(), std::to_string(len) + "M");
    }
}

TEST(BandedAlign, FrozenExamplePair) {
    const auto r = seq("ACGTCCG"), q = seq("AGTTATC");
    for (const auto& s : {ScoringScheme::minimap2(), ScoringScheme::bwa_mem()}) {
        const auto out = banded_align(r, q, s, BandPolicy(10));
        EXPECT_EQ(out.score, full_dp_score(r, q, s));
        EXPECT_EQ(score_cigar(r, q, out.cigar, s), out.score);
    }
}

// With B >= m + n nothing is clipped: every in-grid band slot must equal the full-matrix value.
TEST(Wavefront, BandShadowsFullMatricesWhenWide) {
    testing::PairFactory f(42);
    for (int t = 0; t < 40; ++t) {
        const auto r = seq(f.random_string(f.length(1, 40)));
        const auto q = seq(f.mutate(r.str(), 0.3));
        for (const auto& scheme : {ScoringScheme::minimap2(), ScoringScheme::bwa_mem()}) {
            const auto full = parallel_diff_dp_matrices(r, q, scheme);
            const auto h = full_dp_matrices(r, q, scheme).H;
            const int b = static_cast<int>(r.size() + q.size());
            WavefrontState st = start_wavefront(r.size(), q.size(), b, scheme);
            for (std::size_t step = 1; step < r.size() + q.size(); ++step) {
                step_wavefront(st, decide_direction(st, {}), r.bases(), q.bases(), scheme);
                for (int k = 0; k < b; ++k) {
                    const CellKind kind = st.kinds()[static_cast<std::size_t>(k)];
                    if (!in_grid(kind)) continue;
                    const auto i = static_cast<std::size_t>(st.cell_i(k)), j = static_cast<std::size_t>(st.cell_j(k));
                    ASSERT_EQ(st.scores()[static_cast<std::size_t>(k)], h(i, j));
                    if (kind != CellKind::Interior) continue;
                    ASSERT_EQ(st.a()[static_cast<std::size_t>(k)], full.a(i, j));
                    ASSERT_EQ(st.dh()[static_cast<std::size_t>(k)], full.dH(i, j));
                    ASSERT_EQ(st.dv()[static_cast<std::size_t>(k)], full.dV(i, j));
                    ASSERT_EQ(st.de()[static_cast<std::size_t>(k)], full.dE(i, j));
                    ASSERT_EQ(st.df()[static_cast<std::size_t>(k)], full.dF(i, j));
                }
            }
        }
    }
}

// Edge scores match the oracle whenever the edge slot is in the grid, even for narrow bands,
// as long as the band has not yet clipped the optimal path (identity inputs never do).
TEST(Wavefront, EdgeScoresTrackOracleOnIdentity) {
    const auto s = seq("ACGTTGCAACGTAGGCTTAC");
    const auto scheme = ScoringScheme::minimap2();
    const auto h = full_dp_matrices(s, s, scheme).H;
    WavefrontState st = start_wavefront(s.size(), s.size(), 6, scheme);
    for (std::size_t step = 1; step < 2 * s.size(); ++step) {
        step_wavefront(st, decide_direction(st, {}), s.bases(), s.bases(), scheme);
        const int center = 3;
        const auto i = st.cell_i(center), j = st.cell_j(center);
        if (i >= 0 && j >= 0 && i <= 20 && j <= 20 && std::abs(i - j) <= 1) {
            EXPECT_EQ(st.scores()[center], h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
        }
    }
}

TEST(Wavefront, IdentityKeepsBandCentred) {
    const auto s = seq("ACGTACGGTCAGTTACGATCGGATCCAGTACGGATTCAGGACTTAGCA");
    const auto scheme = ScoringScheme::minimap2();
    const int b = 10;
    WavefrontState st = start_wavefront(s.size(), s.size(), b, scheme);
    for (int step = 1; step <= 60; ++step) {
        step_wavefront(st, decide_direction(st, {}), s.bases(), s.bases(), scheme);
        // Centre of the band relative to the main diagonal, in anti-diagonal half-steps.
        const std::int64_t centre_twice = 2 * st.origin_i() + (b - 1) - st.diagonal();
        // While an edge is still outside the grid the default Down tie applies.
        if (step >= b) {
            EXPECT_LE(std::abs(centre_twice), 1) << "step " << step;
        }
    }
}

TEST(DecideDirection, TiesGoDownAndKnobFlipsThem) {
    const auto scheme = ScoringScheme::minimap2();
    WavefrontState st = start_wavefront(10, 10, 4, scheme);
    EXPECT_EQ(decide_direction(st, {true, Direction::Down, true}), Direction::Down);
    EXPECT_EQ(decide_direction(st, {true, Direction::Right, true}), Direction::Right);
}

TEST(DecideDirection, LongQueryInsertionShiftsTheBand) {
    testing::PairFactory f(43);
    const std::string left = f.random_string(150), right = f.random_string(150), extra = f.random_string(50);
    const auto r = seq(left + right), q = seq(left + extra + right);
    const auto scheme = ScoringScheme::minimap2();
    const int b = effective_bandwidth(BandPolicy(30), r.size(), q.size());
    WavefrontState st = start_wavefront(r.size(), q.size(), b, scheme);
    std::int64_t lowest = 0;
    for (std::size_t step = 1; step < r.size() + q.size(); ++step) {
        step_wavefront(st, decide_direction(st, {}), r.bases(), q.bases(), scheme);
        const std::int64_t centre_twice = 2 * st.origin_i() + (b - 1) - st.diagonal();
        // Before the inserted block the band sits on the main diagonal.
        if (step >= static_cast<std::size_t>(2 * b) && step <= 300) {
            EXPECT_LE(std::abs(centre_twice), 1) << "step " << step;
        }
        lowest = std::min(lowest, centre_twice);
    }
    // Afterwards it drifts right until centred on the diagonal shifted by the 50 inserted bases.
    EXPECT_GE(lowest, -54);
    EXPECT_LE(lowest, -46);
    const auto out = banded_align(r, q, scheme, BandPolicy(30));
    EXPECT_EQ(out.score, full_dp_score(r, q, scheme));
}

TEST(DecideDirection, NonAdaptiveFollowsMainDiagonal) {
    const auto r = seq("ACGTACGTACGTACGTACGT");
    const auto q = seq("ACGTACGTAC");
    const auto scheme = ScoringScheme::minimap2();
    const int b = 5;
    WavefrontState st = start_wavefront(r.size(), q.size(), b, scheme);
    for (std::size_t step = 1; step < r.size() + q.size(); ++step) {
        step_wavefront(st, decide_direction(st, {false, Direction::Down, false}), r.bases(), q.bases(), scheme);
        const std::int64_t offset = 2 * st.origin_i() + (b - 1) - st.diagonal();
        EXPECT_LE(std::abs(offset), 1);
    }
}

TEST(BandedAlign, WideBandReproducesOracleExactly) {
    testing::PairFactory f(44);
    for (int t = 0; t < 100; ++t) {
        const auto r = seq(f.random_string(f.length(1, 120)));
        const auto q = f.unit() < 0.7 ? seq(f.mutate(r.str(), 0.25)) : seq(f.random_string(f.length(1, 120)));
        for (const auto& s : {ScoringScheme::minimap2(), ScoringScheme::bwa_mem()}) {
            const auto want = full_dp_align(r, q, s);
            const auto got = banded_align_with_bandwidth(r, q, s, static_cast<int>(r.size() + q.size()));
            ASSERT_FALSE(got.escaped);
            ASSERT_EQ(got.outcome.score, want.score);
            ASSERT_EQ(got.outcome.cigar, want.cigar) << r.str() << " / " << q.str();
        }
    }
}

TEST(BandedAlign, InvariantsOnNoisyPairs) {
    testing::PairFactory f(45);
    for (int t = 0; t < 200; ++t) {
        const auto r = seq(f.random_string(f.length(1, 300)));
        const auto q = seq(f.mutate(r.str(), 0.15));
        const auto s = ScoringScheme::minimap2();
        const auto res = try_banded_align(r, q, s, BandPolicy(10));
        const auto& out = res.outcome;
        EXPECT_LE(out.cells_computed, (r.size() + q.size()) * static_cast<std::uint64_t>(out.band_used));
        EXPECT_LE(out.max_primed_value, (1 << min_bit_width(s)) - 1);
        EXPECT_EQ(out.direction_log.size(), r.size() + q.size() - 1);
        if (res.escaped) continue;
        EXPECT_EQ(out.cigar.reference_length(), r.size());
        EXPECT_EQ(out.cigar.query_length(), q.size());
        EXPECT_GE(out.cigar.path_length(), std::max(r.size(), q.size()));
        EXPECT_LE(out.cigar.path_length(), r.size() + q.size());
        EXPECT_EQ(score_cigar(r, q, out.cigar, s), out.score);
        EXPECT_LE(out.score, full_dp_score(r, q, s));
    }
}

TEST(BandedAlign, SubstitutionOnlyPairsAreExact) {
    testing::PairFactory f(46);
    for (int t = 0; t < 100; ++t) {
        std::string r = f.random_string(f.length(20, 400)), q = r;
        for (char& c : q)
            if (f.unit() < 0.1) c = "ACGT"[f.length(0, 3)];
        for (bool adaptive : {true, false}) {
            const auto out = banded_align(seq(r), seq(q), ScoringScheme::minimap2(), BandPolicy(10),
                                          {adaptive, Direction::Down, true});
            const auto want = full_dp_align(seq(r), seq(q), ScoringScheme::minimap2());
            EXPECT_EQ(out.score, want.score);
            EXPECT_EQ(out.cigar, want.cigar);
        }
    }
}

TEST(BandedAlign, OraclePathsInsideBandAreReproduced) {
    testing::PairFactory f(47);
    int checked = 0;
    for (int t = 0; t < 500; ++t) {
        const auto r = seq(f.random_string(300));
        const auto q = seq(f.mutate(r.str(), 0.03));
        const auto want = full_dp_align(r, q, ScoringScheme::minimap2());
        const auto got = try_banded_align(r, q, ScoringScheme::minimap2(), BandPolicy(10));
        if (got.escaped || got.outcome.score != want.score) continue;
        ++checked;
        EXPECT_EQ(got.outcome.cigar, want.cigar);
    }
    EXPECT_GE(checked, 450);
}

TEST(BandedAlign, EscapeIsReported) {
    testing::PairFactory f(48);
    const auto r = seq(f.random_string(300)), q = seq(f.random_string(20));
    const WavefrontOptions fixed{false, Direction::Down, true};
    const auto res = try_banded_align(r, q, ScoringScheme::minimap2(), BandPolicy(10), fixed);
    EXPECT_TRUE(res.escaped);
    EXPECT_THROW((void)banded_align(r, q, ScoringScheme::minimap2(), BandPolicy(10), fixed), BandEscape);
}

TEST(BandedAlign, NoTracebackAllocatesNothing) {
    const auto s = seq("ACGTACGTTTGACCA");
    const auto res = try_banded_align(s, s, ScoringScheme::minimap2(), BandPolicy(10), no_traceback());
    EXPECT_EQ(res.outcome.traceback_cells, 0u);
    EXPECT_TRUE(res.outcome.cigar.empty());
    EXPECT_EQ(res.outcome.score, 30);
}

TEST(TracebackStore, RoundTripsCodesAndEnforcesCapacity) {
    testing::PairFactory f(49);
    const int b = 7;
    TracebackStore store(b, 0, 5 * b);
    std::vector<std::vector<EditOp>> codes;
    std::vector<std::vector<std::uint8_t>> gaps;
    std::vector<Direction> moves;
    for (int t = 0; t < 5; ++t) {
        codes.emplace_back(b);
        gaps.emplace_back(b);
        for (int k = 0; k < b; ++k) {
            codes.back()[static_cast<std::size_t>(k)] = static_cast<EditOp>(f.length(0, 3));
            gaps.back()[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(f.length(0, 3));
        }
        moves.push_back(f.unit() < 0.5 ? Direction::Down : Direction::Right);
        store.append(moves.back(), codes.back(), gaps.back());
    }
    EXPECT_EQ(store.cells(), 35u);
    for (std::size_t t = 0; t < 5; ++t) {
        EXPECT_EQ(store.direction(t), moves[t]);
        for (int k = 0; k < b; ++k) {
            EXPECT_EQ(store.code(t, k), codes[t][static_cast<std::size_t>(k)]);
            EXPECT_EQ(store.gap_bits(t, k), gaps[t][static_cast<std::size_t>(k)]);
        }
    }
    EXPECT_THROW(store.append(Direction::Down, codes[0], gaps[0]), CapacityExceeded);
}

TEST(EditMode, DocumentedPoints) {
    testing::PairFactory f(50);
    const auto big = seq(f.random_string(10000));
    EXPECT_EQ(banded_edit_distance(big, big, BandPolicy(10), false).levenshtein, 0);
    std::string r = f.random_string(500), q = r;
    q[237] = q[237] == 'A' ? 'C' : 'A';
    const auto one = banded_edit_distance(seq(r), seq(q), BandPolicy(10), true);
    EXPECT_EQ(one.levenshtein, 1);
    EXPECT_EQ(one.affine_cost, 1);
    ASSERT_TRUE(one.cigar.has_value());
    EXPECT_EQ(count_edits(seq(r), seq(q), *one.cigar), 1);
}

TEST(EditMode, FrozenExampleReportsBothCosts) {
    const auto out = banded_edit_distance(seq("ACGTCCG"), seq("AGTTATC"), BandPolicy(10), true);
    EXPECT_EQ(out.levenshtein, 5);
    EXPECT_EQ(out.affine_cost, 5);
    EXPECT_LE(out.max_primed_value, 7);
}

TEST(EditMode, AgreesWithLevenshteinOracle) {
    testing::PairFactory f(51);
    int agree = 0;
    const int total = 1000;
    for (int t = 0; t < total; ++t) {
        std::string r = f.random_string(f.length(20, 200)), q = r;
        const std::size_t edits = f.length(0, 10);
        for (std::size_t e = 0; e < edits; ++e) {
            const std::size_t pos = f.length(0, q.size() - 1);
            const double kind = f.unit();
            if (kind < 1.0 / 3) q[pos] = "ACGT"[f.length(0, 3)];
            else if (kind < 2.0 / 3 && q.size() > 1) q.erase(pos, 1);
            else q.insert(pos, 1, "ACGT"[f.length(0, 3)]);
        }
        const auto got = try_banded_edit_distance(seq(r), seq(q), BandPolicy(10), false);
        EXPECT_LE(got.max_primed_value, 7);
        EXPECT_EQ(got.traceback_cells, 0u);
        if (!got.escaped && got.levenshtein == edit_distance_full(seq(r), seq(q)).distance) ++agree;
    }
    EXPECT_GE(agree, total * 99 / 100);
}

}  // namespace
}  // namespace diffband
