#ifndef DIFFBAND_BANDED_HPP
#define DIFFBAND_BANDED_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diffband/core.hpp"
#include "diffband/diffdp.hpp"

namespace diffband {

/* Band geometry: at anti-diagonal d the band holds cells (origin_i + k, origin_j - k), k in [0, B),
 * with origin_i + origin_j == d. A Down move increments origin_i, a Right move increments origin_j.
 * After Down the up-neighbour of slot k is previous slot k and the left-neighbour is slot k+1;
 * after Right they are slots k-1 and k. Neighbours that fell out of the band act as minus infinity. */

enum class CellKind : std::uint8_t {
    Masked,      // outside the (m+1) x (n+1) grid
    Boundary,    // row 0 or column 0, seeded
    Interior,    // both neighbours in band
    TopEdge,     // up-neighbour outside band; diagonal reachable through the left neighbour
    TopGap,      // up-neighbour and diagonal outside band; only a horizontal gap arrives
    BottomEdge,  // mirror of TopEdge (left-neighbour missing)
    BottomGap,   // mirror of TopGap
};

constexpr bool in_grid(CellKind k) noexcept { return k != CellKind::Masked; }

inline constexpr PrimedValue kUnsetPrimed = std::numeric_limits<PrimedValue>::max();
inline constexpr std::int64_t kNoScore = std::numeric_limits<std::int64_t>::min() / 2;

/// Gap-continuation bits stored beside each 2-bit code.
/// kExtendE at (i, j): E[i+1][j] continues E[i][j]. kExtendF at (i, j): F[i][j+1] continues F[i][j].
inline constexpr std::uint8_t kExtendE = 0b01;
inline constexpr std::uint8_t kExtendF = 0b10;

struct WavefrontOptions {
    bool adaptive = true;
    Direction tie = Direction::Down;  // move taken when both edge scores are equal
    bool record_traceback = true;
};

class WavefrontState;
WavefrontState start_wavefront(std::size_t m, std::size_t n, int bandwidth, const ScoringScheme& scheme);
void step_wavefront(WavefrontState& state, Direction move, std::span<const Base> reference,
                    std::span<const Base> query, const ScoringScheme& scheme);
void emit_traceback_flags(const WavefrontState& state, const ScoringScheme& scheme, std::span<EditOp> codes,
                          std::span<std::uint8_t> gaps);

/// Live band of one alignment. Single owner, mutated in place by step_wavefront.
class WavefrontState {
public:
    int bandwidth() const noexcept { return bandwidth_; }
    std::int64_t origin_i() const noexcept { return origin_i_; }
    std::int64_t origin_j() const noexcept { return origin_j_; }
    std::int64_t diagonal() const noexcept { return origin_i_ + origin_j_; }
    std::size_t rows() const noexcept { return m_; }
    std::size_t cols() const noexcept { return n_; }

    std::int64_t cell_i(int k) const noexcept { return origin_i_ + k; }
    std::int64_t cell_j(int k) const noexcept { return origin_j_ - k; }

    std::span<const PrimedValue> a() const noexcept { return a_; }
    std::span<const PrimedValue> dh() const noexcept { return dh_; }
    std::span<const PrimedValue> dv() const noexcept { return dv_; }
    std::span<const PrimedValue> de() const noexcept { return de_; }
    std::span<const PrimedValue> df() const noexcept { return df_; }
    std::span<const CellKind> kinds() const noexcept { return kind_; }
    /// Absolute H per slot; kNoScore off grid.
    std::span<const std::int64_t> scores() const noexcept { return score_; }

    /// Absolute H at slot 0 (top-right end of the band) and slot B-1 (bottom-left end).
    std::optional<std::int64_t> h_first() const noexcept { return edge(0); }
    std::optional<std::int64_t> h_last() const noexcept { return edge(bandwidth_ - 1); }

    std::span<const Direction> direction_log() const noexcept { return log_; }
    std::uint64_t cells_computed() const noexcept { return cells_; }
    int max_primed_value() const noexcept { return max_primed_; }
    /// Best absolute H over in-grid cells of the latest anti-diagonal that had any.
    std::int64_t best_recent_score() const noexcept { return best_recent_; }

private:
    friend WavefrontState start_wavefront(std::size_t, std::size_t, int, const ScoringScheme&);
    friend void step_wavefront(WavefrontState&, Direction, std::span<const Base>, std::span<const Base>,
                               const ScoringScheme&);
    friend void emit_traceback_flags(const WavefrontState&, const ScoringScheme&, std::span<EditOp>,
                                     std::span<std::uint8_t>);

    std::optional<std::int64_t> edge(int k) const noexcept {
        if (!in_grid(kind_[static_cast<std::size_t>(k)])) return std::nullopt;
        return score_[static_cast<std::size_t>(k)];
    }

    std::size_t m_ = 0;
    std::size_t n_ = 0;
    int bandwidth_ = 0;
    std::int64_t origin_i_ = 0;
    std::int64_t origin_j_ = 0;
    Direction last_move_ = Direction::Down;

    std::vector<PrimedValue> a_, dh_, dv_, de_, df_;
    std::vector<int> sub_;
    std::vector<CellKind> kind_;
    std::vector<std::int64_t> score_;

    std::vector<PrimedValue> prev_dh_, prev_dv_, prev_de_, prev_df_;
    std::vector<CellKind> prev_kind_;
    std::vector<std::int64_t> prev_score_;

    std::vector<Direction> log_;
    std::uint64_t cells_ = 0;
    int max_primed_ = 0;
    std::int64_t best_recent_ = kNoScore;
};

namespace detail {

/// Seeds a row-0 or column-0 slot; returns the seed value.
inline int seed_boundary(std::int64_t i, std::int64_t j, const ScoringScheme& s, PrimedValue& dh, PrimedValue& dv,
                         PrimedValue& de, PrimedValue& df, std::int64_t& score) {
    if (i == 0) {
        const int seed = primed_boundary_seed(static_cast<std::size_t>(j), s);
        dv = de = static_cast<PrimedValue>(seed);
        score = -s.gap_open() - j * s.gap_extend();
        return seed;
    }
    const int seed = primed_boundary_seed(static_cast<std::size_t>(i), s);
    dh = df = static_cast<PrimedValue>(seed);
    score = -s.gap_open() - i * s.gap_extend();
    return seed;
}

constexpr bool is_top(CellKind k) noexcept { return k == CellKind::TopEdge || k == CellKind::TopGap; }
constexpr bool is_bottom(CellKind k) noexcept { return k == CellKind::BottomEdge || k == CellKind::BottomGap; }

}  // namespace detail

/// Band laid along anti-diagonal 1, centred on the main diagonal.
inline WavefrontState start_wavefront(std::size_t m, std::size_t n, int bandwidth, const ScoringScheme& scheme) {
    if (bandwidth < 1) throw InvalidPolicy("bandwidth must be at least 1");
    if (m == 0 || n == 0) throw InvalidSequence("empty sequence", 0);
    WavefrontState st;
    const auto b = static_cast<std::size_t>(bandwidth);
    st.m_ = m;
    st.n_ = n;
    st.bandwidth_ = bandwidth;
    st.origin_i_ = 1 - bandwidth / 2;
    st.origin_j_ = 1 - st.origin_i_;
    for (auto* v : {&st.a_, &st.dh_, &st.dv_, &st.de_, &st.df_, &st.prev_dh_, &st.prev_dv_, &st.prev_de_, &st.prev_df_})
        v->assign(b, kUnsetPrimed);
    st.sub_.assign(b, 0);
    st.kind_.assign(b, CellKind::Masked);
    st.prev_kind_.assign(b, CellKind::Masked);
    st.score_.assign(b, kNoScore);
    st.prev_score_.assign(b, kNoScore);
    for (std::size_t k = 0; k < b; ++k) {
        const std::int64_t i = st.cell_i(static_cast<int>(k)), j = st.cell_j(static_cast<int>(k));
        if (i < 0 || j < 0 || i > static_cast<std::int64_t>(m) || j > static_cast<std::int64_t>(n)) continue;
        st.kind_[k] = CellKind::Boundary;
        const int seed = detail::seed_boundary(i, j, scheme, st.dh_[k], st.dv_[k], st.de_[k], st.df_[k], st.score_[k]);
        st.max_primed_ = std::max(st.max_primed_, seed);
        st.best_recent_ = std::max(st.best_recent_, st.score_[k]);
        ++st.cells_;
    }
    return st;
}

/// One forward iteration: s', A', fan-out, the four primed updates, then absolute H at every in-grid slot.
inline void step_wavefront(WavefrontState& st, Direction move, std::span<const Base> reference,
                           std::span<const Base> query, const ScoringScheme& scheme) {
    st.prev_dh_.swap(st.dh_);
    st.prev_dv_.swap(st.dv_);
    st.prev_de_.swap(st.de_);
    st.prev_df_.swap(st.df_);
    st.prev_kind_.swap(st.kind_);
    st.prev_score_.swap(st.score_);
    if (move == Direction::Down)
        ++st.origin_i_;
    else
        ++st.origin_j_;
    st.last_move_ = move;
    st.log_.push_back(move);

    const int b = st.bandwidth_;
    const int o = scheme.gap_open();
    const std::int64_t g = scheme.gap_first();
    const auto m = static_cast<std::int64_t>(st.m_), n = static_cast<std::int64_t>(st.n_);
    const int up_shift = move == Direction::Down ? 0 : -1;
    const int left_shift = move == Direction::Down ? 1 : 0;
    std::int64_t best = kNoScore;
    int peak = st.max_primed_;

    auto store = [&](PrimedValue& slot, int v, const char* what) {
        slot = checked_primed(v, scheme, what);
        peak = std::max(peak, v);
    };

    for (int k = 0; k < b; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        const std::int64_t i = st.cell_i(k), j = st.cell_j(k);
        st.a_[ks] = st.dh_[ks] = st.dv_[ks] = st.de_[ks] = st.df_[ks] = kUnsetPrimed;
        st.sub_[ks] = 0;
        st.score_[ks] = kNoScore;
        if (i < 0 || j < 0 || i > m || j > n) {
            st.kind_[ks] = CellKind::Masked;
            continue;
        }
        ++st.cells_;
        if (i == 0 || j == 0) {
            st.kind_[ks] = CellKind::Boundary;
            peak = std::max(peak, detail::seed_boundary(i, j, scheme, st.dh_[ks], st.dv_[ks], st.de_[ks], st.df_[ks],
                                                        st.score_[ks]));
            best = std::max(best, st.score_[ks]);
            continue;
        }
        const int ku = k + up_shift, kl = k + left_shift;
        const bool has_up = ku >= 0 && ku < b, has_left = kl >= 0 && kl < b;
        const int sub = primed_substitution(reference[static_cast<std::size_t>(i - 1)],
                                            query[static_cast<std::size_t>(j - 1)], scheme);
        st.sub_[ks] = sub;

        if (has_up && has_left) {
            const auto u = static_cast<std::size_t>(ku), l = static_cast<std::size_t>(kl);
            const PrimedInputs in{sub, st.prev_de_[u], st.prev_dv_[u], st.prev_df_[l], st.prev_dh_[l]};
            const PrimedCell c = primed_update(in, o);
            st.kind_[ks] = CellKind::Interior;
            store(st.a_[ks], c.a, "A'");
            store(st.dh_[ks], c.dh, "dH'");
            store(st.dv_[ks], c.dv, "dV'");
            store(st.de_[ks], c.de, "dE'");
            store(st.df_[ks], c.df, "dF'");
            st.score_[ks] = st.prev_score_[u] + c.dh - g;
        } else if (has_left) {
            // Up-neighbour missing: E is minus infinity. The dF' slot keeps F[i][j+1] - H[i][j] + G in [0, o].
            const auto l = static_cast<std::size_t>(kl);
            if (detail::is_top(st.prev_kind_[l])) {
                st.kind_[ks] = CellKind::TopGap;
                const int dv = st.prev_df_[l];
                store(st.dv_[ks], dv, "dV'");
                store(st.de_[ks], dv, "dE'");
                store(st.df_[ks], o, "gap slot");
                st.score_[ks] = st.prev_score_[l] + dv - g;
            } else {
                st.kind_[ks] = CellKind::TopEdge;
                const int df_left = st.prev_df_[l];
                const int av = std::max(sub, df_left);
                const int dv = av - st.prev_dh_[l];
                store(st.a_[ks], av, "A'");
                store(st.dv_[ks], dv, "dV'");
                store(st.de_[ks], dv, "dE'");
                store(st.df_[ks], std::max(av, df_left + o) - av, "gap slot");
                st.score_[ks] = st.prev_score_[l] + dv - g;
            }
        } else {
            const auto u = static_cast<std::size_t>(ku);
            if (detail::is_bottom(st.prev_kind_[u])) {
                st.kind_[ks] = CellKind::BottomGap;
                const int dh = st.prev_de_[u];
                store(st.dh_[ks], dh, "dH'");
                store(st.df_[ks], dh, "dF'");
                store(st.de_[ks], o, "gap slot");
                st.score_[ks] = st.prev_score_[u] + dh - g;
            } else {
                st.kind_[ks] = CellKind::BottomEdge;
                const int de_up = st.prev_de_[u];
                const int ah = std::max(sub, de_up);
                const int dh = ah - st.prev_dv_[u];
                store(st.a_[ks], ah, "A'");
                store(st.dh_[ks], dh, "dH'");
                store(st.df_[ks], dh, "dF'");
                store(st.de_[ks], std::max(ah, de_up + o) - ah, "gap slot");
                st.score_[ks] = st.prev_score_[u] + dh - g;
            }
        }
        best = std::max(best, st.score_[ks]);
    }
    st.max_primed_ = peak;
    if (best != kNoScore) st.best_recent_ = best;
}

/// 2-bit code per slot with priority M > D > I, plus gap-continuation bits.
inline void emit_traceback_flags(const WavefrontState& st, const ScoringScheme& scheme, std::span<EditOp> codes,
                                 std::span<std::uint8_t> gaps) {
    const int b = st.bandwidth_;
    const int o = scheme.gap_open();
    const int up_shift = st.last_move_ == Direction::Down ? 0 : -1;
    const int left_shift = st.last_move_ == Direction::Down ? 1 : 0;
    for (int k = 0; k < b; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        EditOp code = EditOp::Unset;
        std::uint8_t bits = 0;
        const auto u = static_cast<std::size_t>(k + up_shift), l = static_cast<std::size_t>(k + left_shift);
        switch (st.kind_[ks]) {
            case CellKind::Interior: {
                const int a = st.a_[ks];
                const int de_up = st.prev_de_[u], df_left = st.prev_df_[l];
                if (st.sub_[ks] == a)
                    code = EditOp::MatchOrMismatch;
                else if (st.dh_[ks] == de_up - st.prev_dv_[u])
                    code = EditOp::Deletion;
                else if (st.dv_[ks] == df_left - st.prev_dh_[l])
                    code = EditOp::Insertion;
                else
                    throw CorruptTraceback("no traceback condition holds at slot " + std::to_string(k));
                if (de_up + o > a) bits |= kExtendE;
                if (df_left + o > a) bits |= kExtendF;
                break;
            }
            case CellKind::TopEdge: {
                const int a = st.a_[ks];
                code = st.sub_[ks] == a ? EditOp::MatchOrMismatch : EditOp::Insertion;
                if (st.prev_df_[l] + o > a) bits |= kExtendF;
                break;
            }
            case CellKind::TopGap:
                code = EditOp::Insertion;
                if (o > 0) bits |= kExtendF;
                break;
            case CellKind::BottomEdge: {
                const int a = st.a_[ks];
                code = st.sub_[ks] == a ? EditOp::MatchOrMismatch : EditOp::Deletion;
                if (st.prev_de_[u] + o > a) bits |= kExtendE;
                break;
            }
            case CellKind::BottomGap:
                code = EditOp::Deletion;
                if (o > 0) bits |= kExtendE;
                break;
            case CellKind::Masked:
            case CellKind::Boundary: break;
        }
        codes[ks] = code;
        gaps[ks] = bits;
    }
}

/// Adaptive: Right iff H at slot 0 beats H at slot B-1 (off-grid ends count as minus infinity).
/// Fixed schedule: keep the band centred on the i == j diagonal.
inline Direction decide_direction(const WavefrontState& st, const WavefrontOptions& options) {
    const int b = st.bandwidth();
    if (!options.adaptive) return 2 * st.origin_i() + (b - 1) <= st.diagonal() ? Direction::Down : Direction::Right;
    const std::int64_t first = st.h_first().value_or(kNoScore);
    const std::int64_t last = st.h_last().value_or(kNoScore);
    if (first > last) return Direction::Right;
    if (first < last) return Direction::Down;
    return options.tie;
}

/* ---- traceback storage ---- */

/// Per-iteration records: the move that produced the anti-diagonal, B 2-bit codes, B gap bit pairs.
/// Record t holds anti-diagonal t + 2.
class TracebackStore {
public:
    TracebackStore(int bandwidth, std::int64_t initial_origin_i,
                   std::uint64_t capacity_cells = std::numeric_limits<std::uint64_t>::max())
        : bandwidth_(bandwidth), initial_origin_i_(initial_origin_i), capacity_(capacity_cells) {
        if (bandwidth < 1) throw InvalidPolicy("bandwidth must be at least 1");
    }

    void append(Direction move, std::span<const EditOp> codes, std::span<const std::uint8_t> gaps) {
        const auto b = static_cast<std::size_t>(bandwidth_);
        if (codes.size() != b || gaps.size() != b) throw CorruptTraceback("record width differs from bandwidth");
        if (cells() + b > capacity_)
            throw CapacityExceeded("traceback store full at " + std::to_string(cells()) + " cells");
        const std::size_t base = moves_.size() * b;
        moves_.push_back(move);
        const std::size_t need = (base + b + 3) / 4;
        op_plane_.resize(need, 0);
        gap_plane_.resize(need, 0);
        for (std::size_t k = 0; k < b; ++k) {
            const std::size_t cell = base + k;
            const auto shift = static_cast<unsigned>((cell % 4) * 2);
            op_plane_[cell / 4] |= static_cast<std::uint8_t>((static_cast<unsigned>(codes[k]) & 3u) << shift);
            gap_plane_[cell / 4] |= static_cast<std::uint8_t>((gaps[k] & 3u) << shift);
        }
    }

    int bandwidth() const noexcept { return bandwidth_; }
    std::int64_t initial_origin_i() const noexcept { return initial_origin_i_; }
    std::size_t iterations() const noexcept { return moves_.size(); }
    std::uint64_t cells() const noexcept { return static_cast<std::uint64_t>(moves_.size()) * bandwidth_; }
    std::uint64_t capacity() const noexcept { return capacity_; }
    Direction direction(std::size_t t) const noexcept { return moves_[t]; }

    EditOp code(std::size_t t, int k) const noexcept { return static_cast<EditOp>(read(op_plane_, t, k)); }
    std::uint8_t gap_bits(std::size_t t, int k) const noexcept { return read(gap_plane_, t, k); }

private:
    std::uint8_t read(const std::vector<std::uint8_t>& plane, std::size_t t, int k) const noexcept {
        const std::size_t cell = t * static_cast<std::size_t>(bandwidth_) + static_cast<std::size_t>(k);
        return static_cast<std::uint8_t>((plane[cell / 4] >> ((cell % 4) * 2)) & 3u);
    }

    int bandwidth_;
    std::int64_t initial_origin_i_;
    std::uint64_t capacity_;
    std::vector<Direction> moves_;
    std::vector<std::uint8_t> op_plane_;
    std::vector<std::uint8_t> gap_plane_;
};

/// Walks from (m, n) to (0, 0); band origins are replayed from the stored direction bits.
inline Cigar traceback(const TracebackStore& store, std::size_t m, std::size_t n) {
    std::vector<std::int64_t> origin(store.iterations());
    std::int64_t cur = store.initial_origin_i();
    for (std::size_t t = 0; t < origin.size(); ++t) {
        if (store.direction(t) == Direction::Down) ++cur;
        origin[t] = cur;
    }
    struct Slot {
        std::size_t t;
        int k;
    };
    auto locate = [&](std::size_t i, std::size_t j) -> Slot {
        const std::size_t t = i + j - 2;
        if (t >= origin.size()) throw CorruptTraceback("cell beyond recorded iterations");
        const std::int64_t k = static_cast<std::int64_t>(i) - origin[t];
        if (k < 0 || k >= store.bandwidth())
            throw CorruptTraceback("walk left the band at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        return {t, static_cast<int>(k)};
    };

    auto extends = [&](std::size_t i, std::size_t j, std::uint8_t bit) {
        const Slot s = locate(i, j);
        return (store.gap_bits(s.t, s.k) & bit) != 0;
    };

    enum class State { H, E, F } state = State::H;
    std::size_t i = m, j = n;
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
                const Slot s = locate(i, j);
                switch (store.code(s.t, s.k)) {
                    case EditOp::MatchOrMismatch:
                        rev.push(EditOp::MatchOrMismatch);
                        --i;
                        --j;
                        break;
                    case EditOp::Deletion: state = State::E; break;
                    case EditOp::Insertion: state = State::F; break;
                    case EditOp::Unset: throw CorruptTraceback("unset code on the path");
                }
                break;
            }
            case State::E:
                rev.push(EditOp::Deletion);
                --i;
                state = i >= 1 && extends(i, j, kExtendE) ? State::E : State::H;
                break;
            case State::F:
                rev.push(EditOp::Insertion);
                --j;
                state = j >= 1 && extends(i, j, kExtendF) ? State::F : State::H;
                break;
        }
    }
    return rev.reversed();
}

/* ---- drivers ---- */

struct BandedResult {
    AlignmentOutcome outcome;  // score and cigar valid only when !escaped
    bool escaped = false;
    std::int64_t best_edge_score = 0;
};

/// Runs the wavefront with an explicit bandwidth (no clamping).
inline BandedResult banded_align_with_bandwidth(const NucleotideSequence& reference, const NucleotideSequence& query,
                                                const ScoringScheme& scheme, int bandwidth,
                                                const WavefrontOptions& options = {}) {
    require_non_empty(reference, query);
    const std::size_t m = reference.size(), n = query.size();
    WavefrontState st = start_wavefront(m, n, bandwidth, scheme);
    const auto b = static_cast<std::size_t>(bandwidth);
    std::optional<TracebackStore> store;
    if (options.record_traceback) store.emplace(bandwidth, st.origin_i(), static_cast<std::uint64_t>(m + n - 1) * b);
    std::vector<EditOp> codes(b);
    std::vector<std::uint8_t> gaps(b);
    for (std::size_t step = 1; step < m + n; ++step) {
        const Direction move = decide_direction(st, options);
        step_wavefront(st, move, reference.bases(), query.bases(), scheme);
        if (store) {
            emit_traceback_flags(st, scheme, codes, gaps);
            store->append(move, codes, gaps);
        }
    }

    BandedResult r;
    AlignmentOutcome& out = r.outcome;
    out.band_used = bandwidth;
    out.direction_log.assign(st.direction_log().begin(), st.direction_log().end());
    out.cells_computed = st.cells_computed();
    out.traceback_cells = store ? store->cells() : 0;
    out.max_primed_value = st.max_primed_value();
    const std::int64_t k = static_cast<std::int64_t>(m) - st.origin_i();
    if (k < 0 || k >= bandwidth || !in_grid(st.kinds()[static_cast<std::size_t>(k)])) {
        r.escaped = true;
        r.best_edge_score = st.best_recent_score();
        return r;
    }
    out.score = st.scores()[static_cast<std::size_t>(k)];
    if (store) out.cigar = traceback(*store, m, n);
    return r;
}

/// Bandwidth from the policy, clamped to min(m, n) + 1.
inline BandedResult try_banded_align(const NucleotideSequence& reference, const NucleotideSequence& query,
                                     const ScoringScheme& scheme, const BandPolicy& policy,
                                     const WavefrontOptions& options = {}) {
    require_non_empty(reference, query);
    return banded_align_with_bandwidth(reference, query, scheme,
                                       effective_bandwidth(policy, reference.size(), query.size()), options);
}

/// Throws BandEscape when the terminal cell is not in band.
inline AlignmentOutcome banded_align(const NucleotideSequence& reference, const NucleotideSequence& query,
                                     const ScoringScheme& scheme, const BandPolicy& policy,
                                     const WavefrontOptions& options = {}) {
    BandedResult r = try_banded_align(reference, query, scheme, policy, options);
    if (r.escaped) throw BandEscape(r.best_edge_score);
    return std::move(r.outcome);
}

/* ---- edit distance ---- */

struct EditDistanceOutcome {
    std::int64_t levenshtein = 0;  // unit-cost engine run
    std::int64_t affine_cost = 0;  // affine (0,1,1,1) engine run
    std::optional<Cigar> cigar;    // Levenshtein path, when traceback was requested
    int band_used = 0;
    std::uint64_t cells_computed = 0;  // of the Levenshtein run
    std::uint64_t traceback_cells = 0;
    int max_primed_value = 0;
    bool escaped = false;         // Levenshtein run lost the terminal cell
    bool affine_escaped = false;  // affine run lost the terminal cell
    std::int64_t best_edge_score = 0;
};

inline EditDistanceOutcome try_banded_edit_distance(const NucleotideSequence& reference,
                                                    const NucleotideSequence& query, const BandPolicy& policy,
                                                    bool with_traceback, WavefrontOptions options = {}) {
    require_non_empty(reference, query);
    const int b = effective_bandwidth(policy, reference.size(), query.size());
    constexpr ScoringScheme affine = ScoringScheme::affine_edit();
    constexpr ScoringScheme unit = ScoringScheme::unit_edit();
    const int limit = (1 << min_bit_width(affine)) - 1;

    EditDistanceOutcome out;
    out.band_used = b;
    options.record_traceback = false;
    const BandedResult ar = banded_align_with_bandwidth(reference, query, affine, b, options);
    options.record_traceback = with_traceback;
    const BandedResult ur = banded_align_with_bandwidth(reference, query, unit, b, options);
    out.max_primed_value = std::max(ar.outcome.max_primed_value, ur.outcome.max_primed_value);
    if (out.max_primed_value > limit)
        throw PrecisionOverflow("edit-distance value " + std::to_string(out.max_primed_value) + " exceeds " +
                                std::to_string(min_bit_width(affine)) + "-bit range");
    out.affine_escaped = ar.escaped;
    out.affine_cost = ar.escaped ? 0 : -ar.outcome.score;
    out.escaped = ur.escaped;
    out.best_edge_score = ur.best_edge_score;
    out.levenshtein = ur.escaped ? 0 : -ur.outcome.score;
    out.cells_computed = ur.outcome.cells_computed;
    out.traceback_cells = ur.outcome.traceback_cells;
    if (with_traceback && !ur.escaped) out.cigar = ur.outcome.cigar;
    return out;
}

inline EditDistanceOutcome banded_edit_distance(const NucleotideSequence& reference, const NucleotideSequence& query,
                                                const BandPolicy& policy, bool with_traceback,
                                                const WavefrontOptions& options = {}) {
    EditDistanceOutcome r = try_banded_edit_distance(reference, query, policy, with_traceback, options);
    if (r.escaped || r.affine_escaped) throw BandEscape(r.best_edge_score);
    return r;
}

}  // namespace diffband

#endif
