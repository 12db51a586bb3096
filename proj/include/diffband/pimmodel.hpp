#ifndef DIFFBAND_PIMMODEL_HPP
#define DIFFBAND_PIMMODEL_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffband/core.hpp"

namespace diffband {

/* ---- gate level ---- */

constexpr bool nor_gate(bool a, bool b) noexcept { return !(a || b); }
constexpr bool nor_gate(bool a, bool b, bool c) noexcept { return !(a || b || c); }

struct AdderBits {
    bool sum;
    bool carry;
    friend constexpr bool operator==(const AdderBits&, const AdderBits&) = default;
};

/// Full adder built only from NOR gates; NOT x is NOR(x, x).
constexpr AdderBits nor_full_adder(bool a, bool b, bool c) noexcept {
    const bool carry = nor_gate(nor_gate(a, b), nor_gate(b, c), nor_gate(c, a));
    const bool all_set = nor_gate(nor_gate(a, a), nor_gate(b, b), nor_gate(c, c));
    const bool some_set_no_carry = nor_gate(nor_gate(a, b, c), carry);
    const bool inner = nor_gate(all_set, some_set_no_carry);
    return {nor_gate(inner, inner), carry};
}

/* ---- primitives ---- */

enum class Primitive : std::uint8_t { Xor, Add, Sub, Max, Copy, WriteRow };

inline constexpr std::array<Primitive, 6> kAllPrimitives{Primitive::Xor, Primitive::Add,  Primitive::Sub,
                                                         Primitive::Max, Primitive::Copy, Primitive::WriteRow};

constexpr std::string_view primitive_name(Primitive p) noexcept {
    constexpr std::array<std::string_view, 6> names{"XOR", "ADD", "SUB", "MAX", "COPY", "WRITE_ROW"};
    return names[static_cast<std::size_t>(p)];
}

/// Case-insensitive.
inline Primitive primitive_from_name(std::string_view name) {
    std::string upper(name);
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (Primitive p : kAllPrimitives)
        if (primitive_name(p) == upper) return p;
    throw UnknownPrimitive("unknown primitive '" + std::string(name) + "'");
}

/// Per-bit cycle coefficients; SUB and MAX are composed from these.
struct CycleTable {
    std::uint32_t xor_per_bit = 2;
    std::uint32_t add_per_bit = 6;
    std::uint32_t invert_per_bit = 2;
    std::uint32_t select_per_bit = 1;
    std::uint32_t copy_per_row = 1;
    std::uint32_t write_per_row = 1;
};

struct ArchConfig {
    std::uint32_t tiles = 64;
    std::uint32_t subarray_rows = 1024;
    std::uint32_t subarray_cols = 1024;
    std::uint32_t tbms_per_tile = 15;
    std::uint32_t column_width = 128;
    double clock_hz = 5e8;
    CycleTable cycles;
    std::array<double, 6> energy_per_cycle{1, 1, 1, 1, 1, 1};  // indexed by Primitive
    double write_endurance = 1e12;
    std::uint32_t traceback_fixed_cycles = 8;     // column read + encoder per iteration
    double traceback_energy_per_cycle = 1.0;
    std::uint32_t traceback_walk_cycles = 1;      // per path step on the host side
    double peripheral_area_per_bit = 1.0;

    void validate() const {
        auto positive = [](std::uint64_t v, const char* what) {
            if (v == 0) throw Error(std::string("arch.") + what + " must be positive");
        };
        positive(tiles, "tiles");
        positive(subarray_rows, "subarray_rows");
        positive(subarray_cols, "subarray_cols");
        positive(tbms_per_tile, "tbms_per_tile");
        positive(column_width, "column_width");
        positive(cycles.xor_per_bit, "xor_cycles");
        positive(cycles.add_per_bit, "add_cycles");
        positive(cycles.copy_per_row, "copy_cycles");
        positive(cycles.write_per_row, "write_row_cycles");
        if (!(clock_hz > 0)) throw Error("arch.clock_hz must be positive");
        if (!(write_endurance > 0)) throw Error("arch.write_endurance must be positive");
        for (double c : energy_per_cycle)
            if (!(c >= 0)) throw Error("energy coefficients must be non-negative");
    }
};

struct OpCost {
    std::uint64_t cycles = 0;
    double energy = 0;

    OpCost& operator+=(const OpCost& o) noexcept {
        cycles += o.cycles;
        energy += o.energy;
        return *this;
    }
    friend OpCost operator+(OpCost a, const OpCost& b) noexcept { return a += b; }
};

constexpr std::uint64_t cycles_per_bit(Primitive p, const CycleTable& t) noexcept {
    switch (p) {
        case Primitive::Xor: return t.xor_per_bit;
        case Primitive::Add: return t.add_per_bit;
        case Primitive::Sub: return std::uint64_t{t.add_per_bit} + t.invert_per_bit;
        case Primitive::Max: return std::uint64_t{t.add_per_bit} + t.invert_per_bit + t.select_per_bit;
        case Primitive::Copy: return t.copy_per_row;
        case Primitive::WriteRow: return t.write_per_row;
    }
    return 0;
}

/// Bit-serial cost; one row per bit for COPY and WRITE_ROW.
inline OpCost op_cost(Primitive p, int bits, const ArchConfig& config) {
    if (bits < 1) throw Error("operation width must be at least one bit");
    const std::uint64_t c = cycles_per_bit(p, config.cycles) * static_cast<std::uint64_t>(bits);
    return {c, static_cast<double>(c) * config.energy_per_cycle[static_cast<std::size_t>(p)]};
}

inline OpCost op_cost(std::string_view primitive, int bits, const ArchConfig& config) {
    return op_cost(primitive_from_name(primitive), bits, config);
}

/* ---- schedules ----
 * A stage is a set of lanes running side by side on disjoint rows; ops inside a lane run in order.
 * Stage latency is the slowest lane; energy counts every op. */

struct ScheduledOp {
    Primitive op;
    int bits;
};

using Lane = std::vector<ScheduledOp>;

struct Stage {
    std::string label;
    std::vector<Lane> lanes;
};

using Schedule = std::vector<Stage>;

inline OpCost schedule_cost(const Schedule& schedule, const ArchConfig& config) {
    OpCost total;
    for (const Stage& stage : schedule) {
        std::uint64_t slowest = 0;
        for (const Lane& lane : stage.lanes) {
            OpCost lane_cost;
            for (const ScheduledOp& op : lane) lane_cost += op_cost(op.op, op.bits, config);
            slowest = std::max(slowest, lane_cost.cycles);
            total.energy += lane_cost.energy;
        }
        total.cycles += slowest;
    }
    return total;
}

/// Result bits written by a schedule; each bit occupies one row.
inline std::uint64_t rows_written(const Schedule& schedule) {
    std::uint64_t rows = 0;
    for (const Stage& stage : schedule)
        for (const Lane& lane : stage.lanes)
            for (const ScheduledOp& op : lane) rows += static_cast<std::uint64_t>(op.bits);
    return rows;
}

inline constexpr int kBaseBits = 2;
inline constexpr int kScoreBits = 32;

/// One wavefront iteration of the shifted difference recurrence at b-bit precision.
inline Schedule parallel_forward_schedule(int b) {
    using P = Primitive;
    return {
        {"substitution", {{{P::Xor, kBaseBits}, {P::Add, b}}}},
        {"a_max", {{{P::Max, b}, {P::Max, b}}}},
        {"stage_neighbours", {{{P::Copy, b}, {P::Copy, b}, {P::Copy, b}, {P::Copy, b}}}},
        {"differences",
         {{{P::Sub, b}}, {{P::Sub, b}}, {{P::Add, b}, {P::Max, b}, {P::Sub, b}}, {{P::Add, b}, {P::Max, b}, {P::Sub, b}}}},
        {"edge_score", {{{P::Sub, b}, {P::Add, kScoreBits}}}},
    };
}

/// Flag generation: two subtractions feeding four comparisons.
inline Schedule parallel_traceback_schedule(int b) {
    using P = Primitive;
    return {{"traceback", {{{P::Sub, b}, {P::Sub, b}, {P::Xor, b}, {P::Xor, b}, {P::Xor, b}, {P::Xor, b}}}}};
}

/// Absolute-score recurrence at full width, one op after another.
inline Schedule original_forward_schedule() {
    using P = Primitive;
    constexpr int w = kScoreBits;
    return {
        {"substitution", {{{P::Xor, kBaseBits}, {P::Add, w}}}},
        {"e", {{{P::Sub, w}, {P::Max, w}, {P::Sub, w}}}},
        {"f", {{{P::Sub, w}, {P::Max, w}, {P::Sub, w}}}},
        {"h", {{{P::Max, w}, {P::Max, w}}}},
    };
}

inline Schedule original_traceback_schedule() {
    using P = Primitive;
    constexpr int w = kScoreBits;
    return {{"traceback", {{{P::Xor, w}, {P::Xor, w}, {P::Xor, w}}}}};
}

struct StepCost {
    OpCost forward;
    OpCost traceback;
    OpCost total() const noexcept { return forward + traceback; }
};

inline OpCost traceback_fixed_cost(const ArchConfig& config) {
    return {config.traceback_fixed_cycles,
            static_cast<double>(config.traceback_fixed_cycles) * config.traceback_energy_per_cycle};
}

/// Per-iteration cost; every band cell updates at once, so B does not appear.
inline StepCost wavefront_step_cost(int bits, const ArchConfig& config) {
    if (bits < 1) throw Error("bit width must be positive");
    return {schedule_cost(parallel_forward_schedule(bits), config),
            schedule_cost(parallel_traceback_schedule(bits), config) + traceback_fixed_cost(config)};
}

inline StepCost original_step_cost(const ArchConfig& config) {
    return {schedule_cost(original_forward_schedule(), config),
            schedule_cost(original_traceback_schedule(), config) + traceback_fixed_cost(config)};
}

/* ---- dependency chains ----
 * Sources are either carried from the previous cell/iteration or loop-invariant (sequence-derived).
 * The critical chain counts ops on the longest path from a carried source; ops fed only by
 * loop-invariant values can run ahead and are off the chain. */

struct DagNode {
    std::string name;
    Primitive op;
    std::vector<int> inputs;  // negative: -1 - source index; otherwise an earlier node
};

struct Dag {
    std::vector<bool> source_carried;
    std::vector<DagNode> nodes;
};

inline int critical_chain(const Dag& dag) {
    constexpr int unreached = -1;
    std::vector<int> depth(dag.nodes.size(), unreached);
    int longest = 0;
    for (std::size_t v = 0; v < dag.nodes.size(); ++v) {
        int best = unreached;
        for (int in : dag.nodes[v].inputs) {
            if (in < 0) {
                if (dag.source_carried.at(static_cast<std::size_t>(-1 - in))) best = std::max(best, 0);
            } else {
                if (static_cast<std::size_t>(in) >= v) throw Error("dag inputs must precede their node");
                best = std::max(best, depth[static_cast<std::size_t>(in)]);
            }
        }
        if (best != unreached) depth[v] = best + 1;
        longest = std::max(longest, depth[v]);
    }
    return longest;
}

/// H = max(H_diag + s, max(H_up - o, E_up) - e, max(H_left - o, F_left) - e).
inline Dag original_cell_dag() {
    using P = Primitive;
    // sources: 0 H_diag, 1 H_up, 2 E_up, 3 H_left, 4 F_left, 5 s
    return {{true, true, true, true, true, false},
            {{"diag", P::Add, {-1, -6}},
             {"e_open", P::Sub, {-2}},
             {"e_best", P::Max, {1, -3}},
             {"e", P::Sub, {2}},
             {"f_open", P::Sub, {-4}},
             {"f_best", P::Max, {4, -5}},
             {"f", P::Sub, {5}},
             {"gap", P::Max, {3, 6}},
             {"h", P::Max, {0, 7}}}};
}

/// Shifted difference cell: A' then four independent updates.
inline Dag parallel_cell_dag() {
    using P = Primitive;
    // sources: 0 s', 1 dE'_up, 2 dV'_up, 3 dF'_left, 4 dH'_left
    return {{false, true, true, true, true},
            {{"a_pair", P::Max, {-1, -2}},
             {"a", P::Max, {0, -4}},
             {"dh", P::Sub, {1, -3}},
             {"dv", P::Sub, {1, -5}},
             {"e_open", P::Add, {-2}},
             {"e_best", P::Max, {1, 4}},
             {"de", P::Sub, {5, -5}},
             {"f_open", P::Add, {-4}},
             {"f_best", P::Max, {1, 7}},
             {"df", P::Sub, {8, -3}}}};
}

struct CriticalPathBudget {
    int ops;
    int bits;
    int bit_budget() const noexcept { return ops * bits; }
};

inline CriticalPathBudget original_critical_path() { return {critical_chain(original_cell_dag()), kScoreBits}; }
inline CriticalPathBudget parallel_critical_path(int bits) { return {critical_chain(parallel_cell_dag()), bits}; }

/* ---- parallelism ---- */

/// k = min(floor(cols / B), floor(rows * cols * t / (2 * m * B))).
inline std::uint64_t max_parallelism(std::uint64_t length, std::uint64_t bandwidth, std::uint64_t tbms,
                                     const ArchConfig& config) {
    if (length < 1 || bandwidth < 1 || tbms < 1) throw Error("length, bandwidth and TBM count must be positive");
    const std::uint64_t by_width = config.subarray_cols / bandwidth;
    const std::uint64_t by_storage =
        std::uint64_t{config.subarray_rows} * config.subarray_cols * tbms / (2 * length * bandwidth);
    const std::uint64_t k = std::min(by_width, by_storage);
    if (k == 0)
        throw CapacityExceeded("no pair fits: length " + std::to_string(length) + ", bandwidth " +
                               std::to_string(bandwidth) + ", " + std::to_string(tbms) + " TBMs");
    return k;
}

/* ---- whole-run estimates ---- */

struct Workload {
    std::uint64_t pairs = 1;
    std::uint64_t reference_length = 0;
    std::uint64_t query_length = 0;
    ScoringScheme scheme = ScoringScheme::minimap2();

    std::uint64_t iterations() const noexcept { return reference_length + query_length; }
    std::uint64_t longest() const noexcept { return std::max(reference_length, query_length); }
};

struct CostReport {
    int bandwidth = 0;
    int bit_width = 0;
    std::uint64_t parallelism = 0;
    std::uint64_t cycles = 0;
    double latency_seconds = 0;
    double energy = 0;
    double reads_per_second = 0;
    double energy_per_read = 0;
    double cells_per_second = 0;
    std::uint64_t tbm_cells_used = 0;
    std::uint64_t tbm_capacity = 0;
    bool tbm_overcommitted = false;
    double writes_per_cell = 0;
};

struct WriteTraffic {
    std::uint64_t rows_per_iteration = 0;
    std::uint64_t row_writes_per_alignment = 0;
    double writes_per_cell_per_alignment = 0;
    double lifetime_alignments = 0;
};

/// Row writes spread evenly over the compute subarray; k pairs share each row write.
inline WriteTraffic estimate_write_traffic(std::uint64_t iterations, int bits, std::uint64_t parallelism,
                                           const ArchConfig& config) {
    if (parallelism == 0) throw Error("parallelism must be positive");
    WriteTraffic w;
    w.rows_per_iteration = rows_written(parallel_forward_schedule(bits));
    w.row_writes_per_alignment = iterations * w.rows_per_iteration;
    w.writes_per_cell_per_alignment = static_cast<double>(w.row_writes_per_alignment) /
                                      (static_cast<double>(config.subarray_rows) * static_cast<double>(parallelism));
    w.lifetime_alignments = w.writes_per_cell_per_alignment == 0
                                ? std::numeric_limits<double>::infinity()
                                : config.write_endurance / w.writes_per_cell_per_alignment * config.tiles;
    return w;
}

inline WriteTraffic estimate_write_traffic(const Workload& load, const BandPolicy& policy, const ArchConfig& config) {
    if (load.iterations() == 0) return estimate_write_traffic(0, min_bit_width(load.scheme), 1, config);
    const int b = effective_bandwidth(policy, std::max<std::uint64_t>(load.reference_length, 1),
                                      std::max<std::uint64_t>(load.query_length, 1));
    const std::uint64_t k = max_parallelism(load.longest(), static_cast<std::uint64_t>(b), config.tbms_per_tile, config);
    return estimate_write_traffic(load.iterations(), min_bit_width(load.scheme), k, config);
}

/// Cycles one batch of k pairs spends in a tile, plus optional per-iteration peripheral transfer.
inline CostReport estimate_run(const Workload& load, const BandPolicy& policy, const ArchConfig& config,
                               std::uint64_t extra_cycles_per_iteration = 0) {
    config.validate();
    if (load.reference_length == 0 || load.query_length == 0) throw Error("workload lengths must be positive");
    CostReport r;
    r.bandwidth = effective_bandwidth(policy, load.reference_length, load.query_length);
    r.bit_width = min_bit_width(load.scheme);
    r.parallelism = max_parallelism(load.longest(), static_cast<std::uint64_t>(r.bandwidth), config.tbms_per_tile, config);

    const StepCost step = wavefront_step_cost(r.bit_width, config);
    const std::uint64_t iters = load.iterations();
    const std::uint64_t walk_cycles = iters * config.traceback_walk_cycles;
    const std::uint64_t batch_cycles = iters * (step.total().cycles + extra_cycles_per_iteration) + walk_cycles;
    const double batch_seconds = static_cast<double>(batch_cycles) / config.clock_hz;
    const std::uint64_t per_wave = std::uint64_t{config.tiles} * r.parallelism;
    const std::uint64_t waves = (load.pairs + per_wave - 1) / per_wave;

    r.cycles = waves * batch_cycles;
    r.latency_seconds = static_cast<double>(r.cycles) / config.clock_hz;
    r.reads_per_second = static_cast<double>(per_wave) / batch_seconds;
    r.energy_per_read = static_cast<double>(iters) * step.total().energy * r.bandwidth +
                        static_cast<double>(walk_cycles) * config.traceback_energy_per_cycle;
    r.energy = r.energy_per_read * static_cast<double>(load.pairs);
    r.cells_per_second = r.reads_per_second * static_cast<double>(iters) * r.bandwidth;
    r.tbm_cells_used = iters * static_cast<std::uint64_t>(r.bandwidth) * r.parallelism;
    r.tbm_capacity = std::uint64_t{config.subarray_rows} * config.subarray_cols * config.tbms_per_tile;
    r.tbm_overcommitted = r.tbm_cells_used > r.tbm_capacity;
    r.writes_per_cell =
        estimate_write_traffic(iters, r.bit_width, r.parallelism, config).writes_per_cell_per_alignment;
    return r;
}

/* ---- design-space sweeps ---- */

enum class DseAxis : std::uint8_t { TbmsPerTile, ColumnWidth };

inline DseAxis dse_axis_from_name(std::string_view name) {
    if (name == "tbms" || name == "tbms_per_tile") return DseAxis::TbmsPerTile;
    if (name == "column_width" || name == "width") return DseAxis::ColumnWidth;
    throw Error("unknown sweep axis '" + std::string(name) + "' (expected tbms or column_width)");
}

struct DseRow {
    std::uint64_t value = 0;
    std::uint64_t length = 0;
    int bandwidth = 0;
    std::uint64_t parallelism = 0;  // 0 when capacity is exceeded
    double reads_per_second = 0;
    double peripheral_area = 0;
    bool capacity_exceeded = false;
};

/* One row per (value, length). The tbms axis varies TBMs per tile. The column_width axis charges
 * ceil(2 * k * B / width) transfer cycles per iteration to drain traceback bits, and reports a
 * peripheral area proportional to width. */
inline std::vector<DseRow> dse_sweep(DseAxis axis, std::span<const std::uint64_t> values,
                                     std::span<const std::uint64_t> lengths, const ScoringScheme& scheme,
                                     const BandPolicy& policy, const ArchConfig& base) {
    if (values.empty() || lengths.empty()) throw Error("sweep range must be non-empty");
    std::vector<DseRow> rows;
    for (std::uint64_t value : values) {
        if (value == 0) throw Error("sweep values must be positive");
        ArchConfig config = base;
        if (axis == DseAxis::TbmsPerTile)
            config.tbms_per_tile = static_cast<std::uint32_t>(value);
        else
            config.column_width = static_cast<std::uint32_t>(value);
        for (std::uint64_t length : lengths) {
            DseRow row;
            row.value = value;
            row.length = length;
            row.bandwidth = effective_bandwidth(policy, length, length);
            row.peripheral_area = axis == DseAxis::ColumnWidth ? config.peripheral_area_per_bit * value : 0.0;
            try {
                row.parallelism = max_parallelism(length, static_cast<std::uint64_t>(row.bandwidth),
                                                  config.tbms_per_tile, config);
            } catch (const CapacityExceeded&) {
                row.capacity_exceeded = true;
                rows.push_back(row);
                continue;
            }
            std::uint64_t transfer = 0;
            if (axis == DseAxis::ColumnWidth)
                transfer = (2 * row.parallelism * static_cast<std::uint64_t>(row.bandwidth) + value - 1) / value;
            row.reads_per_second =
                estimate_run({row.parallelism * config.tiles, length, length, scheme}, policy, config, transfer)
                    .reads_per_second;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace diffband

#endif
