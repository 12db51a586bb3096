#ifndef DIFFBAND_READSIM_HPP
#define DIFFBAND_READSIM_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffband/core.hpp"

namespace diffband {

struct ErrorProfile {
    std::string name;
    double substitution_rate = 0;
    double insertion_rate = 0;
    double deletion_rate = 0;

    double total() const noexcept { return substitution_rate + insertion_rate + deletion_rate; }

    void validate() const {
        for (double p : {substitution_rate, insertion_rate, deletion_rate})
            if (!(p >= 0.0 && p <= 1.0)) throw Error("profile " + name + ": rates must lie in [0, 1]");
        if (!(total() < 1.0)) throw Error("profile " + name + ": rates must sum below 1");
    }

    static ErrorProfile pacbio() { return {"PacBio", 0.015, 0.090, 0.045}; }
    static ErrorProfile ont_2d() { return {"ONT_2D", 0.165, 0.050, 0.085}; }
    static ErrorProfile illumina() { return {"Illumina", 0.03, 0.01, 0.01}; }
    static ErrorProfile error_free() { return {"none", 0, 0, 0}; }
};

inline ErrorProfile profile_by_name(std::string_view name) {
    for (const auto& p : {ErrorProfile::pacbio(), ErrorProfile::ont_2d(), ErrorProfile::illumina(), ErrorProfile::error_free()})
        if (p.name == name) return p;
    throw Error("unknown error profile '" + std::string(name) + "' (expected PacBio, ONT_2D, Illumina or none)");
}

/* ---- randomness ---- */

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Per-item seed; independent of generation order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(master ^ splitmix64(index));
}

/// mt19937_64 with portable draws (the standard distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw Error("empty sampling range");
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = engine_();
            if (x >= threshold) return x % bound;
        }
    }

    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    Base base() { return static_cast<Base>(below(4)); }
    Base other_base(Base b) { return static_cast<Base>((static_cast<unsigned>(b) + 1 + below(3)) % 4); }

private:
    std::mt19937_64 engine_;
};

inline NucleotideSequence synthetic_genome(std::size_t length, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Base> bases(length);
    for (auto& b : bases) b = rng.base();
    return NucleotideSequence(std::move(bases));
}

/* ---- reads ---- */

enum class EditKind : std::uint8_t { Substitution, Insertion, Deletion };

/// Edit against the reference window. Insertions go after window[position]; `base` is unused for deletions.
struct TruthEdit {
    EditKind kind;
    std::size_t position;
    Base base;
    friend bool operator==(const TruthEdit&, const TruthEdit&) = default;
};

struct ReadPair {
    std::string id;
    NucleotideSequence reference_window;
    NucleotideSequence read;
    std::vector<TruthEdit> truth_edits;
    std::size_t offset = 0;
    std::uint64_t seed = 0;
};

/// Edits must be ordered by position; per position at most one substitution or deletion, then insertions.
inline NucleotideSequence apply_edits(const NucleotideSequence& window, std::span<const TruthEdit> edits) {
    std::vector<Base> out;
    out.reserve(window.size() + edits.size());
    std::size_t e = 0;
    for (std::size_t p = 0; p < window.size(); ++p) {
        if (e < edits.size() && edits[e].position < p) throw Error("truth edits out of order");
        if (e < edits.size() && edits[e].position == p && edits[e].kind == EditKind::Substitution) {
            out.push_back(edits[e++].base);
        } else if (e < edits.size() && edits[e].position == p && edits[e].kind == EditKind::Deletion) {
            ++e;
        } else {
            out.push_back(window[p]);
        }
        while (e < edits.size() && edits[e].position == p && edits[e].kind == EditKind::Insertion)
            out.push_back(edits[e++].base);
    }
    if (e != edits.size()) throw Error("truth edit beyond window end");
    return NucleotideSequence(std::move(out));
}

struct MutationOptions {
    /// Probability that an insertion grows by one more base; defaults to the profile insertion rate.
    std::optional<double> insertion_continue;
};

/* Per reference base, exactly one of: substitute (p_sub), delete (p_del), keep and start an
 * insertion run (p_ins * (1 - c)), keep. Runs grow geometrically with continue probability c,
 * so the expected inserted bases per reference base is p_ins. */
inline ReadPair mutate_read(const NucleotideSequence& window, const ErrorProfile& profile, Rng& rng,
                            const MutationOptions& options = {}) {
    profile.validate();
    const double cont = options.insertion_continue.value_or(profile.insertion_rate);
    if (!(cont >= 0.0 && cont < 1.0)) throw Error("insertion continue probability must lie in [0, 1)");
    const double p_sub = profile.substitution_rate;
    const double p_del = p_sub + profile.deletion_rate;
    const double p_ins = p_del + profile.insertion_rate * (1.0 - cont);

    ReadPair pair;
    pair.reference_window = window;
    std::vector<Base> read;
    read.reserve(window.size() + window.size() / 8);
    for (std::size_t p = 0; p < window.size(); ++p) {
        const double u = rng.unit();
        if (u < p_sub) {
            const Base b = rng.other_base(window[p]);
            pair.truth_edits.push_back({EditKind::Substitution, p, b});
            read.push_back(b);
        } else if (u < p_del) {
            pair.truth_edits.push_back({EditKind::Deletion, p, Base::A});
        } else {
            read.push_back(window[p]);
            if (u < p_ins) {
                do {
                    const Base b = rng.base();
                    pair.truth_edits.push_back({EditKind::Insertion, p, b});
                    read.push_back(b);
                } while (rng.unit() < cont);
            }
        }
    }
    pair.read = NucleotideSequence(std::move(read));
    return pair;
}

struct ReferenceWindow {
    NucleotideSequence window;
    std::size_t offset;
};

inline ReferenceWindow sample_reference(const NucleotideSequence& genome, std::size_t length, Rng& rng) {
    if (length == 0) throw Error("window length must be positive");
    if (genome.size() < length)
        throw GenomeTooShort("genome of " + std::to_string(genome.size()) + " bp cannot supply a " +
                             std::to_string(length) + " bp window");
    const auto offset = static_cast<std::size_t>(rng.below(genome.size() - length + 1));
    return {genome.slice(offset, length), offset};
}

struct LengthRange {
    std::size_t lo;
    std::size_t hi;
};

/// Read i uses its own generator seeded with derive_seed(seed, i). Window lengths are uniform in
/// [lo, hi]; a fixed length draws nothing extra.
inline std::vector<ReadPair> generate_dataset(const NucleotideSequence& genome, const ErrorProfile& profile,
                                              std::size_t count, LengthRange lengths, std::uint64_t seed,
                                              const MutationOptions& options = {}) {
    if (count == 0) throw Error("dataset must contain at least one read");
    if (lengths.lo == 0 || lengths.hi < lengths.lo) throw Error("invalid read length range");
    std::vector<ReadPair> out;
    out.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const std::uint64_t read_seed = derive_seed(seed, idx);
        Rng rng(read_seed);
        const std::size_t length =
            lengths.hi == lengths.lo ? lengths.lo : lengths.lo + rng.below(lengths.hi - lengths.lo + 1);
        ReferenceWindow w = sample_reference(genome, length, rng);
        ReadPair p = mutate_read(w.window, profile, rng, options);
        p.id = "read" + std::to_string(idx);
        p.offset = w.offset;
        p.seed = read_seed;
        out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<ReadPair> generate_dataset(const NucleotideSequence& genome, const ErrorProfile& profile,
                                              std::size_t count, std::size_t length, std::uint64_t seed,
                                              const MutationOptions& options = {}) {
    return generate_dataset(genome, profile, count, LengthRange{length, length}, seed, options);
}

struct RealizedRates {
    std::uint64_t reference_bases = 0;
    std::uint64_t substitutions = 0;
    std::uint64_t insertions = 0;
    std::uint64_t deletions = 0;

    double rate(std::uint64_t events) const noexcept {
        return reference_bases == 0 ? 0.0 : static_cast<double>(events) / static_cast<double>(reference_bases);
    }
    double total() const noexcept { return rate(substitutions + insertions + deletions); }
};

inline RealizedRates realized_rates(std::span<const ReadPair> pairs) {
    RealizedRates r;
    for (const auto& p : pairs) {
        r.reference_bases += p.reference_window.size();
        for (const auto& e : p.truth_edits) {
            switch (e.kind) {
                case EditKind::Substitution: ++r.substitutions; break;
                case EditKind::Insertion: ++r.insertions; break;
                case EditKind::Deletion: ++r.deletions; break;
            }
        }
    }
    return r;
}

}  // namespace diffband

#endif
