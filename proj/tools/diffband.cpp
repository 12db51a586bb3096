#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "diffband/cli.hpp"

namespace {

using namespace diffband;

/// Flags shared by every subcommand; unset flags leave the config value alone.
struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> adaptive;
    std::optional<int> w;

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, "key = value run configuration")->check(CLI::ExistingFile);
        app.add_option("--seed", seed, "random seed");
        app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        app.add_option("--w", w, "base bandwidth")->check(CLI::PositiveNumber);
    }

    RunConfig resolve() const {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (seed) cfg.seed = *seed;
        if (threads) cfg.threads = *threads;
        if (adaptive) cfg.wavefront.adaptive = *adaptive == "on";
        if (w) {
            const BandPolicy& b = cfg.band;
            cfg.band = BandPolicy(*w, b.slope(), std::max(*w, b.cap()), b.round_to_multiple());
        }
        return cfg;
    }
};

struct PairInput {
    std::string pairs_path;
    std::string ref_fasta;
    std::string query_fasta;
    bool mask_n = false;

    void attach(CLI::App& app) {
        app.add_option("pairs", pairs_path, "pairs TSV (id, reference, query)");
        app.add_option("--ref", ref_fasta, "reference FASTA, paired with --query by record order");
        app.add_option("--query", query_fasta, "query FASTA");
        app.add_flag("--mask-n", mask_n, "replace N with A in FASTA input");
    }

    std::vector<PairRecord> load() const {
        if (!pairs_path.empty()) return parse_pairs_file(pairs_path);
        if (ref_fasta.empty() || query_fasta.empty()) throw Error("give a pairs file or both --ref and --query");
        const auto refs = parse_fasta_file(ref_fasta, mask_n);
        const auto queries = parse_fasta_file(query_fasta, mask_n);
        if (refs.size() != queries.size()) throw Error("--ref and --query hold different record counts");
        std::vector<PairRecord> out;
        for (std::size_t i = 0; i < refs.size(); ++i) {
            if (refs[i].masked + queries[i].masked > 0)
                std::cerr << "masked " << refs[i].masked + queries[i].masked << " N bases in pair " << refs[i].name
                          << '\n';
            out.push_back({refs[i].name, refs[i].sequence, queries[i].sequence});
        }
        return out;
    }
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw Error("cannot open '" + path + "' for writing");
    return file;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Banded difference-recurrence aligner with an analytical in-memory cost model"};
    app.require_subcommand(1);

    // align / editdist
    CommonFlags align_common, edit_common;
    PairInput align_in, edit_in;
    AlignFlags align_flags, edit_flags;
    bool align_no_tb = false, edit_no_tb = false;
    std::string align_out, edit_out;
    auto* align = app.add_subcommand("align", "affine-gap banded alignment, one JSON line per pair");
    auto* edit = app.add_subcommand("editdist", "banded edit distance, one JSON line per pair");
    for (auto [cmd, common, in, flags, no_tb, out] :
         {std::tuple{align, &align_common, &align_in, &align_flags, &align_no_tb, &align_out},
          std::tuple{edit, &edit_common, &edit_in, &edit_flags, &edit_no_tb, &edit_out}}) {
        common->attach(*cmd);
        in->attach(*cmd);
        cmd->add_option("--adaptive", common->adaptive, "adaptive direction")->check(CLI::IsMember({"on", "off"}));
        cmd->add_flag("--oracle", flags->oracle, "add the full-DP result and a match flag");
        cmd->add_flag("--no-traceback", *no_tb, "skip traceback storage and CIGAR output");
        cmd->add_option("--out", *out, "output path (default stdout)");
    }

    // simreads
    CommonFlags sim_common;
    SimRequest sim;
    std::string sim_length = "150", sim_out;
    std::optional<std::string> sim_profile;
    std::optional<double> sim_continue;
    auto* simreads = app.add_subcommand("simreads", "simulate reference windows and noisy reads");
    sim_common.attach(*simreads);
    simreads->add_option("--genome", sim.genome, "FASTA path or synthetic:<len>:<seed>")->required();
    simreads->add_option("--profile", sim_profile, "PacBio, ONT_2D, Illumina or none");
    simreads->add_option("--count", sim.count, "number of reads")->check(CLI::PositiveNumber);
    simreads->add_option("--length", sim_length, "window length or lo-hi range");
    simreads->add_option("--insertion-continue", sim_continue, "insertion run continue probability");
    simreads->add_option("--out", sim_out, "pairs TSV path; truth goes to <out>.truth.tsv")->required();
    simreads->add_flag("--mask-n", sim.mask_n, "replace N with A in the genome FASTA");

    // validate
    CommonFlags val_common;
    ValidateRequest val;
    std::string val_length = "100-250", val_widths = "10,20,30,40,50", val_adaptive = "both", val_out;
    std::optional<std::string> val_profile, val_genome;
    auto* validate = app.add_subcommand("validate", "banded vs full-DP agreement table (CSV)");
    val_common.attach(*validate);
    validate->add_option("--profile", val_profile, "error profile");
    validate->add_option("--length", val_length, "read length or lo-hi range");
    validate->add_option("--count", val.count, "reads per row")->check(CLI::PositiveNumber);
    validate->add_option("--widths", val_widths, "base bandwidths, e.g. 10,20,30");
    validate->add_option("--adaptive", val_adaptive, "on, off or both")->check(CLI::IsMember({"on", "off", "both"}));
    validate->add_option("--genome", val_genome, "FASTA path or synthetic:<len>:<seed>");
    validate->add_option("--out", val_out, "output path (default stdout)");

    // pim
    CommonFlags pim_common;
    Workload load;
    std::optional<std::uint64_t> pim_query;
    std::string pim_out;
    auto* pim = app.add_subcommand("pim", "modelled cost of one workload (CSV)");
    pim_common.attach(*pim);
    pim->add_option("--pairs", load.pairs, "pair count")->check(CLI::PositiveNumber);
    pim->add_option("--length", load.reference_length, "reference length")->required()->check(CLI::PositiveNumber);
    pim->add_option("--query-length", pim_query, "query length (default: reference length)");
    pim->add_option("--out", pim_out, "output path (default stdout)");

    // dse
    CommonFlags dse_common;
    std::string dse_axis = "tbms", dse_values = "1-15", dse_lengths = "2000,10000", dse_out;
    auto* dse = app.add_subcommand("dse", "design-space sweep (CSV)");
    dse_common.attach(*dse);
    dse->add_option("--axis", dse_axis, "tbms or column_width")->check(CLI::IsMember({"tbms", "column_width"}));
    dse->add_option("--values", dse_values, "swept values, e.g. 1-15 or 32,64,128");
    dse->add_option("--lengths", dse_lengths, "sequence lengths");
    dse->add_option("--out", dse_out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ofstream file;
        if (align->parsed() || edit->parsed()) {
            const bool is_align = align->parsed();
            const RunConfig cfg = (is_align ? align_common : edit_common).resolve();
            AlignFlags flags = is_align ? align_flags : edit_flags;
            flags.traceback = !(is_align ? align_no_tb : edit_no_tb);
            const auto pairs = (is_align ? align_in : edit_in).load();
            std::ostream& out = open_output(is_align ? align_out : edit_out, file);
            if (is_align) run_align(pairs, cfg, flags, out);
            else run_editdist(pairs, cfg, flags, out);
        } else if (simreads->parsed()) {
            const RunConfig cfg = sim_common.resolve();
            sim.seed = cfg.seed;
            sim.profile = sim_profile ? *sim_profile : cfg.profile.value_or(sim.profile);
            sim.insertion_continue = sim_continue ? sim_continue : cfg.insertion_continue;
            sim.lengths = parse_length_range(sim_length);
            std::cout << run_simreads(sim, sim_out).dump() << '\n';
        } else if (validate->parsed()) {
            const RunConfig cfg = val_common.resolve();
            val.profile = val_profile ? *val_profile : cfg.profile.value_or(val.profile);
            val.lengths = parse_length_range(val_length);
            val.widths.clear();
            if (val_common.w) val.widths = {*val_common.w};
            else
                for (std::uint64_t w : parse_value_list(val_widths)) val.widths.push_back(static_cast<int>(w));
            if (val_adaptive == "both") val.adaptive = {true, false};
            else val.adaptive = {val_adaptive == "on"};
            val.seed = cfg.seed;
            val.genome = val_genome;
            val.scheme = cfg.scheme;
            val.band = cfg.band;
            val.tie = cfg.wavefront.tie;
            val.insertion_continue = cfg.insertion_continue;
            val.threads = cfg.threads;
            run_validate(val, open_output(val_out, file));
        } else if (pim->parsed()) {
            const RunConfig cfg = pim_common.resolve();
            load.query_length = pim_query.value_or(load.reference_length);
            load.scheme = cfg.scheme;
            run_pim(load, cfg, open_output(pim_out, file));
        } else if (dse->parsed()) {
            const RunConfig cfg = dse_common.resolve();
            const auto values = parse_value_list(dse_values);
            const auto lengths = parse_value_list(dse_lengths);
            run_dse(dse_axis_from_name(dse_axis), values, lengths, cfg, open_output(dse_out, file));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
