#include <gtest/gtest.h>

#include <sstream>

#include "diffband/io.hpp"

namespace diffband {
namespace {

std::vector<FastaRecord> fasta(const std::string& text, bool mask_n = false) {
    std::istringstream in(text);
    return parse_fasta(in, "mem.fa", mask_n);
}

std::size_t fasta_error_line(const std::string& text) {
    try {
        (void)fasta(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

TEST(Fasta, MultiLineRecordsCrlfAndLowercase) {
    const auto r = fasta(">chr1 some description\r\nacgt\r\nTT\r\n\r\n>chr2\nG\n");
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].name, "chr1");
    EXPECT_EQ(r[0].sequence.str(), "ACGTTT");
    EXPECT_EQ(r[1].sequence.str(), "G");
}

TEST(Fasta, MaskingIsOptInAndCounted) {
    EXPECT_EQ(fasta_error_line(">x\nACGT\nANNA\n"), 3u);
    const auto r = fasta(">x\nACGT\nANnA\n", true);
    EXPECT_EQ(r[0].sequence.str(), "ACGTAAAA");
    EXPECT_EQ(r[0].masked, 2u);
}

TEST(Fasta, ErrorsCarryLineNumbers) {
    EXPECT_EQ(fasta_error_line("ACGT\n"), 1u);
    EXPECT_EQ(fasta_error_line(">\nACGT\n"), 1u);
    EXPECT_EQ(fasta_error_line(">a\n>b\nAC\n"), 1u);
    EXPECT_EQ(fasta_error_line(">a\nAC\nA-C\n"), 3u);
    EXPECT_EQ(fasta_error_line(""), 1u);
}

std::size_t pairs_error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        (void)parse_pairs(in, "mem.tsv");
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

TEST(Pairs, HeaderIsOptional) {
    std::istringstream with("id\treference\tquery\np1\tACGT\tACG\n");
    std::istringstream without("p1\tACGT\tACG\r\n");
    const auto a = parse_pairs(with, "a"), b = parse_pairs(without, "b");
    ASSERT_EQ(a.size(), 1u);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(a[0].id, b[0].id);
    EXPECT_EQ(a[0].reference, b[0].reference);
    EXPECT_EQ(b[0].query.str(), "ACG");
}

TEST(Pairs, MalformedLinesAreRejected) {
    EXPECT_EQ(pairs_error_line("p1\tACGT\n"), 1u);
    EXPECT_EQ(pairs_error_line("p1\tACGT\tA\textra\n"), 1u);
    EXPECT_EQ(pairs_error_line("p1\tACGT\tA\np1\tAC\tA\n"), 2u);
    EXPECT_EQ(pairs_error_line("p1\tACGT\tA\np2\tACXT\tA\n"), 2u);
    EXPECT_EQ(pairs_error_line("p1\t\tA\n"), 1u);
    EXPECT_EQ(pairs_error_line("\tAC\tA\n"), 1u);
}

TEST(Pairs, WriteThenParseRoundTrips) {
    const auto genome = synthetic_genome(5000, 3);
    const auto reads = generate_dataset(genome, ErrorProfile::pacbio(), 20, LengthRange{40, 90}, 8);
    std::stringstream buf;
    write_pairs(buf, reads);
    const auto back = parse_pairs(buf, "buf");
    ASSERT_EQ(back.size(), reads.size());
    for (std::size_t k = 0; k < reads.size(); ++k) {
        EXPECT_EQ(back[k].id, reads[k].id);
        EXPECT_EQ(back[k].reference, reads[k].reference_window);
        EXPECT_EQ(back[k].query, reads[k].read);
    }
}

TEST(Truth, EditListFormat) {
    const std::vector<TruthEdit> edits{{EditKind::Substitution, 12, Base::G},
                                       {EditKind::Deletion, 40, Base::A},
                                       {EditKind::Insertion, 57, Base::T}};
    EXPECT_EQ(format_edits(edits), "S12G,D40,I57T");
    EXPECT_EQ(format_edits({}), "-");
}

TEST(Genome, SyntheticSpec) {
    EXPECT_EQ(load_genome("synthetic:1000:5"), synthetic_genome(1000, 5));
    EXPECT_THROW((void)load_genome("synthetic:0:5"), Error);
    EXPECT_THROW((void)load_genome("synthetic:abc"), Error);
    EXPECT_THROW((void)load_genome("/nonexistent/genome.fa"), Error);
}

RunConfig config(const std::string& text) {
    std::istringstream in(text);
    return parse_run_config(in, "mem.cfg");
}

std::size_t config_error_line(const std::string& text) {
    try {
        (void)config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return 0;
}

TEST(RunConfig, DefaultsAndOverrides) {
    const auto d = config("");
    EXPECT_EQ(d.scheme, ScoringScheme::minimap2());
    EXPECT_EQ(d.band, BandPolicy(10));
    EXPECT_TRUE(d.wavefront.adaptive);
    const auto c = config(
        "# comment\n"
        "scheme.preset = bwa_mem\n"
        "band.w = 20   # trailing\n"
        "band.slope = 1/50\n"
        "band.adaptive = off\n"
        "band.tie = right\n"
        "sim.profile = ONT_2D\n"
        "run.seed = 99\n"
        "run.threads = 4\n"
        "arch.tiles = 32\n"
        "arch.cycles.add = 7\n"
        "arch.energy.max = 2.5\n");
    EXPECT_EQ(c.scheme, ScoringScheme::bwa_mem());
    EXPECT_EQ(c.band, BandPolicy(20, {1, 50}));
    EXPECT_FALSE(c.wavefront.adaptive);
    EXPECT_EQ(c.wavefront.tie, Direction::Right);
    EXPECT_EQ(c.profile, std::optional<std::string>("ONT_2D"));
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.threads, 4u);
    EXPECT_EQ(c.arch.tiles, 32u);
    EXPECT_EQ(c.arch.cycles.add_per_bit, 7u);
    EXPECT_DOUBLE_EQ(c.arch.energy_per_cycle[static_cast<std::size_t>(Primitive::Max)], 2.5);
}

TEST(RunConfig, ErrorsPointAtTheLine) {
    EXPECT_EQ(config_error_line("band.w = 10\nband.q = 3\n"), 2u);
    EXPECT_EQ(config_error_line("scheme.match\n"), 1u);
    EXPECT_EQ(config_error_line("\n\nband.w = zero\n"), 3u);
    EXPECT_EQ(config_error_line("band.adaptive = maybe\n"), 1u);
    EXPECT_EQ(config_error_line("sim.profile = Sanger\n"), 1u);
    EXPECT_EQ(config_error_line("arch.energy.mul = 1\n"), 1u);
    EXPECT_EQ(config_error_line("band.w = 50\nband.cap = 40\n"), 2u);
    EXPECT_EQ(config_error_line("scheme.gap_open = 0\nscheme.gap_extend = 0\n"), 2u);
}

}  // namespace
}  // namespace diffband
