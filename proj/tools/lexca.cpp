// lexca: corpus analytics pipeline.
//
// Usage: lexca <subcommand> [flags]
// Subcommands: ingest stats glossary ca metasets charwords chrono permtest
//              wordcloud plane trajectory all
//
// Exit codes: 0 ok, 2 usage, 3 input format, 4 statistical precondition,
// 5 I/O.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "lexca/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"corpus analytics: preprocessing, lexical tables, correspondence analysis,\n"
                 "characteristic words, eigenvalue permutation test, SVG figures"};
    app.name("lexca");

    std::string subcommand;
    app.add_option("subcommand", subcommand,
                   "one of: ingest stats glossary ca metasets charwords chrono permtest "
                   "wordcloud plane trajectory all")
        ->required();

    std::string input, format, stoplist, stems, out, config_path;
    double sparse = 0, alpha = 0;
    int dims = 0, max_window = 0, replicates = 0;
    std::uint64_t seed = 0;
    auto* o_input = app.add_option("--input", input, "corpus file (csv/tsv/jsonl)");
    auto* o_format = app.add_option("--format", format, "input format: csv, tsv, or jsonl")
                         ->check(CLI::IsMember({"csv", "tsv", "jsonl"}));
    auto* o_stoplist = app.add_option("--stoplist", stoplist, "stopword file, one word per line");
    auto* o_stems = app.add_option("--stems", stems, "stem dictionary, surface<TAB>root lines");
    auto* o_sparse = app.add_option("--sparse", sparse, "sparse-term threshold in (0,1)");
    auto* o_dims = app.add_option("--dims", dims, "CA dimensions to keep");
    auto* o_alpha = app.add_option("--alpha", alpha, "significance cutoff in (0,1)");
    auto* o_window = app.add_option("--max-window", max_window, "widest year window");
    auto* o_reps = app.add_option("--replicates", replicates, "permutation replicates");
    auto* o_seed = app.add_option("--seed", seed, "RNG seed");
    auto* o_out = app.add_option("--out", out, "output directory");
    app.add_option("--config", config_path, "key=value config file; flags override it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        lexca::RunConfig cfg;
        if (!config_path.empty()) lexca::load_config_file(cfg, config_path);
        if (o_input->count()) cfg.input = input;
        if (o_format->count()) cfg.format = lexca::corpus_format_from_string(format);
        if (o_stoplist->count()) cfg.stoplist = stoplist;
        if (o_stems->count()) cfg.stems = stems;
        if (o_sparse->count()) cfg.sparse = sparse;
        if (o_dims->count()) cfg.dims = dims;
        if (o_alpha->count()) cfg.alpha = alpha;
        if (o_window->count()) cfg.max_window = max_window;
        if (o_reps->count()) cfg.replicates = replicates;
        if (o_seed->count()) cfg.seed = seed;
        if (o_out->count()) cfg.out = out;

        lexca::Pipeline pipeline(cfg);
        auto warnings = pipeline.run(subcommand);
        for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
        for (const auto& f : pipeline.written_files()) {
            std::printf("wrote %s\n", (pipeline.out_dir() / f).string().c_str());
        }
        return 0;
    } catch (const lexca::ArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const lexca::InputFormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const lexca::PreconditionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const lexca::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
}
