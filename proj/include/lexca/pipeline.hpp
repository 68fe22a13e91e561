#pragma once

// Pipeline orchestration: a RunConfig (defaults + config file + flag
// overrides), fixed artifact names under the output directory, and one run
// function per subcommand. Every write lands in manifest.json with its
// SHA-256, alongside the config, input digests, and tool version; reads of
// prerequisite artifacts verify the recorded digest so stale or hand-edited
// intermediates fail loudly instead of producing quiet nonsense.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "lexca/charwords.hpp"
#include "lexca/correspondence.hpp"
#include "lexca/corpus.hpp"
#include "lexca/corpus_io.hpp"
#include "lexca/error.hpp"
#include "lexca/lexical_table.hpp"
#include "lexca/permtest.hpp"
#include "lexca/serialize.hpp"
#include "lexca/sha256.hpp"
#include "lexca/svg_figures.hpp"
#include "lexca/version.hpp"

namespace lexca {

struct RunConfig {
    std::string input;
    CorpusFormat format = CorpusFormat::Csv;
    std::string stoplist;
    std::string stems;
    double sparse = 0.9631;
    int dims = 5;
    double metadoc_multiplier = 8.0;
    double metakey_multiplier = 5.0;
    double alpha = 0.05;
    int max_window = 3;
    int replicates = 1999;
    std::uint64_t seed = 42;
    std::string out = "out";
    std::string category = "year";  // partition for characteristic words
    std::int64_t glossary_limit = 0;  // 0 = every retained term
    YearRange years{};
};

inline const std::vector<std::string> k_subcommands = {
    "ingest",    "stats",  "glossary", "ca",    "metasets",  "charwords",
    "chrono",    "permtest", "wordcloud", "plane", "trajectory", "all"};

namespace artifact {
inline constexpr const char* corpus = "corpus.json";
inline constexpr const char* table_full = "table_full.csv";
inline constexpr const char* table_full_meta = "table_full.meta.json";
inline constexpr const char* table_filtered = "table_filtered.csv";
inline constexpr const char* table_filtered_meta = "table_filtered.meta.json";
inline constexpr const char* stats = "stats.json";
inline constexpr const char* glossary = "glossary.csv";
inline constexpr const char* ca_model = "ca_model.json";
inline constexpr const char* ca_row_coords = "ca_row_coords.csv";
inline constexpr const char* ca_col_coords = "ca_col_coords.csv";
inline constexpr const char* metasets = "metasets.json";
inline constexpr const char* charwords_csv = "charwords.csv";
inline constexpr const char* charwords_json = "charwords.json";
inline constexpr const char* chrono_csv = "chrono.csv";
inline constexpr const char* chrono_json = "chrono.json";
inline constexpr const char* permtest = "permtest.json";
inline constexpr const char* wordcloud = "wordcloud.svg";
inline constexpr const char* plane = "plane.svg";
inline constexpr const char* trajectory = "trajectory.svg";
inline constexpr const char* manifest = "manifest.json";
}  // namespace artifact

// ---- config file ----

namespace detail {

inline std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    try {
        // stoull accepts a minus sign and wraps; reject it up front
        if (s.empty() || s[0] == '-' || s[0] == '+') throw std::invalid_argument(s);
        std::size_t pos = 0;
        unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("config: \"" + key + "\" needs an unsigned integer, got \"" + s +
                            "\"");
    }
}

inline std::int64_t parse_i64(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("config: \"" + key + "\" needs an integer, got \"" + s + "\"");
    }
}

inline double parse_real(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("config: \"" + key + "\" needs a number, got \"" + s + "\"");
    }
}

}  // namespace detail

// key=value lines; blank lines and lines starting with '#' are skipped.
inline void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "input") cfg.input = value;
    else if (key == "format") cfg.format = corpus_format_from_string(value);
    else if (key == "stoplist") cfg.stoplist = value;
    else if (key == "stems") cfg.stems = value;
    else if (key == "sparse") cfg.sparse = detail::parse_real(value, key);
    else if (key == "dims") cfg.dims = static_cast<int>(detail::parse_i64(value, key));
    else if (key == "metadoc-multiplier") cfg.metadoc_multiplier = detail::parse_real(value, key);
    else if (key == "metakey-multiplier") cfg.metakey_multiplier = detail::parse_real(value, key);
    else if (key == "alpha") cfg.alpha = detail::parse_real(value, key);
    else if (key == "max-window") cfg.max_window = static_cast<int>(detail::parse_i64(value, key));
    else if (key == "replicates") cfg.replicates = static_cast<int>(detail::parse_i64(value, key));
    else if (key == "seed") cfg.seed = detail::parse_u64(value, key);
    else if (key == "out") cfg.out = value;
    else if (key == "category") cfg.category = value;
    else if (key == "glossary-limit") cfg.glossary_limit = detail::parse_i64(value, key);
    else if (key == "year-min") cfg.years.min_year = static_cast<int>(detail::parse_i64(value, key));
    else if (key == "year-max") cfg.years.max_year = static_cast<int>(detail::parse_i64(value, key));
    else throw ArgumentError("config: unknown key \"" + key + "\"");
}

inline void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::string content = detail::read_file(path);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        std::size_t eol = content.find('\n', pos);
        std::string line = content.substr(pos, eol == std::string::npos ? eol : eol - pos);
        pos = eol == std::string::npos ? content.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view trimmed = trim_view(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        std::size_t eq = trimmed.find('=');
        if (eq == std::string_view::npos) {
            throw ArgumentError("config " + path.string() + ":" + std::to_string(line_no) +
                                ": expected key=value");
        }
        std::string key(trim_view(trimmed.substr(0, eq)));
        std::string value(trim_view(trimmed.substr(eq + 1)));
        apply_config_line(cfg, key, value);
    }
}

inline void validate_config(const RunConfig& cfg) {
    if (!(cfg.sparse > 0.0 && cfg.sparse < 1.0)) {
        throw ArgumentError("sparse must lie in (0, 1), got " + std::to_string(cfg.sparse));
    }
    if (cfg.dims < 1) throw ArgumentError("dims must be >= 1");
    if (!(cfg.metadoc_multiplier > 0) || !(cfg.metakey_multiplier > 0)) {
        throw ArgumentError("contribution multipliers must be > 0");
    }
    if (!(cfg.alpha > 0 && cfg.alpha < 1)) throw ArgumentError("alpha must lie in (0, 1)");
    if (cfg.max_window < 1) throw ArgumentError("max-window must be >= 1");
    if (cfg.replicates < 1) throw ArgumentError("replicates must be >= 1");
    if (cfg.glossary_limit < 0) throw ArgumentError("glossary-limit must be >= 0");
    if (cfg.years.min_year > cfg.years.max_year) {
        throw ArgumentError("year-min must not exceed year-max");
    }
    if (cfg.category != "year" && cfg.category != "country" && cfg.category != "author" &&
        cfg.category != "university") {
        throw ArgumentError("category must be one of year, country, author, university");
    }
}

inline json config_to_json(const RunConfig& cfg) {
    // `out` is deliberately absent: it names where artifacts live, not what
    // they contain, and keeping it out makes manifests comparable across
    // output directories.
    json j;
    j["input"] = cfg.input;
    j["format"] = to_string(cfg.format);
    j["stoplist"] = cfg.stoplist;
    j["stems"] = cfg.stems;
    j["sparse"] = cfg.sparse;
    j["dims"] = cfg.dims;
    j["metadoc_multiplier"] = cfg.metadoc_multiplier;
    j["metakey_multiplier"] = cfg.metakey_multiplier;
    j["alpha"] = cfg.alpha;
    j["max_window"] = cfg.max_window;
    j["replicates"] = cfg.replicates;
    j["seed"] = cfg.seed;
    j["category"] = cfg.category;
    j["glossary_limit"] = cfg.glossary_limit;
    j["year_min"] = cfg.years.min_year;
    j["year_max"] = cfg.years.max_year;
    return j;
}

// ---- pipeline ----

class Pipeline {
  public:
    explicit Pipeline(RunConfig config) : config_(std::move(config)), out_(config_.out) {
        validate_config(config_);
        std::error_code ec;
        std::filesystem::create_directories(out_, ec);
        if (ec) throw IoError("cannot create output directory " + out_.string());
        load_manifest();
    }

    // Runs one subcommand (or "all"); returns human-readable warnings.
    std::vector<std::string> run(const std::string& subcommand) {
        warnings_.clear();
        written_.clear();
        if (subcommand == "ingest") ingest();
        else if (subcommand == "stats") stats();
        else if (subcommand == "glossary") glossary();
        else if (subcommand == "ca") ca();
        else if (subcommand == "metasets") metasets();
        else if (subcommand == "charwords") charwords();
        else if (subcommand == "chrono") chrono();
        else if (subcommand == "permtest") permtest();
        else if (subcommand == "wordcloud") wordcloud();
        else if (subcommand == "plane") plane();
        else if (subcommand == "trajectory") trajectory();
        else if (subcommand == "all") {
            ingest();
            stats();
            glossary();
            ca();
            metasets();
            charwords();
            chrono();
            permtest();
            wordcloud();
            plane();
            trajectory();
        } else {
            throw ArgumentError("unknown subcommand \"" + subcommand + "\"");
        }
        save_manifest();
        return warnings_;
    }

    const std::vector<std::string>& written_files() const { return written_; }
    const std::filesystem::path& out_dir() const { return out_; }

  private:
    // -- manifest --

    void load_manifest() {
        auto path = out_ / artifact::manifest;
        if (!std::filesystem::exists(path)) {
            manifest_ = nlohmann::json::object();
            return;
        }
        try {
            manifest_ = nlohmann::json::parse(detail::read_file(path));
        } catch (const nlohmann::json::parse_error& e) {
            throw InputFormatError("manifest " + path.string() + ": " + e.what());
        }
    }

    void save_manifest() {
        manifest_["tool"] = {{"name", k_tool_name},
                             {"version", k_tool_version},
                             {"tokenizer", k_tokenizer_version}};
        manifest_["config"] = nlohmann::json::parse(config_to_json(config_).dump());
        write_file(out_ / artifact::manifest, manifest_.dump(2) + "\n");
        written_.push_back(artifact::manifest);
    }

    void record_input(const std::string& label, const std::filesystem::path& path,
                      const std::string& content) {
        manifest_["inputs"][label] = {{"path", path.string()}, {"sha256", sha256_hex(content)}};
    }

    void write_file(const std::filesystem::path& path, const std::string& content) {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open " + path.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw IoError("failed writing " + path.string());
    }

    void write_artifact(const char* name, const std::string& content) {
        write_file(out_ / name, content);
        manifest_["outputs"][name] = sha256_hex(content);
        written_.push_back(name);
    }

    std::string read_artifact(const char* name) {
        auto path = out_ / name;
        if (!std::filesystem::exists(path)) {
            throw PreconditionError("missing artifact " + path.string() +
                                    "; run the producing subcommand first (ingest for tables, "
                                    "ca for the model)");
        }
        std::string content = detail::read_file(path);
        if (manifest_.contains("outputs") && manifest_["outputs"].contains(name)) {
            std::string recorded = manifest_["outputs"][name].get<std::string>();
            if (recorded != sha256_hex(content)) {
                throw PreconditionError("artifact " + path.string() +
                                        " does not match the digest in manifest.json; re-run "
                                        "the subcommand that produces it");
            }
        }
        return content;
    }

    json read_json_artifact(const char* name) {
        try {
            return json::parse(read_artifact(name));
        } catch (const nlohmann::json::parse_error& e) {
            throw InputFormatError(std::string(name) + ": " + e.what());
        }
    }

    // -- artifact loading --

    Corpus load_corpus() { return corpus_from_json(read_json_artifact(artifact::corpus)); }

    LexicalTable load_table(const char* csv_name, const char* meta_name) {
        return table_from_artifacts(read_artifact(csv_name), read_json_artifact(meta_name));
    }

    CAModel load_model() { return ca_model_from_json(read_json_artifact(artifact::ca_model)); }

    std::vector<GlossaryEntry> glossary_entries(const LexicalTable& table) {
        std::size_t k = table.cols();
        if (config_.glossary_limit > 0) {
            k = std::min<std::size_t>(k, static_cast<std::size_t>(config_.glossary_limit));
        }
        return top_terms(table, k);
    }

    // -- subcommands --

    void ingest() {
        if (config_.input.empty()) {
            throw ArgumentError("ingest needs --input (or input= in the config file)");
        }
        StopwordList stoplist;
        if (!config_.stoplist.empty()) stoplist = load_stopwords(config_.stoplist);
        StemDictionary stems = StemDictionary::identity();
        if (!config_.stems.empty()) stems = load_stem_dictionary(config_.stems);

        IngestOptions options;
        options.format = config_.format;
        options.years = config_.years;
        std::string raw = detail::read_file(config_.input);
        record_input("corpus", config_.input, raw);
        if (!config_.stoplist.empty()) {
            record_input("stoplist", config_.stoplist, detail::read_file(config_.stoplist));
        }
        if (!config_.stems.empty()) {
            record_input("stems", config_.stems, detail::read_file(config_.stems));
        }

        Corpus corpus = ingest_corpus(config_.input, options, stoplist, stems);
        LexicalTable full = build_lexical_table(corpus);
        SparseFilterResult filtered = remove_sparse_terms(full, config_.sparse);
        for (const auto& id : filtered.zero_row_doc_ids) {
            warnings_.push_back("document \"" + id + "\" retains no terms after sparse filtering");
        }

        write_artifact(artifact::corpus, corpus_to_json(corpus).dump(2) + "\n");
        write_artifact(artifact::table_full, table_to_triplets_csv(full));
        write_artifact(artifact::table_full_meta,
                       table_sidecar_json(full, corpus.provenance).dump(2) + "\n");
        write_artifact(artifact::table_filtered, table_to_triplets_csv(filtered.table));
        json filtered_meta = table_sidecar_json(filtered.table, corpus.provenance);
        filtered_meta["sparse_param"] = filtered.sparse_param;
        filtered_meta["zero_row_doc_ids"] = filtered.zero_row_doc_ids;
        write_artifact(artifact::table_filtered_meta, filtered_meta.dump(2) + "\n");
    }

    void stats() {
        StatsReport report = descriptive_stats(load_corpus());
        write_artifact(artifact::stats, stats_to_json(report).dump(2) + "\n");
    }

    void glossary() {
        LexicalTable table = load_table(artifact::table_filtered, artifact::table_filtered_meta);
        write_artifact(artifact::glossary, glossary_to_csv(glossary_entries(table)));
    }

    void ca() {
        LexicalTable table = load_table(artifact::table_filtered, artifact::table_filtered_meta);
        CAInput input = ca_input_from_table(table);
        std::vector<std::string> dropped = drop_zero_rows(input);
        for (const auto& id : dropped) {
            warnings_.push_back("document \"" + id + "\" dropped from CA (all-zero row)");
        }
        CAModel model = fit_ca(input, config_.dims);
        json j = ca_model_to_json(model);
        j["dropped_rows"] = dropped;
        write_artifact(artifact::ca_model, j.dump(2) + "\n");
        write_artifact(artifact::ca_row_coords, coords_to_csv(model.row_labels, model.row_coords));
        write_artifact(artifact::ca_col_coords, coords_to_csv(model.col_labels, model.col_coords));
    }

    void metasets() {
        CAModel model = load_model();
        if (model.n_dims_kept < 1) {
            throw PreconditionError("metasets: the model keeps no dimensions");
        }
        json sets = json::array();
        const int axes = std::min(model.n_dims_kept, 2);
        for (int axis = 0; axis < axes; ++axis) {
            for (AxisSign sign : {AxisSign::Positive, AxisSign::Negative}) {
                sets.push_back(metaset_to_json(extract_metaset(
                    model, axis, PointKind::Row, sign, config_.metadoc_multiplier)));
                sets.push_back(metaset_to_json(extract_metaset(
                    model, axis, PointKind::Column, sign, config_.metakey_multiplier)));
            }
        }
        json j;
        j["metadoc_multiplier"] = config_.metadoc_multiplier;
        j["metakey_multiplier"] = config_.metakey_multiplier;
        j["sets"] = std::move(sets);
        write_artifact(artifact::metasets, j.dump(2) + "\n");
    }

    AggregatedTable aggregated(const std::string& key) {
        Corpus corpus = load_corpus();
        LexicalTable table = load_table(artifact::table_filtered, artifact::table_filtered_meta);
        return aggregate_by_category(table, corpus, key);
    }

    void charwords() {
        CharacteristicWordsResult result =
            characteristic_words(aggregated(config_.category), config_.alpha);
        write_artifact(artifact::charwords_csv, charwords_to_csv(result));
        write_artifact(artifact::charwords_json, charwords_to_json(result).dump(2) + "\n");
    }

    void chrono() {
        ChronologicalWordsResult result = chronological_words(
            aggregated("year"), config_.alpha, static_cast<std::size_t>(config_.max_window));
        write_artifact(artifact::chrono_csv, chrono_to_csv(result));
        write_artifact(artifact::chrono_json, chrono_to_json(result).dump(2) + "\n");
    }

    void permtest() {
        Corpus corpus = load_corpus();
        LexicalTable table = load_table(artifact::table_filtered, artifact::table_filtered_meta);
        PermTestResult result = first_eigenvalue_test(corpus, table, "year", config_.replicates,
                                                      config_.seed);
        write_artifact(artifact::permtest, permtest_to_json(result).dump(2) + "\n");
    }

    void wordcloud() {
        LexicalTable table = load_table(artifact::table_filtered, artifact::table_filtered_meta);
        WordcloudResult cloud = render_wordcloud(glossary_entries(table), PlotSpec{});
        for (const auto& term : cloud.dropped) {
            warnings_.push_back("wordcloud: no room for \"" + term + "\"; dropped");
        }
        write_artifact(artifact::wordcloud, cloud.svg);
    }

    void plane() {
        CAModel model = load_model();
        if (model.n_dims_kept < 2) {
            throw PreconditionError("plane: the factorial plane needs 2 kept dimensions, model "
                                    "keeps " +
                                    std::to_string(model.n_dims_kept));
        }
        std::vector<PlanePoint> points;
        auto add_members = [&](PointKind kind, double multiplier, const char* group) {
            const Eigen::MatrixXd& coords =
                kind == PointKind::Row ? model.row_coords : model.col_coords;
            const auto& labels = kind == PointKind::Row ? model.row_labels : model.col_labels;
            std::set<std::string> seen;
            for (int axis = 0; axis < 2; ++axis) {
                for (AxisSign sign : {AxisSign::Positive, AxisSign::Negative}) {
                    for (const auto& m : extract_metaset(model, axis, kind, sign, multiplier)
                                             .members) {
                        if (!seen.insert(m.id).second) continue;
                        auto it = std::find(labels.begin(), labels.end(), m.id);
                        auto i = static_cast<Eigen::Index>(it - labels.begin());
                        points.push_back({m.id, coords(i, 0), coords(i, 1), group});
                    }
                }
            }
        };
        add_members(PointKind::Row, config_.metadoc_multiplier, "abstracts");
        add_members(PointKind::Column, config_.metakey_multiplier, "words");
        if (points.empty()) {
            throw PreconditionError(
                "plane: no point passes the contribution thresholds; lower "
                "metadoc-multiplier/metakey-multiplier in the config file");
        }
        write_artifact(artifact::plane, render_plane(points, plane_axes(model), PlotSpec{}).svg);
    }

    void trajectory() {
        AggregatedTable agg = aggregated("year");
        CAModel model = fit_ca(ca_input_from_aggregated(agg), config_.dims);
        if (model.n_dims_kept < 2) {
            throw PreconditionError("trajectory: the year CA keeps " +
                                    std::to_string(model.n_dims_kept) +
                                    " dimensions; need 2 (more distinct years or terms)");
        }
        std::vector<TrajectoryPoint> points;
        for (std::size_t j = 0; j < agg.categories.size(); ++j) {
            points.push_back({agg.categories[j],
                              model.col_coords(static_cast<Eigen::Index>(j), 0),
                              model.col_coords(static_cast<Eigen::Index>(j), 1)});
        }
        write_artifact(artifact::trajectory,
                       render_trajectory(points, plane_axes(model), PlotSpec{}));
    }

    static PlaneAxes plane_axes(const CAModel& model) {
        PlaneAxes axes;
        axes.dim_x = 1;
        axes.dim_y = 2;
        axes.inertia_pct_x = 100.0 * model.eigenvalues(0) / model.total_inertia;
        axes.inertia_pct_y = 100.0 * model.eigenvalues(1) / model.total_inertia;
        return axes;
    }

    RunConfig config_;
    std::filesystem::path out_;
    nlohmann::json manifest_;  // sorted keys: byte-stable across runs
    std::vector<std::string> warnings_;
    std::vector<std::string> written_;
};

}  // namespace lexca
