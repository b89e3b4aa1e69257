// genecluster: batch front end for expression-matrix preprocessing,
// K-Means/CCIA clustering, silhouette evaluation and the comparison
// experiment harness.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "genecluster/cluster.hpp"
#include "genecluster/error.hpp"
#include "genecluster/expr_matrix.hpp"
#include "genecluster/harness.hpp"
#include "genecluster/io_util.hpp"
#include "genecluster/preprocess.hpp"
#include "genecluster/silhouette.hpp"

namespace {

using namespace genecluster;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

struct PreprocessArgs {
    std::string input;
    int method = 1;
    std::size_t bins = 4;
    bool per_column = false;
    std::string output = "codes.csv";
    std::string patterns;
    std::string delimiter = ",";
};

int run_preprocess(const PreprocessArgs& args) {
    CsvOptions opts;
    opts.delimiter = args.delimiter[0];
    const ExpressionMatrix raw = load_matrix(args.input, opts);
    const auto [clean, summary] = drop_incomplete_genes(raw);

    DiscretizedMatrix dm;
    switch (args.method) {
        case 1: dm = discretize_method1(zscore_normalize(clean)); break;
        case 2: dm = discretize_method2(minmax_normalize(clean)); break;
        case 3:
            dm = discretize_method3(column_mean_normalize(clean), args.bins, args.per_column);
            break;
        case 4: dm = discretize_method4(row_unit_normalize(clean)); break;
        default: throw DataError("method must be 1, 2, 3 or 4");
    }
    save_codes(dm, args.output, opts.delimiter);
    if (!args.patterns.empty()) save_patterns(dm, args.patterns);

    nlohmann::json meta;
    meta["method"] = method_name(dm.method);
    meta["alphabet"] = dm.alphabet;
    if (args.method == 3) {
        meta["bins"] = args.bins;
        meta["per_column"] = args.per_column;
    }
    meta["genes_raw"] = summary.n_genes_raw;
    meta["genes_kept"] = summary.n_genes_kept;
    meta["missing_cells_removed"] = summary.n_missing_cells;
    meta["conditions"] = summary.n_conditions;
    atomic_write(args.output + ".meta.json", meta.dump(2) + "\n");

    std::cout << args.output << "\n";
    return kExitOk;
}

struct ClusterArgs {
    std::string input;
    std::size_t k = 12;
    std::string init = "random";
    std::uint64_t seed = 1;
    std::size_t runs = 1;
    std::string output_dir = "cluster_out";
    std::string delimiter = ",";
};

int run_cluster(const ClusterArgs& args) {
    CsvOptions opts;
    opts.delimiter = args.delimiter[0];
    const ExpressionMatrix raw = load_matrix(args.input, opts);
    const auto [clean, summary] = drop_incomplete_genes(raw);
    const Matrix& points = clean.values;
    if (args.k > clean.n_genes())
        throw DataError("k=" + std::to_string(args.k) + " exceeds the " +
                        std::to_string(clean.n_genes()) + " complete genes in " + args.input);

    const fs::path dir(args.output_dir);
    fs::create_directories(dir);

    if (args.init == "ccia") {
        if (args.runs > 1)
            std::cerr << "note: ccia initialization is deterministic; running once\n";
        const ClusteringResult result = kmeans(points, ccia_init(points, args.k));
        save_result_json(result, dir / "result.json");
        save_assignments_csv(result, clean.gene_ids, dir / "assignments.csv");
        std::cout << format_score(result.sse) << "\n";
        return kExitOk;
    }

    std::vector<ClusteringResult> results;
    results.reserve(args.runs);
    for (std::size_t r = 0; r < args.runs; ++r) {
        const auto init = random_init(points, args.k, args.seed + r);
        results.push_back(kmeans(points, init));
    }
    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r)
        if (results[r].sse < results[best].sse) best = r;

    if (args.runs > 1) {
        for (std::size_t r = 0; r < results.size(); ++r) {
            char name[32];
            std::snprintf(name, sizeof(name), "run_%02zu", r);
            save_result_json(results[r], dir / (std::string(name) + ".json"));
            save_assignments_csv(results[r], clean.gene_ids,
                                 dir / (std::string(name) + ".csv"));
        }
        nlohmann::json pointer;
        pointer["best_run"] = best;
        pointer["seed"] = results[best].centroids.seed;
        pointer["sse"] = results[best].sse;
        char name[32];
        std::snprintf(name, sizeof(name), "run_%02zu", best);
        pointer["result"] = std::string(name) + ".json";
        pointer["assignments"] = std::string(name) + ".csv";
        atomic_write(dir / "best.json", pointer.dump(2) + "\n");
    }
    save_result_json(results[best], dir / "result.json");
    save_assignments_csv(results[best], clean.gene_ids, dir / "assignments.csv");
    std::cout << format_score(results[best].sse) << "\n";
    return kExitOk;
}

struct SilhouetteArgs {
    std::string input;
    std::string assignments;
    std::string output = "silhouette_report.json";
    std::string csv;
    std::string delimiter = ",";
};

int run_silhouette(const SilhouetteArgs& args) {
    CsvOptions opts;
    opts.delimiter = args.delimiter[0];
    const ExpressionMatrix raw = load_matrix(args.input, opts);
    const auto [clean, summary] = drop_incomplete_genes(raw);

    const auto rows = load_assignments_csv(args.assignments);
    std::map<std::string, std::size_t> by_id(rows.begin(), rows.end());
    if (by_id.size() != rows.size())
        throw DataError(args.assignments + ": duplicate gene id");

    std::vector<std::size_t> assignments;
    assignments.reserve(clean.n_genes());
    std::size_t k = 0;
    for (const auto& gene : clean.gene_ids) {
        const auto it = by_id.find(gene);
        if (it == by_id.end())
            throw DataError("gene '" + gene + "' from " + args.input +
                            " has no row in " + args.assignments);
        assignments.push_back(it->second);
        k = std::max(k, it->second + 1);
    }
    if (rows.size() != clean.n_genes()) {
        for (const auto& [gene, cluster] : rows)
            if (std::find(clean.gene_ids.begin(), clean.gene_ids.end(), gene) ==
                clean.gene_ids.end())
                throw DataError("gene '" + gene + "' from " + args.assignments +
                                " has no row in " + args.input);
    }

    const SilhouetteReport report = silhouette(clean.values, assignments, k);
    save_report_json(report, args.output);
    if (!args.csv.empty()) save_report_csv(report, clean.gene_ids, assignments, args.csv);
    std::cout << format_score(report.overall_mean) << "\n";
    return kExitOk;
}

struct ExperimentArgs {
    std::string config;
    std::string output_dir = "experiment_out";
};

int run_experiment_cmd(const ExperimentArgs& args) {
    const ExperimentConfig cfg = args.config.empty() ? default_config() : load_config(args.config);
    const ExperimentResult result = run_experiment(cfg);

    const fs::path dir(args.output_dir);
    fs::create_directories(dir);
    atomic_write(dir / "table.csv", render_table(result, TableFormat::Csv));
    atomic_write(dir / "table.json", render_table(result, TableFormat::Json));
    const std::string md = render_table(result, TableFormat::Markdown);
    atomic_write(dir / "table.md", md);
    render_chart(result, dir / "chart.svg");

    std::cout << md;
    for (const auto& d : result.datasets) {
        std::size_t wins = 0, comparable = 0;
        for (Method m : result.preprocessing) {
            const CellResult* random_cell = result.find(d.name, InitStrategy::Random, m);
            const CellResult* ccia_cell = result.find(d.name, InitStrategy::Ccia, m);
            if (!random_cell || !ccia_cell || !random_cell->ok || !ccia_cell->ok) continue;
            ++comparable;
            if (ccia_cell->best_silhouette >= random_cell->best_silhouette) ++wins;
        }
        std::cout << "trend " << d.name << ": ccia+kmeans >= kmeans in " << wins << "/"
                  << comparable << " variants\n";
    }

    if (result.any_failed()) {
        for (const auto& c : result.cells)
            if (!c.ok)
                std::cerr << "cell " << c.dataset << "/" << method_name(c.preprocessing) << "/"
                          << strategy_name(c.strategy) << " failed: " << c.error << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

struct SynthArgs {
    std::size_t genes = 300;
    std::size_t conditions = 17;
    std::size_t k_true = 12;
    double spread = 0.05;
    std::uint64_t seed = 1;
    std::string output = "synthetic.csv";
    std::string labels;
};

int run_synth(const SynthArgs& args) {
    const BlobData blob =
        synthesize_blobs(args.genes, args.conditions, args.k_true, args.spread, args.seed);
    save_matrix(blob.matrix, args.output);
    if (!args.labels.empty()) {
        std::string out = "gene_id,label\n";
        for (std::size_t g = 0; g < blob.true_labels.size(); ++g) {
            out += blob.matrix.gene_ids[g];
            out += ',';
            out += std::to_string(blob.true_labels[g]);
            out += '\n';
        }
        atomic_write(args.labels, out);
    }
    std::cout << args.output << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gene-expression clustering toolkit"};
    app.require_subcommand(1);

    PreprocessArgs pre;
    auto* cmd_pre = app.add_subcommand(
        "preprocess", "Normalize and discretize an expression matrix (methods 1-4)");
    cmd_pre->add_option("--input", pre.input, "expression matrix CSV")->required();
    cmd_pre->add_option("--method", pre.method, "discretization method (1-4)")
        ->required()
        ->check(CLI::Range(1, 4));
    cmd_pre->add_option("--bins", pre.bins, "bin count for method 3 (default 4)");
    cmd_pre->add_flag("--per-column", pre.per_column,
                      "method 3: bin each condition independently");
    cmd_pre->add_option("--output", pre.output, "codes CSV to write");
    cmd_pre->add_option("--patterns", pre.patterns, "also write gene_id<TAB>pattern lines");
    cmd_pre->add_option("--delimiter", pre.delimiter, "field delimiter (default ,)");

    ClusterArgs clu;
    auto* cmd_clu = app.add_subcommand("cluster", "K-Means clustering of matrix rows");
    cmd_clu->add_option("--input", clu.input, "matrix CSV (raw or discretized)")->required();
    cmd_clu->add_option("--k", clu.k, "number of clusters")->required();
    cmd_clu->add_option("--init", clu.init, "initialization: random or ccia")
        ->check(CLI::IsMember({"random", "ccia"}));
    cmd_clu->add_option("--seed", clu.seed, "base seed for random init");
    cmd_clu->add_option("--runs", clu.runs, "random-init restarts (best by SSE wins)");
    cmd_clu->add_option("--output-dir", clu.output_dir, "directory for result files");
    cmd_clu->add_option("--delimiter", clu.delimiter, "field delimiter (default ,)");

    SilhouetteArgs sil;
    auto* cmd_sil = app.add_subcommand("silhouette", "Silhouette widths for a clustering");
    cmd_sil->add_option("--input", sil.input, "matrix CSV the clustering ran on")->required();
    cmd_sil->add_option("--assignments", sil.assignments, "gene_id,cluster CSV")->required();
    cmd_sil->add_option("--output", sil.output, "report JSON to write");
    cmd_sil->add_option("--csv", sil.csv, "also write per-gene CSV report");
    cmd_sil->add_option("--delimiter", sil.delimiter, "field delimiter (default ,)");

    ExperimentArgs exp;
    auto* cmd_exp = app.add_subcommand(
        "experiment", "K-Means vs CCIA+K-Means comparison over preprocessing variants");
    cmd_exp->add_option("--config", exp.config, "experiment config JSON (default: built-in)");
    cmd_exp->add_option("--output-dir", exp.output_dir, "directory for tables and charts");

    SynthArgs syn;
    auto* cmd_syn = app.add_subcommand("synth", "Generate a synthetic blob dataset");
    cmd_syn->add_option("--genes", syn.genes, "number of genes (rows)");
    cmd_syn->add_option("--conditions", syn.conditions, "number of conditions (columns)");
    cmd_syn->add_option("--k", syn.k_true, "number of generating clusters");
    cmd_syn->add_option("--spread", syn.spread, "per-coordinate noise level");
    cmd_syn->add_option("--seed", syn.seed, "generator seed");
    cmd_syn->add_option("--output", syn.output, "matrix CSV to write");
    cmd_syn->add_option("--labels", syn.labels, "also write gene_id,label CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        for (const auto& arg : {pre.delimiter, clu.delimiter, sil.delimiter})
            if (arg.size() != 1) throw ConfigError("--delimiter must be a single character");
        if (cmd_pre->parsed()) return run_preprocess(pre);
        if (cmd_clu->parsed()) return run_cluster(clu);
        if (cmd_sil->parsed()) return run_silhouette(sil);
        if (cmd_exp->parsed()) return run_experiment_cmd(exp);
        if (cmd_syn->parsed()) return run_synth(syn);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
