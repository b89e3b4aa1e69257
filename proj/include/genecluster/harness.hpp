#ifndef GENECLUSTER_HARNESS_HPP
#define GENECLUSTER_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genecluster/cluster.hpp"
#include "genecluster/preprocess.hpp"

namespace genecluster {

struct SyntheticSpec {
    std::size_t n_genes = 300;
    std::size_t n_conditions = 17;
    std::size_t k_true = 12;
    double spread = 0.05;
    std::uint64_t seed = 1;
    bool width_defaulted = false;  // condition count fell back to the default
};

/// One dataset entry: either a delimited file on disk or a synthetic spec.
struct DatasetSpec {
    std::string name;
    std::optional<std::filesystem::path> csv;
    char delimiter = ',';
    std::optional<SyntheticSpec> synthetic;
};

struct ExperimentConfig {
    std::vector<DatasetSpec> datasets;
    std::vector<Method> preprocessing = {Method::None, Method::I, Method::II, Method::III,
                                         Method::IV};
    std::size_t bins = 4;  // Method III bin count
    std::size_t k_clusters = 12;
    std::size_t n_runs = 10;
    std::uint64_t base_seed = 1;
    KMeansOptions kmeans;
};

struct DatasetMeta {
    std::string name;
    std::size_t n_genes = 0;       // after missing-value removal
    std::size_t n_genes_raw = 0;
    std::size_t n_conditions = 0;
    bool synthetic = false;
    bool width_defaulted = false;
};

/// One (dataset x preprocessing x strategy) cell. Aggregates are over the
/// n_runs random-seeded runs; a deterministic CCIA run fills best == mean
/// with zero spread. A cell that failed carries the error text instead of
/// numbers. `ari` compares the best run against the generating labels and is
/// present for synthetic datasets only (it goes beyond the silhouette-based
/// protocol).
struct CellResult {
    std::string dataset;
    Method preprocessing = Method::None;
    InitStrategy strategy = InitStrategy::Random;
    bool ok = false;
    std::string error;
    double best_silhouette = 0.0;
    double mean_silhouette = 0.0;
    double std_silhouette = 0.0;
    double mean_iterations = 0.0;
    double wall_time_s = 0.0;  // measured, not reproducible
    std::optional<double> ari;
};

struct ExperimentResult {
    std::vector<DatasetMeta> datasets;
    std::vector<Method> preprocessing;
    std::size_t k_clusters = 0;
    std::size_t n_runs = 0;
    std::vector<CellResult> cells;  // dataset-major, strategy, then variant

    const CellResult* find(const std::string& dataset, InitStrategy strategy,
                           Method preprocessing) const;
    bool any_failed() const;
};

enum class TableFormat { Csv, Json, Markdown };

/// Four synthetic stand-in datasets shaped 517x17, 2882x17, 300x17 and
/// 7129x34 (the 17-wide sets are defaults where no width is prescribed).
ExperimentConfig default_config();

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Runs every (dataset x preprocessing x strategy) cell: the random strategy
/// clusters n_runs times with seeds base_seed .. base_seed+n_runs-1, CCIA
/// once (it is deterministic). Aside from wall_time_s, the result is a pure
/// function of the config. Failing cells are recorded, never silently zero.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Comparison grid: one row per (dataset, strategy), one column per
/// preprocessing variant, best silhouette at 4 decimal places. The JSON form
/// carries full-precision values and all aggregates.
std::string render_table(const ExperimentResult& r, TableFormat format);

/// Grouped bar chart (SVG): one panel per strategy, one group per dataset,
/// one bar per preprocessing variant. Re-rendering the same result writes
/// byte-identical output.
void render_chart(const ExperimentResult& r, const std::filesystem::path& out);

/// Adjusted Rand index between two labelings of the same points, in [-1, 1]
/// with 1 for identical partitions.
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace genecluster

#endif  // GENECLUSTER_HARNESS_HPP
