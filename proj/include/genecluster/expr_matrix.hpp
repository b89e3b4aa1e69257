#ifndef GENECLUSTER_EXPR_MATRIX_HPP
#define GENECLUSTER_EXPR_MATRIX_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "genecluster/matrix.hpp"

namespace genecluster {

/// Gene-expression matrix: rows are genes, columns are conditions/samples.
/// Cells flagged in `missing` carried no value in the source; their entry in
/// `values` is 0 and must not be interpreted. All non-missing entries are
/// finite.
struct ExpressionMatrix {
    std::vector<std::string> gene_ids;
    std::vector<std::string> condition_ids;
    Matrix values;       // n_genes x n_conditions
    MaskMatrix missing;  // same shape, 1 where the source had no value

    std::size_t n_genes() const { return gene_ids.size(); }
    std::size_t n_conditions() const { return condition_ids.size(); }
    bool has_missing() const;
};

/// Records what missing-value removal did to a dataset.
struct DatasetSummary {
    std::size_t n_genes_raw = 0;
    std::size_t n_genes_kept = 0;
    std::size_t n_conditions = 0;
    std::size_t n_missing_cells = 0;
};

/// Delimited-text parsing options. The first row holds condition ids and the
/// first column holds gene ids; a cell equal to one of `missing_tokens`
/// (or empty) is recorded in the missing mask.
struct CsvOptions {
    char delimiter = ',';
    bool header = true;
    std::vector<std::string> missing_tokens = {"", "NA"};
};

ExpressionMatrix load_matrix(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Writes the matrix in the same delimited shape load_matrix reads. Values
/// are printed as the shortest decimal text that round-trips to the same
/// double; missing cells become empty fields.
void save_matrix(const ExpressionMatrix& m, const std::filesystem::path& path,
                 char delimiter = ',');

/// Keeps exactly the genes whose rows have no missing cell, in original
/// order. Throws DataError if nothing survives.
std::pair<ExpressionMatrix, DatasetSummary> drop_incomplete_genes(const ExpressionMatrix& m);

struct BlobData {
    ExpressionMatrix matrix;
    std::vector<std::size_t> true_labels;  // per-gene generating cluster
};

/// Deterministic isotropic Gaussian blobs for benchmarking. The k_true
/// centers carry dense mixed-sign profiles (a three-phase base pattern plus
/// one dominant flipped coordinate per cluster) with pairwise distance at
/// least max(1, 1.5*spread), and column sums bounded away from zero whenever
/// k_true <= n_conditions, so cluster structure survives row- and
/// column-wise normalization alike. Per-coordinate noise has standard
/// deviation `spread`; genes take clusters round-robin, so all k_true labels
/// occur whenever n_genes >= k_true. Identical arguments give bit-identical
/// output on every platform (mt19937_64 plus Irwin-Hall normals).
BlobData synthesize_blobs(std::size_t n_genes, std::size_t n_conditions, std::size_t k_true,
                          double spread, std::uint64_t seed);

}  // namespace genecluster

#endif  // GENECLUSTER_EXPR_MATRIX_HPP
