#ifndef GENECLUSTER_PREPROCESS_HPP
#define GENECLUSTER_PREPROCESS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "genecluster/expr_matrix.hpp"
#include "genecluster/matrix.hpp"

namespace genecluster {

enum class NormScheme { ZScore, MinMax, ColumnMean, RowUnit };

/// Preprocessing variant. None means "cluster the raw values".
enum class Method { None = 0, I = 1, II = 2, III = 3, IV = 4 };

const char* method_name(Method m);
const char* scheme_name(NormScheme s);

struct NormalizedMatrix {
    std::vector<std::string> gene_ids;
    std::vector<std::string> condition_ids;
    Matrix values;
    NormScheme scheme;
    // MinMax only: the target range the rows were mapped onto.
    double range_min = 0.0;
    double range_max = 1.0;
};

/// Integer regulation-pattern matrix. Every code is a member of `alphabet`:
/// {-1,0,1} for Methods I and IV, {1..4} for Method II, {1..k} for Method III
/// with k bins.
struct DiscretizedMatrix {
    std::vector<std::string> gene_ids;
    std::vector<std::string> condition_ids;
    CodeMatrix codes;
    std::vector<int> alphabet;
    Method method = Method::None;
};

/// Per-gene standardization: z = (x - mean) / sd with the population standard
/// deviation of the row. Rows with sd = 0 map to all zeros. Requires at least
/// two conditions.
NormalizedMatrix zscore_normalize(const ExpressionMatrix& m);

/// Ternary regulation codes from z-scored data: the first condition takes the
/// sign of its value; each later condition compares against its predecessor
/// (+1 rise, 0 equal, -1 fall).
DiscretizedMatrix discretize_method1(const NormalizedMatrix& nm);

/// Per-gene linear rescale onto [new_min, new_max] using the row's min and
/// max. A constant row has no defined image and raises DataError naming the
/// gene.
NormalizedMatrix minmax_normalize(const ExpressionMatrix& m, double new_min = 0.0,
                                  double new_max = 1.0);

/// Quartile codes on [0,1]-normalized data: [0,.25) -> 1, [.25,.5) -> 2,
/// [.5,.75) -> 3, [.75,1] -> 4. Values outside [0,1] beyond 1e-12 raise.
DiscretizedMatrix discretize_method2(const NormalizedMatrix& nm);

/// Divides each column by its arithmetic mean, so every column mean becomes
/// 1. A zero-mean column raises DataError naming the condition.
NormalizedMatrix column_mean_normalize(const ExpressionMatrix& m);

/// Equal-width binning into codes 1..bins. Bin edges come from the global
/// min/max of the whole matrix by default, or per column when per_column is
/// set; bins are left-closed, right-open, with the last bin closed at the
/// maximum.
DiscretizedMatrix discretize_method3(const NormalizedMatrix& nm, std::size_t bins,
                                     bool per_column = false);

/// Scales each gene row to unit Euclidean length. An all-zero row raises
/// DataError naming the gene.
NormalizedMatrix row_unit_normalize(const ExpressionMatrix& m);

/// Sign codes on unit-normalized rows: -1 negative, +1 positive, 0 exactly
/// zero.
DiscretizedMatrix discretize_method4(const NormalizedMatrix& nm);

/// The gene's codes joined in condition order, comma separated ("1,-1,0").
std::string pattern_string(const DiscretizedMatrix& dm, const std::string& gene_id);

/// Runs the full normalize+discretize pipeline for one method. `bins` is
/// Method III's bin count (default 4 for parity with Method II).
DiscretizedMatrix apply_method(const ExpressionMatrix& m, Method method, std::size_t bins = 4);

/// Codes as a dense real matrix, one point per gene, for clustering and
/// silhouette computation.
Matrix codes_as_points(const DiscretizedMatrix& dm);

/// Same delimited shape as ExpressionMatrix, integer cells.
void save_codes(const DiscretizedMatrix& dm, const std::filesystem::path& path,
                char delimiter = ',');

/// One line per gene: "gene_id<TAB>pattern".
void save_patterns(const DiscretizedMatrix& dm, const std::filesystem::path& path);

}  // namespace genecluster

#endif  // GENECLUSTER_PREPROCESS_HPP
