#include "genecluster/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "genecluster/error.hpp"
#include "genecluster/io_util.hpp"

namespace genecluster {

namespace {

void require_complete(const ExpressionMatrix& m, const char* op) {
    if (m.n_genes() == 0 || m.n_conditions() == 0)
        throw DataError(std::string(op) + ": empty matrix");
    if (m.has_missing())
        throw DataError(std::string(op) +
                        ": matrix still has missing values; drop incomplete genes first");
}

NormalizedMatrix make_normalized(const ExpressionMatrix& m, NormScheme scheme) {
    NormalizedMatrix nm;
    nm.gene_ids = m.gene_ids;
    nm.condition_ids = m.condition_ids;
    nm.values = Matrix(m.n_genes(), m.n_conditions());
    nm.scheme = scheme;
    return nm;
}

DiscretizedMatrix make_discretized(const NormalizedMatrix& nm, Method method,
                                   std::vector<int> alphabet) {
    DiscretizedMatrix dm;
    dm.gene_ids = nm.gene_ids;
    dm.condition_ids = nm.condition_ids;
    dm.codes = CodeMatrix(nm.values.rows(), nm.values.cols());
    dm.alphabet = std::move(alphabet);
    dm.method = method;
    return dm;
}

int sign_code(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::None: return "none";
        case Method::I: return "method1";
        case Method::II: return "method2";
        case Method::III: return "method3";
        case Method::IV: return "method4";
    }
    return "?";
}

const char* scheme_name(NormScheme s) {
    switch (s) {
        case NormScheme::ZScore: return "z-score";
        case NormScheme::MinMax: return "min-max";
        case NormScheme::ColumnMean: return "column-mean";
        case NormScheme::RowUnit: return "row-unit";
    }
    return "?";
}

NormalizedMatrix zscore_normalize(const ExpressionMatrix& m) {
    require_complete(m, "zscore_normalize");
    if (m.n_conditions() < 2)
        throw DataError("zscore_normalize: needs at least 2 conditions per gene");
    NormalizedMatrix nm = make_normalized(m, NormScheme::ZScore);
    const std::size_t n = m.n_conditions();
    for (std::size_t r = 0; r < m.n_genes(); ++r) {
        const auto row = m.values.row(r);
        double mean = 0.0;
        for (double v : row) mean += v;
        mean /= double(n);
        double var = 0.0;
        for (double v : row) var += (v - mean) * (v - mean);
        var /= double(n);
        const double sd = std::sqrt(var);
        auto out = nm.values.row(r);
        if (sd == 0.0) {
            std::fill(out.begin(), out.end(), 0.0);
        } else {
            for (std::size_t c = 0; c < n; ++c) out[c] = (row[c] - mean) / sd;
        }
    }
    return nm;
}

DiscretizedMatrix discretize_method1(const NormalizedMatrix& nm) {
    if (nm.scheme != NormScheme::ZScore)
        throw DataError("discretize_method1: input must be z-score normalized");
    if (nm.values.cols() < 1) throw DataError("discretize_method1: needs at least one condition");
    DiscretizedMatrix dm = make_discretized(nm, Method::I, {-1, 0, 1});
    for (std::size_t r = 0; r < nm.values.rows(); ++r) {
        const auto row = nm.values.row(r);
        dm.codes(r, 0) = sign_code(row[0]);
        for (std::size_t c = 1; c < row.size(); ++c)
            dm.codes(r, c) = sign_code(row[c] - row[c - 1]);
    }
    return dm;
}

NormalizedMatrix minmax_normalize(const ExpressionMatrix& m, double new_min, double new_max) {
    require_complete(m, "minmax_normalize");
    if (!(new_min < new_max))
        throw DataError("minmax_normalize: new_min must be less than new_max");
    NormalizedMatrix nm = make_normalized(m, NormScheme::MinMax);
    nm.range_min = new_min;
    nm.range_max = new_max;
    for (std::size_t r = 0; r < m.n_genes(); ++r) {
        const auto row = m.values.row(r);
        const auto [lo_it, hi_it] = std::minmax_element(row.begin(), row.end());
        const double lo = *lo_it, hi = *hi_it;
        if (lo == hi)
            throw DataError("minmax_normalize: gene '" + m.gene_ids[r] +
                            "' is constant; min-max range is zero");
        auto out = nm.values.row(r);
        for (std::size_t c = 0; c < row.size(); ++c)
            out[c] = (row[c] - lo) / (hi - lo) * (new_max - new_min) + new_min;
    }
    return nm;
}

DiscretizedMatrix discretize_method2(const NormalizedMatrix& nm) {
    if (nm.scheme != NormScheme::MinMax || nm.range_min != 0.0 || nm.range_max != 1.0)
        throw DataError("discretize_method2: input must be min-max normalized onto [0,1]");
    DiscretizedMatrix dm = make_discretized(nm, Method::II, {1, 2, 3, 4});
    constexpr double tol = 1e-12;
    for (std::size_t r = 0; r < nm.values.rows(); ++r) {
        for (std::size_t c = 0; c < nm.values.cols(); ++c) {
            const double v = nm.values(r, c);
            if (v < -tol || v > 1.0 + tol)
                throw DataError("discretize_method2: value " + format_double(v) + " at gene '" +
                                nm.gene_ids[r] + "' lies outside [0,1]");
            int code;
            if (v < 0.25) code = 1;
            else if (v < 0.5) code = 2;
            else if (v < 0.75) code = 3;
            else code = 4;
            dm.codes(r, c) = code;
        }
    }
    return dm;
}

NormalizedMatrix column_mean_normalize(const ExpressionMatrix& m) {
    require_complete(m, "column_mean_normalize");
    NormalizedMatrix nm = make_normalized(m, NormScheme::ColumnMean);
    const std::size_t rows = m.n_genes(), cols = m.n_conditions();
    for (std::size_t c = 0; c < cols; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < rows; ++r) mean += m.values(r, c);
        mean /= double(rows);
        if (mean == 0.0)
            throw DataError("column_mean_normalize: condition '" + m.condition_ids[c] +
                            "' has zero mean");
        for (std::size_t r = 0; r < rows; ++r) nm.values(r, c) = m.values(r, c) / mean;
    }
    return nm;
}

DiscretizedMatrix discretize_method3(const NormalizedMatrix& nm, std::size_t bins,
                                     bool per_column) {
    if (bins == 0) throw DataError("discretize_method3: bin count must be >= 1");
    std::vector<int> alphabet(bins);
    std::iota(alphabet.begin(), alphabet.end(), 1);
    DiscretizedMatrix dm = make_discretized(nm, Method::III, std::move(alphabet));

    // floor((v - lo)/width) clamped into [0, bins); the clamp closes the last
    // bin at the maximum.
    auto bin_of = [bins](double v, double lo, double width) {
        auto idx = (long long)(std::floor((v - lo) / width));
        if (idx < 0) idx = 0;
        if (idx >= (long long)bins) idx = (long long)bins - 1;
        return int(idx) + 1;
    };

    const std::size_t rows = nm.values.rows(), cols = nm.values.cols();
    if (rows == 0 || cols == 0) throw DataError("discretize_method3: empty matrix");
    if (per_column) {
        for (std::size_t c = 0; c < cols; ++c) {
            double lo = nm.values(0, c), hi = lo;
            for (std::size_t r = 1; r < rows; ++r) {
                lo = std::min(lo, nm.values(r, c));
                hi = std::max(hi, nm.values(r, c));
            }
            if (lo == hi && bins > 1)
                throw DataError("discretize_method3: condition '" + nm.condition_ids[c] +
                                "' is constant; bin width is zero");
            const double width = (hi - lo) / double(bins);
            for (std::size_t r = 0; r < rows; ++r)
                dm.codes(r, c) = (lo == hi) ? 1 : bin_of(nm.values(r, c), lo, width);
        }
    } else {
        const auto& flat = nm.values.data();
        const auto [lo_it, hi_it] = std::minmax_element(flat.begin(), flat.end());
        const double lo = *lo_it, hi = *hi_it;
        if (lo == hi && bins > 1)
            throw DataError("discretize_method3: matrix is constant; bin width is zero");
        const double width = (hi - lo) / double(bins);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                dm.codes(r, c) = (lo == hi) ? 1 : bin_of(nm.values(r, c), lo, width);
    }
    return dm;
}

NormalizedMatrix row_unit_normalize(const ExpressionMatrix& m) {
    require_complete(m, "row_unit_normalize");
    NormalizedMatrix nm = make_normalized(m, NormScheme::RowUnit);
    for (std::size_t r = 0; r < m.n_genes(); ++r) {
        const auto row = m.values.row(r);
        double sq = 0.0;
        for (double v : row) sq += v * v;
        if (sq == 0.0)
            throw DataError("row_unit_normalize: gene '" + m.gene_ids[r] +
                            "' is all zeros; norm is zero");
        const double norm = std::sqrt(sq);
        auto out = nm.values.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) out[c] = row[c] / norm;
    }
    return nm;
}

DiscretizedMatrix discretize_method4(const NormalizedMatrix& nm) {
    if (nm.scheme != NormScheme::RowUnit)
        throw DataError("discretize_method4: input must be row-unit normalized");
    DiscretizedMatrix dm = make_discretized(nm, Method::IV, {-1, 0, 1});
    for (std::size_t r = 0; r < nm.values.rows(); ++r)
        for (std::size_t c = 0; c < nm.values.cols(); ++c)
            dm.codes(r, c) = sign_code(nm.values(r, c));
    return dm;
}

std::string pattern_string(const DiscretizedMatrix& dm, const std::string& gene_id) {
    const auto it = std::find(dm.gene_ids.begin(), dm.gene_ids.end(), gene_id);
    if (it == dm.gene_ids.end())
        throw DataError("pattern_string: unknown gene '" + gene_id + "'");
    const std::size_t r = std::size_t(it - dm.gene_ids.begin());
    std::string out;
    for (std::size_t c = 0; c < dm.codes.cols(); ++c) {
        if (c) out += ',';
        out += std::to_string(dm.codes(r, c));
    }
    return out;
}

DiscretizedMatrix apply_method(const ExpressionMatrix& m, Method method, std::size_t bins) {
    switch (method) {
        case Method::I: return discretize_method1(zscore_normalize(m));
        case Method::II: return discretize_method2(minmax_normalize(m));
        case Method::III: return discretize_method3(column_mean_normalize(m), bins);
        case Method::IV: return discretize_method4(row_unit_normalize(m));
        case Method::None: break;
    }
    throw DataError("apply_method: no discretization pipeline for 'none'");
}

Matrix codes_as_points(const DiscretizedMatrix& dm) {
    Matrix points(dm.codes.rows(), dm.codes.cols());
    for (std::size_t r = 0; r < dm.codes.rows(); ++r)
        for (std::size_t c = 0; c < dm.codes.cols(); ++c)
            points(r, c) = double(dm.codes(r, c));
    return points;
}

void save_codes(const DiscretizedMatrix& dm, const std::filesystem::path& path, char delimiter) {
    std::string out;
    out += "gene_id";
    for (const auto& c : dm.condition_ids) {
        out += delimiter;
        out += c;
    }
    out += '\n';
    for (std::size_t r = 0; r < dm.codes.rows(); ++r) {
        out += dm.gene_ids[r];
        for (std::size_t c = 0; c < dm.codes.cols(); ++c) {
            out += delimiter;
            out += std::to_string(dm.codes(r, c));
        }
        out += '\n';
    }
    atomic_write(path, out);
}

void save_patterns(const DiscretizedMatrix& dm, const std::filesystem::path& path) {
    std::string out;
    for (std::size_t r = 0; r < dm.codes.rows(); ++r) {
        out += dm.gene_ids[r];
        out += '\t';
        for (std::size_t c = 0; c < dm.codes.cols(); ++c) {
            if (c) out += ',';
            out += std::to_string(dm.codes(r, c));
        }
        out += '\n';
    }
    atomic_write(path, out);
}

}  // namespace genecluster
