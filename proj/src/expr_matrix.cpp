#include "genecluster/expr_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "genecluster/error.hpp"
#include "genecluster/io_util.hpp"
#include "genecluster/rng.hpp"

namespace genecluster {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == delimiter) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

bool ExpressionMatrix::has_missing() const {
    return std::any_of(missing.data().begin(), missing.data().end(),
                       [](std::uint8_t m) { return m != 0; });
}

ExpressionMatrix load_matrix(const std::filesystem::path& path, const CsvOptions& opts) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw DataError("empty file: " + path.string());

    ExpressionMatrix m;
    std::size_t first_data = 0;
    std::size_t n_cols = 0;
    if (opts.header) {
        auto header = split_line(lines[0], opts.delimiter);
        if (header.size() < 2)
            throw DataError(path.string() + ":1: header needs a label column and at least one condition");
        for (std::size_t j = 1; j < header.size(); ++j)
            m.condition_ids.push_back(trim(header[j]));
        n_cols = m.condition_ids.size();
        first_data = 1;
    } else {
        n_cols = split_line(lines[0], opts.delimiter).size();
        if (n_cols < 2)
            throw DataError(path.string() + ":1: rows need a label column and at least one condition");
        --n_cols;  // first field is the gene id
        for (std::size_t j = 0; j < n_cols; ++j)
            m.condition_ids.push_back("c" + std::to_string(j + 1));
    }
    {
        std::unordered_set<std::string> seen(m.condition_ids.begin(), m.condition_ids.end());
        if (seen.size() != m.condition_ids.size())
            throw DataError(path.string() + ": duplicate condition id in header");
    }

    const std::size_t n_rows = lines.size() - first_data;
    if (n_rows == 0) throw DataError(path.string() + ": no data rows");
    m.values = Matrix(n_rows, n_cols);
    m.missing = MaskMatrix(n_rows, n_cols, 0);
    m.gene_ids.reserve(n_rows);

    std::unordered_set<std::string> seen_genes;
    const auto& sentinels = opts.missing_tokens;
    for (std::size_t r = 0; r < n_rows; ++r) {
        const std::size_t line_no = first_data + r + 1;
        auto fields = split_line(lines[first_data + r], opts.delimiter);
        if (fields.size() != n_cols + 1)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(n_cols + 1) + " fields, got " +
                            std::to_string(fields.size()));
        const std::string gene = trim(fields[0]);
        if (gene.empty())
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": empty gene id");
        if (!seen_genes.insert(gene).second)
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate gene id '" + gene + "'");
        m.gene_ids.push_back(gene);
        for (std::size_t c = 0; c < n_cols; ++c) {
            const std::string cell = trim(fields[c + 1]);
            if (std::find(sentinels.begin(), sentinels.end(), cell) != sentinels.end()) {
                m.missing(r, c) = 1;
                continue;
            }
            double v = 0.0;
            if (!parse_double(cell, v) || !std::isfinite(v))
                throw DataError(path.string() + ":" + std::to_string(line_no) +
                                ": non-numeric cell '" + cell + "' at gene '" + gene +
                                "', condition '" + m.condition_ids[c] + "'");
            m.values(r, c) = v;
        }
    }
    return m;
}

void save_matrix(const ExpressionMatrix& m, const std::filesystem::path& path, char delimiter) {
    std::string out;
    out += "gene_id";
    for (const auto& c : m.condition_ids) {
        out += delimiter;
        out += c;
    }
    out += '\n';
    for (std::size_t r = 0; r < m.n_genes(); ++r) {
        out += m.gene_ids[r];
        for (std::size_t c = 0; c < m.n_conditions(); ++c) {
            out += delimiter;
            if (!m.missing(r, c)) out += format_double(m.values(r, c));
        }
        out += '\n';
    }
    atomic_write(path, out);
}

std::pair<ExpressionMatrix, DatasetSummary> drop_incomplete_genes(const ExpressionMatrix& m) {
    DatasetSummary summary;
    summary.n_genes_raw = m.n_genes();
    summary.n_conditions = m.n_conditions();

    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < m.n_genes(); ++r) {
        bool complete = true;
        for (std::size_t c = 0; c < m.n_conditions(); ++c) {
            if (m.missing(r, c)) {
                complete = false;
                ++summary.n_missing_cells;
            }
        }
        if (complete) keep.push_back(r);
    }
    summary.n_genes_kept = keep.size();
    if (keep.empty())
        throw DataError("every gene has at least one missing value; nothing left to cluster");

    ExpressionMatrix out;
    out.condition_ids = m.condition_ids;
    out.values = Matrix(keep.size(), m.n_conditions());
    out.missing = MaskMatrix(keep.size(), m.n_conditions(), 0);
    out.gene_ids.reserve(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.gene_ids.push_back(m.gene_ids[keep[i]]);
        for (std::size_t c = 0; c < m.n_conditions(); ++c)
            out.values(i, c) = m.values(keep[i], c);
    }
    return {std::move(out), summary};
}

BlobData synthesize_blobs(std::size_t n_genes, std::size_t n_conditions, std::size_t k_true,
                          double spread, std::uint64_t seed) {
    if (k_true < 1) throw DataError("synthesize_blobs: k_true must be >= 1");
    if (n_genes < k_true) throw DataError("synthesize_blobs: n_genes must be >= k_true");
    if (n_conditions < 1) throw DataError("synthesize_blobs: n_conditions must be >= 1");
    if (!(spread > 0.0) || !std::isfinite(spread))
        throw DataError("synthesize_blobs: spread must be a positive finite number");

    // Cluster centers are dense mixed-sign profiles built from complete
    // three-phase triples of the cycle (-1, 2, 3), so adjacent coordinates
    // always differ and complete triples contribute the same sum to every
    // column; the (at most two) leftover clusters get flat rows at the cycle
    // mean. Each cluster additionally rewrites one dedicated column
    // (-1 -> +4 on phase rows, +4/3 -> -1.5 on flat rows). The rewrite flips
    // that coordinate's sign, inverts the two adjacent value deltas, and
    // keeps column sums balanced and bounded away from zero whenever
    // k_true <= n_conditions, so per-cluster structure survives row-wise and
    // column-wise normalization, sign discretization, and rise/fall coding
    // alike. Any two centers are at least `scale` apart, exceeding the noise
    // spread.
    const double scale = std::max(1.0, 1.5 * spread);
    static constexpr double phase_value[3] = {-1.0, 2.0, 3.0};
    const std::size_t d = n_conditions;
    const std::size_t n_phase = k_true < 3 ? k_true : 3 * (k_true / 3);
    Matrix centers(k_true, d, 0.0);
    std::vector<char> used(d, 0);
    for (std::size_t c = 0; c < k_true; ++c) {
        std::size_t col;
        double flip;
        if (c < n_phase) {
            for (std::size_t j = 0; j < d; ++j)
                centers(c, j) = scale * phase_value[(c + j) % 3];
            col = (3 - c % 3) % 3 + 3 * (c / 3);  // a -1 coordinate of this row
            flip = 4.0;
        } else {
            for (std::size_t j = 0; j < d; ++j) centers(c, j) = scale * (4.0 / 3.0);
            col = d;
            for (std::size_t j = d; j-- > 0;)
                if (!used[j]) {
                    col = j;
                    break;
                }
            flip = -1.5;
        }
        if (col >= d) col = c % d;  // k_true beyond the column budget wraps
        used[col] = 1;
        centers(c, col) = scale * flip * (1.0 + double(c / d));
    }
    // Wrapped assignments could in principle coincide; force distinctness.
    for (std::size_t c = 1; c < k_true; ++c)
        for (std::size_t prev = 0; prev < c; ++prev) {
            const auto a = centers.row(c), b = centers.row(prev);
            if (std::equal(a.begin(), a.end(), b.begin()))
                centers(c, c % d) += scale * (2.0 + double(c));
        }

    BlobData blob;
    blob.matrix.condition_ids.reserve(n_conditions);
    for (std::size_t j = 0; j < n_conditions; ++j)
        blob.matrix.condition_ids.push_back("c" + std::to_string(j + 1));
    blob.matrix.gene_ids.reserve(n_genes);
    blob.matrix.values = Matrix(n_genes, n_conditions);
    blob.matrix.missing = MaskMatrix(n_genes, n_conditions, 0);
    blob.true_labels.reserve(n_genes);

    Rng rng(seed);
    for (std::size_t g = 0; g < n_genes; ++g) {
        const std::size_t label = g % k_true;
        blob.true_labels.push_back(label);
        blob.matrix.gene_ids.push_back("g" + std::to_string(g + 1));
        for (std::size_t j = 0; j < n_conditions; ++j)
            blob.matrix.values(g, j) = centers(label, j) + spread * rng.gaussian();
    }
    return blob;
}

}  // namespace genecluster
