#include "genecluster/silhouette.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "genecluster/error.hpp"
#include "genecluster/io_util.hpp"
#include "genecluster/parallel.hpp"

namespace genecluster {

namespace {

void validate(const Matrix& points, std::span<const std::size_t> assignments, std::size_t k,
              const char* op) {
    const std::size_t n = points.rows();
    if (n < 2) throw DataError(std::string(op) + ": needs at least two points");
    if (assignments.size() != n)
        throw DataError(std::string(op) + ": assignment count does not match point count");
    if (k < 2) throw DataError(std::string(op) + ": needs k >= 2");
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t a : assignments) {
        if (a >= k)
            throw DataError(std::string(op) + ": cluster index " + std::to_string(a) +
                            " out of range for k=" + std::to_string(k));
        ++sizes[a];
    }
    std::size_t non_empty = 0;
    for (std::size_t s : sizes)
        if (s > 0) ++non_empty;
    if (non_empty < 2)
        throw DataError(std::string(op) + ": needs at least two non-empty clusters");
}

void finish_report(SilhouetteReport& report, std::span<const std::size_t> assignments,
                   std::size_t k, const std::vector<std::size_t>& sizes) {
    const std::size_t n = report.per_point.size();
    report.per_cluster_mean.assign(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) report.per_cluster_mean[assignments[i]] += report.per_point[i];
    for (std::size_t c = 0; c < k; ++c)
        if (sizes[c] > 0) report.per_cluster_mean[c] /= double(sizes[c]);
    double total = 0.0;
    for (double s : report.per_point) total += s;
    report.overall_mean = total / double(n);
    report.n_singletons = 0;
    for (std::size_t c = 0; c < k; ++c)
        if (sizes[c] == 1) ++report.n_singletons;
}

}  // namespace

SilhouetteReport silhouette(const Matrix& points, std::span<const std::size_t> assignments,
                            std::size_t k) {
    validate(points, assignments, k, "silhouette");
    const std::size_t n = points.rows();
    const std::size_t dim = points.cols();

    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t a : assignments) ++sizes[a];

    // dist_sums[i*k + c] = sum of distances from point i to every member of
    // cluster c. Each point's row is filled in a single ascending-j scan, so
    // the floating-point sums do not depend on the thread count.
    std::vector<double> dist_sums(n * k, 0.0);
    parallel_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto pi = points.row(i);
            double* sums = dist_sums.data() + i * k;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const auto pj = points.row(j);
                double s = 0.0;
                for (std::size_t c = 0; c < dim; ++c) {
                    const double d = pi[c] - pj[c];
                    s += d * d;
                }
                sums[assignments[j]] += std::sqrt(s);
            }
        }
    });

    SilhouetteReport report;
    report.per_point.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = assignments[i];
        if (sizes[own] == 1) {
            report.per_point[i] = 0.0;  // singleton convention
            continue;
        }
        const double* sums = dist_sums.data() + i * k;
        const double a = sums[own] / double(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == own || sizes[c] == 0) continue;
            b = std::min(b, sums[c] / double(sizes[c]));
        }
        const double denom = std::max(a, b);
        report.per_point[i] = denom == 0.0 ? 0.0 : (b - a) / denom;
    }
    finish_report(report, assignments, k, sizes);
    return report;
}

SilhouetteReport silhouette_bruteforce(const Matrix& points,
                                       std::span<const std::size_t> assignments, std::size_t k) {
    validate(points, assignments, k, "silhouette_bruteforce");
    const std::size_t n = points.rows();

    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t a : assignments) ++sizes[a];

    SilhouetteReport report;
    report.per_point.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = assignments[i];
        if (sizes[own] == 1) {
            report.per_point[i] = 0.0;
            continue;
        }
        double a = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || assignments[j] != own) continue;
            double s = 0.0;
            for (std::size_t c = 0; c < points.cols(); ++c) {
                const double d = points(i, c) - points(j, c);
                s += d * d;
            }
            a += std::sqrt(s);
        }
        a /= double(sizes[own] - 1);

        double b = std::numeric_limits<double>::infinity();
        for (std::size_t other = 0; other < k; ++other) {
            if (other == own || sizes[other] == 0) continue;
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (assignments[j] != other) continue;
                double s = 0.0;
                for (std::size_t c = 0; c < points.cols(); ++c) {
                    const double d = points(i, c) - points(j, c);
                    s += d * d;
                }
                sum += std::sqrt(s);
            }
            b = std::min(b, sum / double(sizes[other]));
        }
        const double denom = std::max(a, b);
        report.per_point[i] = denom == 0.0 ? 0.0 : (b - a) / denom;
    }
    finish_report(report, assignments, k, sizes);
    return report;
}

void save_report_json(const SilhouetteReport& report, const std::filesystem::path& path) {
    nlohmann::json j;
    j["per_point"] = report.per_point;
    j["per_cluster_mean"] = report.per_cluster_mean;
    j["overall_mean"] = report.overall_mean;
    j["n_singletons"] = report.n_singletons;
    atomic_write(path, j.dump(2) + "\n");
}

void save_report_csv(const SilhouetteReport& report, std::span<const std::string> point_ids,
                     std::span<const std::size_t> assignments, const std::filesystem::path& path) {
    if (point_ids.size() != report.per_point.size() ||
        assignments.size() != report.per_point.size())
        throw DataError("save_report_csv: id/assignment count does not match report size");
    std::string out = "gene_id,cluster,s_value\n";
    for (std::size_t i = 0; i < point_ids.size(); ++i) {
        out += point_ids[i];
        out += ',';
        out += std::to_string(assignments[i]);
        out += ',';
        out += format_double(report.per_point[i]);
        out += '\n';
    }
    atomic_write(path, out);
}

}  // namespace genecluster
