#ifndef GENECLUSTER_SILHOUETTE_HPP
#define GENECLUSTER_SILHOUETTE_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "genecluster/matrix.hpp"

namespace genecluster {

struct SilhouetteReport {
    std::vector<double> per_point;         // s(i), each in [-1, 1]
    std::vector<double> per_cluster_mean;  // length k; 0 for empty clusters
    double overall_mean = 0.0;
    std::size_t n_singletons = 0;
};

/// Silhouette widths under Euclidean distance: a(i) is the mean distance to
/// the other members of i's cluster, b(i) the smallest mean distance to any
/// other non-empty cluster, s(i) = (b - a) / max(a, b). Members of singleton
/// clusters score 0. Needs k >= 2 with at least two non-empty clusters and
/// at least two points.
SilhouetteReport silhouette(const Matrix& points, std::span<const std::size_t> assignments,
                            std::size_t k);

/// Literal triple-loop reference with the same contract as silhouette().
/// Shares no code with the optimized path; exists to check it.
SilhouetteReport silhouette_bruteforce(const Matrix& points,
                                       std::span<const std::size_t> assignments, std::size_t k);

void save_report_json(const SilhouetteReport& report, const std::filesystem::path& path);

/// One "gene_id,cluster,s_value" row per point.
void save_report_csv(const SilhouetteReport& report, std::span<const std::string> point_ids,
                     std::span<const std::size_t> assignments, const std::filesystem::path& path);

}  // namespace genecluster

#endif  // GENECLUSTER_SILHOUETTE_HPP
