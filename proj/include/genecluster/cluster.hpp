#ifndef GENECLUSTER_CLUSTER_HPP
#define GENECLUSTER_CLUSTER_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "genecluster/matrix.hpp"

namespace genecluster {

enum class InitStrategy { Random, Ccia, Explicit };

const char* strategy_name(InitStrategy s);

/// K initial (or final) cluster centres, one per row, tagged with the
/// strategy that produced them.
struct CentroidSet {
    Matrix centroids;  // k x dim
    InitStrategy strategy = InitStrategy::Explicit;
    std::uint64_t seed = 0;  // meaningful for Random only

    std::size_t k() const { return centroids.rows(); }
    std::size_t dim() const { return centroids.cols(); }
};

struct KMeansOptions {
    std::size_t max_iters = 300;
    double tol = 1e-6;  // max centroid shift below which we stop
};

enum class StopReason { AssignmentsStable, CentroidShift, MaxIters };

struct ClusteringResult {
    std::vector<std::size_t> assignments;  // per point, in [0, k)
    CentroidSet centroids;                 // final centres
    double sse = 0.0;                      // sum of squared point-to-centre distances
    std::size_t iterations = 0;            // mean-update rounds performed
    bool converged = false;
    StopReason stop_reason = StopReason::MaxIters;
    std::size_t empty_reseeds = 0;         // empty-cluster rescues (see kmeans docs)
    std::vector<double> sse_history;       // one entry per assignment pass, non-increasing
};

/// Euclidean distance between two points of equal dimension.
double euclidean(std::span<const double> x, std::span<const double> y);

/// k distinct data points drawn uniformly without replacement from the
/// deduplicated point list. Deterministic for a fixed seed.
CentroidSet random_init(const Matrix& points, std::size_t k, std::uint64_t seed);

/// Deterministic closest-pair seeding: grows k seed sets, each started from
/// the closest remaining pair and extended with the remaining point nearest
/// to the set (single linkage), until the set holds
/// max(2, ceil(0.75 * n / k)) points; the centroids are the set means.
/// Distance ties break toward the lexicographically smallest index pair, so
/// repeated calls on the same input are bit-identical.
CentroidSet ccia_init(const Matrix& points, std::size_t k);

/// Lloyd's algorithm: alternates nearest-centroid assignment (ties to the
/// lowest centroid index) and mean updates until assignments stop changing,
/// the largest centroid shift drops to `tol`, or `max_iters` is reached.
/// A cluster that loses all members is re-seeded with the point currently
/// farthest from its assigned centroid (counted in `empty_reseeds`).
ClusteringResult kmeans(const Matrix& points, const CentroidSet& init,
                        const KMeansOptions& opts = {});

/// JSON export: assignments, centroid matrix, sse, iterations, converged,
/// strategy and seed, plus the empty-reseed count and stop reason.
void save_result_json(const ClusteringResult& result, const std::filesystem::path& path);

/// CSV export: one "gene_id,cluster" row per point, ids in point order.
void save_assignments_csv(const ClusteringResult& result,
                          std::span<const std::string> point_ids,
                          const std::filesystem::path& path);

/// Reads the "gene_id,cluster" CSV written by save_assignments_csv, in file
/// order.
std::vector<std::pair<std::string, std::size_t>> load_assignments_csv(
    const std::filesystem::path& path);

}  // namespace genecluster

#endif  // GENECLUSTER_CLUSTER_HPP
