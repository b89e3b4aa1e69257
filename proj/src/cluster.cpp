#include "genecluster/cluster.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <unordered_set>

#include "json.hpp"

#include "genecluster/error.hpp"
#include "genecluster/io_util.hpp"
#include "genecluster/parallel.hpp"
#include "genecluster/rng.hpp"

namespace genecluster {

namespace {

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

struct PairCandidate {
    double d2 = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    std::size_t j = 0;

    bool beats(const PairCandidate& other) const {
        if (d2 != other.d2) return d2 < other.d2;
        if (i != other.i) return i < other.i;
        return j < other.j;
    }
};

/// Closest pair among the listed rows; ties resolve to the smallest (i, j).
/// The winner is the unique minimum under (d2, i, j) ordering, so the result
/// does not depend on how the scan is chunked across threads.
PairCandidate closest_pair(const Matrix& points, const std::vector<std::size_t>& idx) {
    const std::size_t m = idx.size();
    std::vector<PairCandidate> partial;
    std::mutex mu;
    parallel_chunks(m, [&](std::size_t begin, std::size_t end) {
        PairCandidate best;
        for (std::size_t a = begin; a < end; ++a) {
            const auto pa = points.row(idx[a]);
            for (std::size_t b = a + 1; b < m; ++b) {
                PairCandidate cand{squared_distance(pa, points.row(idx[b])), idx[a], idx[b]};
                if (cand.beats(best)) best = cand;
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        partial.push_back(best);
    });
    PairCandidate best;
    for (const auto& c : partial)
        if (c.beats(best)) best = c;
    return best;
}

}  // namespace

const char* strategy_name(InitStrategy s) {
    switch (s) {
        case InitStrategy::Random: return "random";
        case InitStrategy::Ccia: return "ccia";
        case InitStrategy::Explicit: return "explicit";
    }
    return "?";
}

double euclidean(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DataError("euclidean: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + ")");
    return std::sqrt(squared_distance(x, y));
}

CentroidSet random_init(const Matrix& points, std::size_t k, std::uint64_t seed) {
    const std::size_t n = points.rows();
    if (k < 1) throw DataError("random_init: k must be >= 1");
    if (n == 0) throw DataError("random_init: empty point set");

    // Deduplicate exactly equal points, keeping first occurrences.
    struct RowHash {
        const Matrix* m;
        std::size_t operator()(std::size_t r) const {
            std::size_t h = 0xcbf29ce484222325ull;
            for (double v : m->row(r)) {
                std::uint64_t bits;
                std::memcpy(&bits, &v, sizeof(bits));
                h = (h ^ bits) * 0x100000001b3ull;
            }
            return h;
        }
    };
    struct RowEq {
        const Matrix* m;
        bool operator()(std::size_t a, std::size_t b) const {
            const auto ra = m->row(a), rb = m->row(b);
            return std::equal(ra.begin(), ra.end(), rb.begin());
        }
    };
    std::unordered_set<std::size_t, RowHash, RowEq> seen(16, RowHash{&points}, RowEq{&points});
    std::vector<std::size_t> distinct;
    for (std::size_t r = 0; r < n; ++r)
        if (seen.insert(r).second) distinct.push_back(r);

    if (k > distinct.size())
        throw DataError("random_init: k=" + std::to_string(k) + " exceeds the " +
                        std::to_string(distinct.size()) + " distinct points");

    Rng rng(seed);
    const auto picks = rng.sample_without_replacement(distinct.size(), k);
    CentroidSet cs;
    cs.strategy = InitStrategy::Random;
    cs.seed = seed;
    cs.centroids = Matrix(k, points.cols());
    for (std::size_t i = 0; i < k; ++i) {
        const auto src = points.row(distinct[picks[i]]);
        std::copy(src.begin(), src.end(), cs.centroids.row(i).begin());
    }
    return cs;
}

CentroidSet ccia_init(const Matrix& points, std::size_t k) {
    const std::size_t n = points.rows();
    const std::size_t dim = points.cols();
    if (k < 1) throw DataError("ccia_init: k must be >= 1");
    if (k > n) throw DataError("ccia_init: k=" + std::to_string(k) + " exceeds n=" +
                               std::to_string(n));
    // ceil(0.75 * n / k) in exact integer arithmetic, floored at 2 so each
    // seed set contains at least its founding pair.
    const std::size_t target = std::max<std::size_t>(2, (3 * n + 4 * k - 1) / (4 * k));
    if (k * target > n)
        throw DataError("ccia_init: k=" + std::to_string(k) + " seed sets of " +
                        std::to_string(target) + " points each need " +
                        std::to_string(k * target) + " points but only " + std::to_string(n) +
                        " are available");

    std::vector<char> alive(n, 1);
    std::vector<double> dist2set(n, 0.0);
    CentroidSet cs;
    cs.strategy = InitStrategy::Ccia;
    cs.centroids = Matrix(k, dim);

    for (std::size_t m = 0; m < k; ++m) {
        std::vector<std::size_t> remaining;
        remaining.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            if (alive[i]) remaining.push_back(i);

        const PairCandidate pair = closest_pair(points, remaining);
        std::vector<std::size_t> members{pair.i, pair.j};
        alive[pair.i] = alive[pair.j] = 0;

        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            dist2set[i] = std::min(squared_distance(points.row(i), points.row(pair.i)),
                                   squared_distance(points.row(i), points.row(pair.j)));
        }

        while (members.size() < target) {
            // Nearest remaining point to the set, single linkage; ties to the
            // lowest index.
            double best_d2 = std::numeric_limits<double>::infinity();
            std::size_t best_i = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (!alive[i]) continue;
                if (dist2set[i] < best_d2 || (dist2set[i] == best_d2 && i < best_i)) {
                    best_d2 = dist2set[i];
                    best_i = i;
                }
            }
            members.push_back(best_i);
            alive[best_i] = 0;
            const auto added = points.row(best_i);
            parallel_chunks(n, [&](std::size_t begin, std::size_t end) {
                for (std::size_t i = begin; i < end; ++i) {
                    if (!alive[i]) continue;
                    const double d2 = squared_distance(points.row(i), added);
                    if (d2 < dist2set[i]) dist2set[i] = d2;
                }
            });
        }

        auto centroid = cs.centroids.row(m);
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t member : members) {
            const auto p = points.row(member);
            for (std::size_t c = 0; c < dim; ++c) centroid[c] += p[c];
        }
        for (std::size_t c = 0; c < dim; ++c) centroid[c] /= double(members.size());
    }
    return cs;
}

namespace {

/// One assignment pass: nearest centroid per point (ties to the lowest
/// index), squared distance recorded per point. Parallel over points; each
/// point's result is independent of the chunking.
void assign_points(const Matrix& points, const Matrix& centroids,
                   std::vector<std::size_t>& assign, std::vector<double>& d2) {
    const std::size_t n = points.rows();
    const std::size_t k = centroids.rows();
    parallel_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const auto point = points.row(p);
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_k = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double d = squared_distance(point, centroids.row(c));
                if (d < best) {
                    best = d;
                    best_k = c;
                }
            }
            assign[p] = best_k;
            d2[p] = best;
        }
    });
}

}  // namespace

ClusteringResult kmeans(const Matrix& points, const CentroidSet& init, const KMeansOptions& opts) {
    const std::size_t n = points.rows();
    const std::size_t dim = points.cols();
    const std::size_t k = init.k();
    if (n == 0) throw DataError("kmeans: empty point set");
    if (k == 0) throw DataError("kmeans: no initial centroids");
    if (k > n)
        throw DataError("kmeans: k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
    if (init.dim() != dim)
        throw DataError("kmeans: centroid dimension " + std::to_string(init.dim()) +
                        " does not match point dimension " + std::to_string(dim));

    ClusteringResult result;
    result.centroids = init;
    Matrix& centroids = result.centroids.centroids;

    std::vector<std::size_t> assign(n), prev;
    std::vector<double> d2(n);
    Matrix sums(k, dim);
    std::vector<std::size_t> counts(k);

    auto record_sse = [&]() {
        double sse = 0.0;
        for (double v : d2) sse += v;  // fixed order, thread-count independent
        result.sse = sse;
        result.sse_history.push_back(sse);
    };

    while (true) {
        assign_points(points, centroids, assign, d2);
        record_sse();

        if (!prev.empty() && assign == prev) {
            result.converged = true;
            result.stop_reason = StopReason::AssignmentsStable;
            break;
        }
        if (result.iterations >= opts.max_iters) {
            result.converged = false;
            result.stop_reason = StopReason::MaxIters;
            break;
        }

        // Mean update, sequential in point order for determinism.
        std::fill(sums.data().begin(), sums.data().end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t p = 0; p < n; ++p) {
            const auto point = points.row(p);
            auto srow = sums.row(assign[p]);
            for (std::size_t c = 0; c < dim; ++c) srow[c] += point[c];
            ++counts[assign[p]];
        }

        // Clusters left empty get re-seeded with the points farthest from
        // their assigned centroids, farthest first, all distinct.
        std::vector<std::size_t> empties;
        for (std::size_t c = 0; c < k; ++c)
            if (counts[c] == 0) empties.push_back(c);
        std::vector<std::size_t> far_order;
        if (!empties.empty()) {
            far_order.resize(n);
            std::iota(far_order.begin(), far_order.end(), std::size_t{0});
            std::sort(far_order.begin(), far_order.end(), [&](std::size_t a, std::size_t b) {
                if (d2[a] != d2[b]) return d2[a] > d2[b];
                return a < b;
            });
        }

        double max_shift2 = 0.0;
        std::size_t next_far = 0;
        for (std::size_t c = 0; c < k; ++c) {
            auto crow = centroids.row(c);
            if (counts[c] > 0) {
                auto srow = sums.row(c);
                double shift2 = 0.0;
                for (std::size_t j = 0; j < dim; ++j) {
                    const double updated = srow[j] / double(counts[c]);
                    const double d = updated - crow[j];
                    shift2 += d * d;
                    crow[j] = updated;
                }
                max_shift2 = std::max(max_shift2, shift2);
            } else {
                const auto source = points.row(far_order[next_far++]);
                double shift2 = 0.0;
                for (std::size_t j = 0; j < dim; ++j) {
                    const double d = source[j] - crow[j];
                    shift2 += d * d;
                    crow[j] = source[j];
                }
                max_shift2 = std::max(max_shift2, shift2);
                ++result.empty_reseeds;
            }
        }

        prev = assign;
        ++result.iterations;

        if (std::sqrt(max_shift2) <= opts.tol) {
            // Final pass so the reported assignments are optimal against the
            // final centroids.
            assign_points(points, centroids, assign, d2);
            record_sse();
            result.converged = true;
            result.stop_reason = StopReason::CentroidShift;
            break;
        }
    }

    result.assignments = std::move(assign);
    return result;
}

void save_result_json(const ClusteringResult& result, const std::filesystem::path& path) {
    nlohmann::json j;
    j["assignments"] = result.assignments;
    auto centroids = nlohmann::json::array();
    for (std::size_t c = 0; c < result.centroids.k(); ++c) {
        const auto row = result.centroids.centroids.row(c);
        centroids.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["centroids"] = std::move(centroids);
    j["sse"] = result.sse;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["strategy"] = strategy_name(result.centroids.strategy);
    if (result.centroids.strategy == InitStrategy::Random)
        j["seed"] = result.centroids.seed;
    else
        j["seed"] = nullptr;
    j["empty_reseeds"] = result.empty_reseeds;
    switch (result.stop_reason) {
        case StopReason::AssignmentsStable: j["stop_reason"] = "assignments_stable"; break;
        case StopReason::CentroidShift: j["stop_reason"] = "centroid_shift"; break;
        case StopReason::MaxIters: j["stop_reason"] = "max_iters"; break;
    }
    atomic_write(path, j.dump(2) + "\n");
}

void save_assignments_csv(const ClusteringResult& result,
                          std::span<const std::string> point_ids,
                          const std::filesystem::path& path) {
    if (point_ids.size() != result.assignments.size())
        throw DataError("save_assignments_csv: id count does not match assignment count");
    std::string out = "gene_id,cluster\n";
    for (std::size_t i = 0; i < point_ids.size(); ++i) {
        out += point_ids[i];
        out += ',';
        out += std::to_string(result.assignments[i]);
        out += '\n';
    }
    atomic_write(path, out);
}

std::vector<std::pair<std::string, std::size_t>> load_assignments_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open assignments file: " + path.string());
    std::vector<std::pair<std::string, std::size_t>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "gene_id,cluster") continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos || comma == 0)
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'gene_id,cluster'");
        std::size_t cluster = 0;
        const char* first = line.data() + comma + 1;
        const char* last = line.data() + line.size();
        const auto [ptr, ec] = std::from_chars(first, last, cluster);
        if (ec != std::errc() || ptr != last)
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": cluster index is not a non-negative integer");
        out.emplace_back(line.substr(0, comma), cluster);
    }
    if (out.empty()) throw DataError(path.string() + ": no assignment rows");
    return out;
}

}  // namespace genecluster
