#include "edpmc/kmedoids.hpp"

#include <cmath>
#include <limits>

namespace edpmc {

std::string to_string(Distance distance) {
    return distance == Distance::Euclidean ? "euclidean" : "manhattan";
}

Distance distance_from_string(const std::string& tag) {
    if (tag == "euclidean") return Distance::Euclidean;
    if (tag == "manhattan") return Distance::Manhattan;
    throw DataError("unknown distance '" + tag + "'");
}

std::vector<long> ClusterAssignment::cluster_sizes() const {
    std::vector<long> sizes(medoid_indices.size(), 0);
    for (Index label : labels) ++sizes[static_cast<std::size_t>(label)];
    return sizes;
}

void ClusterAssignment::validate() const {
    if (medoid_indices.empty()) throw DataError("ClusterAssignment: no medoids");
    if (!std::isfinite(cost)) throw DataError("ClusterAssignment: non-finite cost");
    const Index n = size();
    const Index n_clusters = k();
    for (Index label : labels)
        if (label < 0 || label >= n_clusters)
            throw DataError("ClusterAssignment: label out of range");
    for (Index c = 0; c < n_clusters; ++c) {
        const Index medoid = medoid_indices[static_cast<std::size_t>(c)];
        if (medoid < 0 || medoid >= n)
            throw DataError("ClusterAssignment: medoid index out of range");
        if (labels[static_cast<std::size_t>(medoid)] != c)
            throw DataError("ClusterAssignment: medoid not labelled with its own cluster");
    }
}

MatrixXd standardize_columns(const Eigen::Ref<const MatrixXd>& values) {
    if (values.rows() < 2) throw DataError("standardize: needs at least 2 rows");
    MatrixXd out(values.rows(), values.cols());
    const double n = static_cast<double>(values.rows());
    for (Index j = 0; j < values.cols(); ++j) {
        const double mean = values.col(j).mean();
        const double var = (values.col(j).array() - mean).square().sum() / n;
        if (var > 0.0)
            out.col(j) = (values.col(j).array() - mean) / std::sqrt(var);
        else
            out.col(j).setZero();
    }
    return out;
}

FeatureTable standardize(const FeatureTable& features) {
    return FeatureTable(features.axis(), standardize_columns(features.values()),
                        features.dim_names(), features.row_ids());
}

namespace {

MatrixXd pairwise_distances(const Eigen::Ref<const MatrixXd>& points, Distance distance) {
    const Index n = points.rows();
    MatrixXd d(n, n);
    for (Index i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (Index j = i + 1; j < n; ++j) {
            const double dist =
                distance == Distance::Euclidean
                    ? (points.row(i) - points.row(j)).norm()
                    : (points.row(i) - points.row(j)).cwiseAbs().sum();
            d(i, j) = dist;
            d(j, i) = dist;
        }
    }
    return d;
}

}  // namespace

ClusterAssignment kmedoids(const Eigen::Ref<const MatrixXd>& points, Index k,
                           Distance distance, std::uint64_t seed, KmedoidsTrace* trace) {
    (void)seed;  // lowest-index tie-breaking leaves nothing random
    const Index n = points.rows();
    if (n == 0) throw DataError("kmedoids: empty feature table");
    if (k < 2 || k > n)
        throw DataError("kmedoids: k must lie in [2, N], got k=" + std::to_string(k) +
                        " for N=" + std::to_string(n));

    ClusterAssignment result;
    if (k == n) {
        result.medoid_indices.resize(static_cast<std::size_t>(n));
        result.labels.resize(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) {
            result.medoid_indices[static_cast<std::size_t>(i)] = i;
            result.labels[static_cast<std::size_t>(i)] = i;
        }
        result.cost = 0.0;
        if (trace) {
            trace->build_cost = 0.0;
            trace->swap_costs.clear();
        }
        return result;
    }

    const MatrixXd d = pairwise_distances(points, distance);
    std::vector<Index> medoids;
    medoids.reserve(static_cast<std::size_t>(k));
    std::vector<char> is_medoid(static_cast<std::size_t>(n), 0);

    // Nearest and second-nearest medoid distance per point.
    VectorXd near_dist = VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    VectorXd second_dist = near_dist;
    std::vector<Index> near_medoid(static_cast<std::size_t>(n), -1);

    auto refresh_nearest = [&]() {
        for (Index j = 0; j < n; ++j) {
            double best = std::numeric_limits<double>::infinity();
            double second = best;
            Index best_medoid = -1;
            for (Index m : medoids) {
                const double dist = d(j, m);
                if (dist < best || (dist == best && (best_medoid < 0 || m < best_medoid))) {
                    second = best;
                    best = dist;
                    best_medoid = m;
                } else if (dist < second) {
                    second = dist;
                }
            }
            near_dist[j] = best;
            second_dist[j] = second;
            near_medoid[j] = best_medoid;
        }
    };

    // BUILD: start with the 1-medoid optimum, then greedily add the point
    // with the largest cost reduction.
    {
        double best_total = std::numeric_limits<double>::infinity();
        Index best = 0;
        for (Index i = 0; i < n; ++i) {
            const double total = d.col(i).sum();
            if (total < best_total) {
                best_total = total;
                best = i;
            }
        }
        medoids.push_back(best);
        is_medoid[static_cast<std::size_t>(best)] = 1;
        refresh_nearest();
    }
    while (static_cast<Index>(medoids.size()) < k) {
        double best_profit = -std::numeric_limits<double>::infinity();
        Index best = -1;
        for (Index candidate = 0; candidate < n; ++candidate) {
            if (is_medoid[static_cast<std::size_t>(candidate)]) continue;
            double profit = 0.0;
            for (Index j = 0; j < n; ++j)
                profit += std::max(0.0, near_dist[j] - d(j, candidate));
            if (profit > best_profit) {
                best_profit = profit;
                best = candidate;
            }
        }
        medoids.push_back(best);
        is_medoid[static_cast<std::size_t>(best)] = 1;
        refresh_nearest();
    }

    double cost = near_dist.sum();
    if (trace) {
        trace->build_cost = cost;
        trace->swap_costs.clear();
    }

    // SWAP: apply the steepest-improving exchange until none improves.
    while (true) {
        double best_delta = 0.0;
        std::size_t best_slot = 0;
        Index best_candidate = -1;
        for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
            const Index out = medoids[slot];
            for (Index in = 0; in < n; ++in) {
                if (is_medoid[static_cast<std::size_t>(in)]) continue;
                double delta = 0.0;
                for (Index j = 0; j < n; ++j) {
                    const double to_in = d(j, in);
                    const double now = near_dist[j];
                    if (near_medoid[j] == out)
                        delta += std::min(to_in, second_dist[j]) - now;
                    else if (to_in < now)
                        delta += to_in - now;
                }
                if (delta < best_delta) {
                    best_delta = delta;
                    best_slot = slot;
                    best_candidate = in;
                }
            }
        }
        if (best_candidate < 0) break;
        is_medoid[static_cast<std::size_t>(medoids[best_slot])] = 0;
        is_medoid[static_cast<std::size_t>(best_candidate)] = 1;
        medoids[best_slot] = best_candidate;
        refresh_nearest();
        cost = near_dist.sum();
        if (trace) trace->swap_costs.push_back(cost);
    }

    // Canonical order: medoids ascending, labels point to nearest medoid
    // (lowest index on ties, handled in refresh_nearest).
    std::sort(medoids.begin(), medoids.end());
    refresh_nearest();
    result.medoid_indices = medoids;
    result.labels.resize(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
        const auto it = std::find(medoids.begin(), medoids.end(), near_medoid[j]);
        result.labels[static_cast<std::size_t>(j)] =
            static_cast<Index>(it - medoids.begin());
    }
    result.cost = near_dist.sum();
    result.validate();
    return result;
}

ClusterAssignment kmedoids(const FeatureTable& features, Index k, Distance distance,
                           std::uint64_t seed, KmedoidsTrace* trace) {
    return kmedoids(features.values(), k, distance, seed, trace);
}

}  // namespace edpmc
