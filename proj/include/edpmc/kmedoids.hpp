#pragma once

#include "edpmc/types.hpp"

#include <cstdint>

namespace edpmc {

enum class Distance { Euclidean, Manhattan };

std::string to_string(Distance distance);
Distance distance_from_string(const std::string& tag);

struct ClusterAssignment {
    std::vector<Index> medoid_indices;  // k row indices
    std::vector<Index> labels;          // N labels in [0, k)
    double cost = 0.0;                  // sum of point-to-medoid distances

    Index k() const { return static_cast<Index>(medoid_indices.size()); }
    Index size() const { return static_cast<Index>(labels.size()); }
    std::vector<long> cluster_sizes() const;
    void validate() const;
};

// Per-dimension z-score with population (1/N) variance; zero-variance
// dimensions map to all-zeros.
MatrixXd standardize_columns(const Eigen::Ref<const MatrixXd>& values);
FeatureTable standardize(const FeatureTable& features);

struct KmedoidsTrace {
    double build_cost = 0.0;
    std::vector<double> swap_costs;  // cost after each applied swap
};

// PAM: greedy BUILD then steepest-descent SWAP passes until no single
// medoid/non-medoid exchange reduces the cost. All ties break toward the
// lowest index, so the result is deterministic; the seed parameter is
// accepted for interface stability but never consulted.
ClusterAssignment kmedoids(const Eigen::Ref<const MatrixXd>& points, Index k,
                           Distance distance = Distance::Euclidean,
                           std::uint64_t seed = 0, KmedoidsTrace* trace = nullptr);

ClusterAssignment kmedoids(const FeatureTable& features, Index k,
                           Distance distance = Distance::Euclidean,
                           std::uint64_t seed = 0, KmedoidsTrace* trace = nullptr);

}  // namespace edpmc
