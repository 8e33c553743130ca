#pragma once

#include "edpmc/kmedoids.hpp"
#include "edpmc/types.hpp"

#include <cstdint>

namespace edpmc {

enum class MaskStrategy { Uniform, ClusterStratified };

// Per-column seeded uniform draw of round(n_rows*cr) distinct rows.
ObservationMask uniform_mask(Index n_rows, Index n_cols, double cr, std::uint64_t seed);

// Largest-remainder quota allocation of `budget` across cluster sizes. When
// budget >= number of non-empty clusters, every non-empty cluster receives
// at least one; quotas never exceed cluster sizes.
std::vector<long> stratified_quotas(const std::vector<long>& cluster_sizes, long budget);

// Per column: quotas across clusters, then a seeded uniform draw without
// replacement inside each cluster.
ObservationMask stratified_mask(const ClusterAssignment& assignment, Index n_cols,
                                double cr, std::uint64_t seed);

}  // namespace edpmc
