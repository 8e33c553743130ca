#include "edpmc/masking.hpp"

#include "edpmc/seeding.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace edpmc {

namespace {

// Draw `count` distinct values from `pool` (partial Fisher-Yates).
std::vector<Index> draw_without_replacement(std::vector<Index> pool, long count,
                                            std::mt19937_64& engine) {
    for (long i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i),
                                                        pool.size() - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[pick(engine)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    return pool;
}

}  // namespace

ObservationMask uniform_mask(Index n_rows, Index n_cols, double cr, std::uint64_t seed) {
    const long budget = observation_budget(n_rows, cr);
    MatrixXb flags = MatrixXb::Constant(n_rows, n_cols, false);
    std::vector<Index> rows(static_cast<std::size_t>(n_rows));
    std::iota(rows.begin(), rows.end(), Index{0});
    for (Index j = 0; j < n_cols; ++j) {
        auto engine = make_engine(derive_seed(seed, 0x6d5u, j));
        for (Index row : draw_without_replacement(rows, budget, engine)) flags(row, j) = true;
    }
    return ObservationMask(std::move(flags), cr);
}

std::vector<long> stratified_quotas(const std::vector<long>& cluster_sizes, long budget) {
    const std::size_t k = cluster_sizes.size();
    if (k == 0) throw DataError("stratified_quotas: no clusters");
    long total = 0;
    for (long size : cluster_sizes) {
        if (size < 0) throw DataError("stratified_quotas: negative cluster size");
        total += size;
    }
    if (budget < 1 || budget > total)
        throw DataError("stratified_quotas: budget must lie in [1, N]");

    std::vector<long> quotas(k);
    std::vector<double> remainders(k);
    long assigned = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const double share =
            static_cast<double>(budget) * static_cast<double>(cluster_sizes[c]) /
            static_cast<double>(total);
        quotas[c] = static_cast<long>(std::floor(share));
        remainders[c] = share - static_cast<double>(quotas[c]);
        assigned += quotas[c];
    }

    // Hand out the leftover units by largest remainder (ties to the lower
    // index), skipping clusters already at capacity.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainders[a] > remainders[b];
    });
    long leftover = budget - assigned;
    for (std::size_t pass = 0; leftover > 0; ++pass) {
        bool progressed = false;
        for (std::size_t c : order) {
            if (leftover == 0) break;
            if (quotas[c] < cluster_sizes[c]) {
                ++quotas[c];
                --leftover;
                progressed = true;
            }
        }
        if (!progressed) throw DataError("stratified_quotas: budget exceeds capacity");
    }

    // Minimum-one rule when affordable: move units from the largest quota to
    // empty-quota clusters.
    long non_empty = 0;
    for (long size : cluster_sizes)
        if (size > 0) ++non_empty;
    if (budget >= non_empty) {
        for (std::size_t c = 0; c < k; ++c) {
            while (cluster_sizes[c] > 0 && quotas[c] == 0) {
                std::size_t donor = k;
                for (std::size_t other = 0; other < k; ++other)
                    if (quotas[other] >= 2 && (donor == k || quotas[other] > quotas[donor]))
                        donor = other;
                if (donor == k) throw DataError("stratified_quotas: cannot honor min-1 rule");
                --quotas[donor];
                ++quotas[c];
            }
        }
    }
    return quotas;
}

ObservationMask stratified_mask(const ClusterAssignment& assignment, Index n_cols,
                                double cr, std::uint64_t seed) {
    assignment.validate();
    const Index n_rows = assignment.size();
    const long budget = observation_budget(n_rows, cr);
    const auto sizes = assignment.cluster_sizes();
    const auto quotas = stratified_quotas(sizes, budget);

    // Member lists per cluster, in ascending row order.
    std::vector<std::vector<Index>> members(static_cast<std::size_t>(assignment.k()));
    for (Index row = 0; row < n_rows; ++row)
        members[static_cast<std::size_t>(assignment.labels[static_cast<std::size_t>(row)])]
            .push_back(row);

    MatrixXb flags = MatrixXb::Constant(n_rows, n_cols, false);
    for (Index j = 0; j < n_cols; ++j) {
        for (std::size_t c = 0; c < members.size(); ++c) {
            if (quotas[c] == 0) continue;
            auto engine = make_engine(derive_seed(seed, 0x57au, j, static_cast<Index>(c)));
            for (Index row : draw_without_replacement(members[c], quotas[c], engine))
                flags(row, j) = true;
        }
    }
    return ObservationMask(std::move(flags), cr);
}

}  // namespace edpmc
