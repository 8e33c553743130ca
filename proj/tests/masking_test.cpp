#include "edpmc/masking.hpp"

#include <doctest.h>

#include <numeric>

using namespace edpmc;

namespace {

ClusterAssignment assignment_from_labels(std::vector<Index> labels, Index k) {
    ClusterAssignment assignment;
    assignment.labels = std::move(labels);
    assignment.medoid_indices.resize(static_cast<std::size_t>(k));
    // Any member works as the medoid for masking purposes; pick the first.
    for (Index c = 0; c < k; ++c) {
        for (Index i = 0; i < assignment.size(); ++i)
            if (assignment.labels[static_cast<std::size_t>(i)] == c) {
                assignment.medoid_indices[static_cast<std::size_t>(c)] = i;
                break;
            }
    }
    return assignment;
}

std::vector<long> per_cluster_counts(const ObservationMask& mask,
                                     const ClusterAssignment& assignment, Index column) {
    std::vector<long> counts(static_cast<std::size_t>(assignment.k()), 0);
    for (Index i = 0; i < mask.rows(); ++i)
        if (mask.flags()(i, column))
            ++counts[static_cast<std::size_t>(assignment.labels[static_cast<std::size_t>(i)])];
    return counts;
}

}  // namespace

TEST_CASE("uniform mask budgets") {
    SUBCASE("cr = 1.0 observes everything") {
        auto mask = uniform_mask(8, 4, 1.0, 3);
        CHECK(mask.flags().count() == 32);
    }

    SUBCASE("100 rows at cr = 0.2: exactly 20 per column") {
        auto mask = uniform_mask(100, 10, 0.2, 5);
        for (Index j = 0; j < 10; ++j) CHECK(mask.flags().col(j).count() == 20);
    }

    SUBCASE("two seeds differ, both with exact counts") {
        auto a = uniform_mask(100, 10, 0.3, 1);
        auto b = uniform_mask(100, 10, 0.3, 2);
        CHECK(a.flags() != b.flags());
        for (Index j = 0; j < 10; ++j) {
            CHECK(a.flags().col(j).count() == 30);
            CHECK(b.flags().col(j).count() == 30);
        }
    }

    SUBCASE("reproducible per seed") {
        CHECK(uniform_mask(50, 5, 0.24, 9).flags() == uniform_mask(50, 5, 0.24, 9).flags());
    }

    SUBCASE("zero and overflowing budgets are rejected") {
        CHECK_THROWS_AS(uniform_mask(100, 5, 0.001, 1), DataError);
        CHECK_THROWS_AS(uniform_mask(100, 5, 1.2, 1), DataError);
    }
}

TEST_CASE("stratified quotas: largest remainder with minimum one") {
    SUBCASE("sizes {90, 10}, budget 10 -> {9, 1}") {
        CHECK(stratified_quotas({90, 10}, 10) == std::vector<long>{9, 1});
    }

    SUBCASE("sizes {3, 3, 4}, budget 3 -> one each") {
        CHECK(stratified_quotas({3, 3, 4}, 3) == std::vector<long>{1, 1, 1});
    }

    SUBCASE("minimum-one moves units from the largest quota") {
        CHECK(stratified_quotas({97, 1, 1, 1}, 4) == std::vector<long>{1, 1, 1, 1});
    }

    SUBCASE("quota never exceeds the cluster size") {
        // Shares: {4.5, 4.5}; cluster 0 holds only 3 members.
        auto quotas = stratified_quotas({3, 27}, 9);
        CHECK(quotas[0] <= 3);
        CHECK(quotas[0] + quotas[1] == 9);
    }

    SUBCASE("quotas sum to the budget over a sweep") {
        const std::vector<long> sizes{17, 3, 41, 9, 30};
        const long total = std::accumulate(sizes.begin(), sizes.end(), 0L);
        for (long budget = 5; budget <= total; budget += 7) {
            auto quotas = stratified_quotas(sizes, budget);
            CHECK(std::accumulate(quotas.begin(), quotas.end(), 0L) == budget);
            for (std::size_t c = 0; c < sizes.size(); ++c) {
                CHECK(quotas[c] <= sizes[c]);
                if (budget >= static_cast<long>(sizes.size())) CHECK(quotas[c] >= 1);
            }
        }
    }
}

TEST_CASE("stratified mask") {
    // 100 rows: cluster 0 holds rows 0..89, cluster 1 rows 90..99.
    std::vector<Index> labels(100, 0);
    for (Index i = 90; i < 100; ++i) labels[static_cast<std::size_t>(i)] = 1;
    auto assignment = assignment_from_labels(labels, 2);

    SUBCASE("per-column, per-cluster counts match the quota function") {
        auto mask = stratified_mask(assignment, 6, 0.1, 11);
        for (Index j = 0; j < 6; ++j) {
            CHECK(mask.flags().col(j).count() == 10);
            CHECK(per_cluster_counts(mask, assignment, j) == std::vector<long>{9, 1});
        }
    }

    SUBCASE("reproducible per seed; different seeds differ") {
        auto a = stratified_mask(assignment, 4, 0.2, 7);
        auto b = stratified_mask(assignment, 4, 0.2, 7);
        auto c = stratified_mask(assignment, 4, 0.2, 8);
        CHECK(a.flags() == b.flags());
        CHECK(a.flags() != c.flags());
    }

    SUBCASE("single cluster degenerates to the uniform per-column law") {
        auto single = assignment_from_labels(std::vector<Index>(40, 0), 1);
        auto mask = stratified_mask(single, 5, 0.25, 13);
        for (Index j = 0; j < 5; ++j) CHECK(mask.flags().col(j).count() == 10);
    }

    SUBCASE("assignment size mismatch is caught via budget checks") {
        auto tiny = assignment_from_labels(std::vector<Index>(4, 0), 1);
        CHECK_THROWS_AS(stratified_mask(tiny, 3, 0.05, 1), DataError);
    }

    SUBCASE("every (strategy, cr, seed) keeps exact budgets") {
        for (double cr : {0.1, 0.2, 0.3, 0.4, 0.5}) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                const long budget = observation_budget(100, cr);
                auto u = uniform_mask(100, 3, cr, seed);
                auto s = stratified_mask(assignment, 3, cr, seed);
                for (Index j = 0; j < 3; ++j) {
                    CHECK(u.flags().col(j).count() == budget);
                    CHECK(s.flags().col(j).count() == budget);
                }
            }
        }
    }
}
