#include "edpmc/kmedoids.hpp"
#include "edpmc/seeding.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace edpmc;

namespace {

double assignment_cost(const MatrixXd& points, const std::vector<Index>& medoids,
                       Distance distance) {
    double cost = 0.0;
    for (Index j = 0; j < points.rows(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (Index m : medoids) {
            const double d = distance == Distance::Euclidean
                                 ? (points.row(j) - points.row(m)).norm()
                                 : (points.row(j) - points.row(m)).cwiseAbs().sum();
            best = std::min(best, d);
        }
        cost += best;
    }
    return cost;
}

// Exhaustive optimum over all C(n, k) medoid subsets.
double brute_force_cost(const MatrixXd& points, Index k, Distance distance) {
    const Index n = points.rows();
    std::vector<Index> choice(static_cast<std::size_t>(k));
    double best = std::numeric_limits<double>::infinity();
    std::function<void(Index, Index)> recurse = [&](Index start, Index depth) {
        if (depth == k) {
            best = std::min(best, assignment_cost(points, choice, distance));
            return;
        }
        for (Index i = start; i < n; ++i) {
            choice[static_cast<std::size_t>(depth)] = i;
            recurse(i + 1, depth + 1);
        }
    };
    recurse(0, 0);
    return best;
}

std::set<std::set<Index>> partition_of(const ClusterAssignment& assignment) {
    std::vector<std::set<Index>> groups(static_cast<std::size_t>(assignment.k()));
    for (Index i = 0; i < assignment.size(); ++i)
        groups[static_cast<std::size_t>(assignment.labels[static_cast<std::size_t>(i)])]
            .insert(i);
    return {groups.begin(), groups.end()};
}

}  // namespace

TEST_CASE("standardize") {
    SUBCASE("zero-mean unit-variance column is unchanged") {
        MatrixXd values(4, 1);
        values << -1.3416407864998738, -0.4472135954999579, 0.4472135954999579,
            1.3416407864998738;  // population std = 1
        auto out = standardize_columns(values);
        CHECK((out - values).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("constant column maps to zeros") {
        MatrixXd values = MatrixXd::Constant(5, 2, 3.7);
        CHECK(standardize_columns(values).isZero(0.0));
    }

    SUBCASE("[0, 10] maps to [-1, 1] under the population convention") {
        MatrixXd values(2, 1);
        values << 0.0, 10.0;
        auto out = standardize_columns(values);
        CHECK(out(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(out(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("kmedoids basics") {
    SUBCASE("k = N: every point its own medoid, cost 0") {
        MatrixXd points(4, 2);
        points << 0, 0, 1, 0, 0, 1, 1, 1;
        auto assignment = kmedoids(points, 4);
        CHECK(assignment.cost == 0.0);
        for (Index i = 0; i < 4; ++i)
            CHECK(assignment.medoid_indices[static_cast<std::size_t>(i)] == i);
    }

    SUBCASE("invalid k and empty input are rejected") {
        MatrixXd points(3, 1);
        points << 0, 1, 2;
        CHECK_THROWS_AS(kmedoids(points, 1), DataError);
        CHECK_THROWS_AS(kmedoids(points, 4), DataError);
        CHECK_THROWS_AS(kmedoids(MatrixXd(0, 1), 2), DataError);
    }

    SUBCASE("two 1-D blobs match the brute-force optimum") {
        MatrixXd points(6, 1);
        points << 0.0, 0.1, 0.2, 10.0, 10.1, 10.2;
        auto assignment = kmedoids(points, 2);
        CHECK(assignment.cost ==
              doctest::Approx(brute_force_cost(points, 2, Distance::Euclidean))
                  .epsilon(1e-12));
        // One medoid in each blob.
        std::set<bool> sides;
        for (Index m : assignment.medoid_indices) sides.insert(points(m, 0) > 5.0);
        CHECK(sides.size() == 2);
    }

    SUBCASE("duplicate points collapse onto the repeated point and the outlier") {
        MatrixXd points(6, 1);
        points << 2.0, 2.0, 2.0, 2.0, 2.0, 9.0;
        auto assignment = kmedoids(points, 2);
        CHECK(assignment.cost == 0.0);
        CHECK(points(assignment.medoid_indices[0], 0) == 2.0);
        CHECK(points(assignment.medoid_indices[1], 0) == 9.0);
    }
}

TEST_CASE("kmedoids cost trace and optimality on small fixtures") {
    std::mt19937_64 engine(make_engine(derive_seed(17, 0)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> centre_pick(0, 2);
    const double centres[3][2] = {{0, 0}, {6, 1}, {-2, 7}};

    for (int trial = 0; trial < 8; ++trial) {
        MatrixXd points(9, 2);
        for (Index i = 0; i < points.rows(); ++i) {
            const int c = centre_pick(engine);
            points(i, 0) = centres[c][0] + 0.5 * gauss(engine);
            points(i, 1) = centres[c][1] + 0.5 * gauss(engine);
        }
        for (Distance distance : {Distance::Euclidean, Distance::Manhattan}) {
            KmedoidsTrace trace;
            auto assignment = kmedoids(points, 3, distance, 0, &trace);

            // Cost non-increasing across applied swaps, final <= BUILD.
            double previous = trace.build_cost;
            for (double c : trace.swap_costs) {
                CHECK(c <= previous + 1e-12);
                previous = c;
            }
            CHECK(assignment.cost <= trace.build_cost + 1e-12);

            // Exact PAM optimum on <= 10-point instances.
            CHECK(assignment.cost ==
                  doctest::Approx(brute_force_cost(points, 3, distance)).epsilon(1e-10));
        }
    }
}

TEST_CASE("row permutation changes labels only up to partition equality") {
    std::mt19937_64 engine(make_engine(derive_seed(23, 0)));
    std::normal_distribution<double> gauss(0.0, 0.4);
    MatrixXd points(12, 2);
    for (Index i = 0; i < 12; ++i) {
        const double cx = i < 4 ? 0.0 : (i < 8 ? 8.0 : -5.0);
        const double cy = i < 4 ? 0.0 : (i < 8 ? 2.0 : 6.0);
        points(i, 0) = cx + gauss(engine);
        points(i, 1) = cy + gauss(engine);
    }
    auto base = kmedoids(points, 3);

    std::vector<Index> perm(12);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), engine);
    MatrixXd shuffled(12, 2);
    for (Index i = 0; i < 12; ++i) shuffled.row(i) = points.row(perm[static_cast<std::size_t>(i)]);
    auto permuted = kmedoids(shuffled, 3);

    // Map the permuted partition back to original row indices.
    std::vector<std::set<Index>> groups(3);
    for (Index i = 0; i < 12; ++i)
        groups[static_cast<std::size_t>(permuted.labels[static_cast<std::size_t>(i)])]
            .insert(perm[static_cast<std::size_t>(i)]);
    std::set<std::set<Index>> remapped(groups.begin(), groups.end());
    CHECK(remapped == partition_of(base));
    CHECK(permuted.cost == doctest::Approx(base.cost).epsilon(1e-12));
}

TEST_CASE("labels point to the nearest medoid and medoids label themselves") {
    std::mt19937_64 engine(make_engine(derive_seed(29, 0)));
    std::uniform_real_distribution<double> uniform(0.0, 10.0);
    MatrixXd points(20, 3);
    for (Index i = 0; i < 20; ++i)
        for (Index j = 0; j < 3; ++j) points(i, j) = uniform(engine);
    auto assignment = kmedoids(points, 4);
    assignment.validate();
    for (Index i = 0; i < 20; ++i) {
        const Index label = assignment.labels[static_cast<std::size_t>(i)];
        const Index my_medoid = assignment.medoid_indices[static_cast<std::size_t>(label)];
        const double mine = (points.row(i) - points.row(my_medoid)).norm();
        for (Index m : assignment.medoid_indices)
            CHECK(mine <= (points.row(i) - points.row(m)).norm() + 1e-12);
    }
}
