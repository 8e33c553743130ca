#include "edpmc/csv.hpp"
#include "edpmc/metrics.hpp"
#include "edpmc/seeding.hpp"
#include "edpmc/types.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace edpmc;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    auto dir = fs::temp_directory_path() / "edpmc_core_test";
    fs::create_directories(dir);
    return dir / name;
}

EdpMatrix small_matrix(const MatrixXd& values,
                       EdpKind kind = EdpKind::TopDisplacement) {
    std::vector<std::string> rows, cols;
    for (Index i = 0; i < values.rows(); ++i) rows.push_back("gm" + std::to_string(i + 1));
    for (Index j = 0; j < values.cols(); ++j) cols.push_back("mat" + std::to_string(j + 1));
    return EdpMatrix(kind, values, rows, cols);
}

MatrixXb full_mask_flags(Index n, Index m, bool value) {
    return MatrixXb::Constant(n, m, value);
}

}  // namespace

TEST_CASE("EdpMatrix invariants") {
    MatrixXd ok(2, 2);
    ok << 1.0, 2.0, 3.0, 4.0;
    CHECK_NOTHROW(small_matrix(ok));

    MatrixXd tiny(1, 2);
    tiny << 1.0, 2.0;
    CHECK_THROWS_AS(EdpMatrix(EdpKind::BaseShear, tiny, {"a"}, {"b", "c"}), DataError);

    MatrixXd bad = ok;
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(small_matrix(bad), doctest::Contains("non-finite"), DataError);

    CHECK_THROWS_AS(EdpMatrix(EdpKind::BaseShear, ok, {"a", "a"}, {"b", "c"}), DataError);
    CHECK_THROWS_AS(EdpMatrix(EdpKind::BaseShear, ok, {"a"}, {"b", "c"}), DataError);
}

TEST_CASE("observation budget rounds half away from zero") {
    CHECK(observation_budget(100, 0.2) == 20);
    CHECK(observation_budget(100, 0.1) == 10);
    CHECK(observation_budget(5, 0.5) == 3);   // 2.5 rounds up
    CHECK(observation_budget(10, 1.0) == 10);
    CHECK_THROWS_AS(observation_budget(100, 0.0), DataError);
    CHECK_THROWS_AS(observation_budget(100, 1.5), DataError);
    CHECK_THROWS_AS(observation_budget(100, 0.001), DataError);  // budget 0
}

TEST_CASE("ObservationMask enforces exact per-column counts") {
    MatrixXb flags = full_mask_flags(4, 3, false);
    flags(0, 0) = flags(1, 0) = true;
    flags(2, 1) = flags(3, 1) = true;
    flags(0, 2) = flags(3, 2) = true;
    CHECK_NOTHROW(ObservationMask(flags, 0.5));

    flags(1, 2) = true;  // column 3 now has 3 entries
    CHECK_THROWS_AS(ObservationMask(flags, 0.5), DataError);
}

TEST_CASE("masked_relative_error: identity, all-hidden, single cell") {
    MatrixXd truth(2, 2);
    truth << 1.0, 2.0, 3.0, 4.0;
    auto matrix = small_matrix(truth);

    // Estimate identical to truth -> 0 for any mask.
    MatrixXb flags = full_mask_flags(2, 2, false);
    flags(0, 0) = flags(1, 1) = true;
    ObservationMask mask(flags, 0.5);
    CHECK(masked_relative_error(matrix, truth, mask) == 0.0);

    // Nothing observed: ||X - 0|| / ||X|| = 1 (low-level surface; an
    // ObservationMask cannot represent an empty column).
    MatrixXd twos = MatrixXd::Constant(3, 3, 2.0);
    CHECK(relative_error_on(twos, MatrixXd::Zero(3, 3), full_mask_flags(3, 3, true)) ==
          doctest::Approx(1.0).epsilon(1e-15));

    // Only cell (2,2) hidden, estimate has 3 there -> |3-4|/|4|.
    MatrixXb hidden_corner = full_mask_flags(2, 2, false);
    hidden_corner(1, 1) = true;
    MatrixXd estimate = truth;
    estimate(1, 1) = 3.0;
    double err = relative_error_on(truth, estimate, hidden_corner);
    CHECK(err == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("masked_relative_error error conditions are distinct") {
    MatrixXd truth(2, 2);
    truth << 1.0, 2.0, 3.0, 4.0;
    auto matrix = small_matrix(truth);

    MatrixXb wrong_size = full_mask_flags(3, 2, true);
    CHECK_THROWS_AS(relative_error_on(truth, truth, wrong_size), DataError);

    // Complement empty (mask observes everything).
    ObservationMask full(full_mask_flags(2, 2, true), 1.0);
    CHECK_THROWS_AS(masked_relative_error(matrix, truth, full), std::domain_error);

    // Unobserved truth cells all zero.
    MatrixXd zero_corner(2, 2);
    zero_corner << 1.0, 2.0, 3.0, 0.0;
    MatrixXb score = full_mask_flags(2, 2, false);
    score(1, 1) = true;
    CHECK_THROWS_WITH_AS(relative_error_on(zero_corner, zero_corner, score),
                         doctest::Contains("identically zero"), std::domain_error);
}

TEST_CASE("masked_relative_error invariant under simultaneous scaling") {
    std::mt19937_64 engine(make_engine(derive_seed(42, 1)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXd truth(6, 5), estimate(6, 5);
    for (Index j = 0; j < 5; ++j)
        for (Index i = 0; i < 6; ++i) {
            truth(i, j) = gauss(engine);
            estimate(i, j) = gauss(engine);
        }
    MatrixXb score = full_mask_flags(6, 5, false);
    for (Index j = 0; j < 5; ++j) score(j, j) = true;
    const double base = relative_error_on(truth, estimate, score);
    for (double scale : {2.0, -3.5, 1e-6, 1e8}) {
        const double scaled = relative_error_on(MatrixXd(truth * scale),
                                                MatrixXd(estimate * scale), score);
        CHECK(scaled == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("EDP matrix CSV round trip preserves values, ids and kind") {
    std::mt19937_64 engine(7);
    std::normal_distribution<double> gauss(0.0, 3.7e5);
    MatrixXd values(3, 2);
    for (Index j = 0; j < 2; ++j)
        for (Index i = 0; i < 3; ++i) values(i, j) = gauss(engine);
    auto matrix = small_matrix(values, EdpKind::BaseShear);

    auto path = temp_file("roundtrip.csv");
    write_edp_matrix(matrix, path);
    auto back = read_edp_matrix(path);

    CHECK(back.kind() == EdpKind::BaseShear);
    CHECK(back.row_ids() == matrix.row_ids());
    CHECK(back.col_ids() == matrix.col_ids());
    CHECK(back.values() == matrix.values());  // bit-stable
}

TEST_CASE("malformed CSV inputs are reported with position") {
    auto path = temp_file("bad.csv");

    {
        std::ofstream out(path);
        out << "top_displacement,m1,m2\n";
        out << "g1,1.0,2.0\n";
        out << "g2,3.0\n";  // missing cell
    }
    CHECK_THROWS_WITH_AS(read_edp_matrix(path), doctest::Contains("row 3"), DataError);

    {
        std::ofstream out(path);
        out << "top_displacement,m1,m2\n";
        out << "g1,1.0,2.0\n";
        out << "g2,3.0,abc\n";
    }
    CHECK_THROWS_WITH_AS(read_edp_matrix(path), doctest::Contains("non-numeric"), DataError);

    {
        std::ofstream out(path);
        out << "top_displacement,m1,m2\n";
        out << "g1,1.0,2.0\n";
        out << "g2,3.0,nan\n";
    }
    CHECK_THROWS_WITH_AS(read_edp_matrix(path), doctest::Contains("non-finite"), DataError);

    CHECK_THROWS_AS(read_edp_matrix(temp_file("does_not_exist.csv")), DataError);
}

TEST_CASE("mask CSV round trip") {
    MatrixXb flags = full_mask_flags(5, 3, false);
    for (Index j = 0; j < 3; ++j) {
        flags(j, j) = true;
        flags(j + 2, j) = true;
    }
    ObservationMask mask(flags, 0.4);
    auto path = temp_file("mask.csv");
    write_mask(mask, path);
    auto back = read_mask(path);
    CHECK(back.cr() == 0.4);
    CHECK(back.flags() == mask.flags());
}

TEST_CASE("feature table CSV round trip") {
    MatrixXd values(2, 3);
    values << 0.5, -1.25, 3e-9, 17.0, 0.0, 2.5;
    FeatureTable table(FeatureAxis::Material, values, {"alpha", "beta", "gamma"},
                       {"m1", "m2"});
    auto path = temp_file("features.csv");
    write_features(table, path);
    auto back = read_features(path);
    CHECK(back.axis() == FeatureAxis::Material);
    CHECK(back.dim_names() == table.dim_names());
    CHECK(back.values() == table.values());
}
