#include "edpmc/types.hpp"

#include <unordered_set>

namespace edpmc {

std::string to_string(EdpKind kind) {
    switch (kind) {
        case EdpKind::TopDisplacement: return "top_displacement";
        case EdpKind::BaseShear: return "base_shear";
    }
    throw DataError("unknown EdpKind");
}

EdpKind edp_kind_from_string(const std::string& tag) {
    if (tag == "top_displacement") return EdpKind::TopDisplacement;
    if (tag == "base_shear") return EdpKind::BaseShear;
    throw DataError("unknown EDP kind tag: '" + tag + "'");
}

std::string to_string(FeatureAxis axis) {
    return axis == FeatureAxis::GroundMotion ? "gm_features" : "material_features";
}

FeatureAxis feature_axis_from_string(const std::string& tag) {
    if (tag == "gm_features") return FeatureAxis::GroundMotion;
    if (tag == "material_features") return FeatureAxis::Material;
    throw DataError("unknown feature axis tag: '" + tag + "'");
}

namespace detail {

void require_finite(const Eigen::Ref<const MatrixXd>& values, const char* what) {
    if (!values.allFinite()) {
        for (Index j = 0; j < values.cols(); ++j)
            for (Index i = 0; i < values.rows(); ++i)
                if (!std::isfinite(values(i, j)))
                    throw DataError(std::string(what) + ": non-finite entry at row " +
                                    std::to_string(i + 1) + ", column " + std::to_string(j + 1));
    }
}

void require_unique(const std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& id : ids)
        if (!seen.insert(id).second)
            throw DataError(std::string(what) + ": duplicate id '" + id + "'");
}

}  // namespace detail

EdpMatrix::EdpMatrix(EdpKind kind, MatrixXd values, std::vector<std::string> row_ids,
                     std::vector<std::string> col_ids)
    : kind_(kind), values_(std::move(values)), row_ids_(std::move(row_ids)),
      col_ids_(std::move(col_ids)) {
    if (values_.rows() < 2 || values_.cols() < 2)
        throw DataError("EdpMatrix: needs at least 2 rows and 2 columns, got " +
                        std::to_string(values_.rows()) + "x" + std::to_string(values_.cols()));
    detail::require_finite(values_, "EdpMatrix");
    if (static_cast<Index>(row_ids_.size()) != values_.rows())
        throw DataError("EdpMatrix: row id count does not match row count");
    if (static_cast<Index>(col_ids_.size()) != values_.cols())
        throw DataError("EdpMatrix: column id count does not match column count");
    detail::require_unique(row_ids_, "EdpMatrix row ids");
    detail::require_unique(col_ids_, "EdpMatrix column ids");
}

long observation_budget(Index n_rows, double cr) {
    if (!(cr > 0.0) || cr > 1.0)
        throw DataError("observation budget: cr must lie in (0, 1], got " + std::to_string(cr));
    const long budget = std::lround(static_cast<double>(n_rows) * cr);
    if (budget < 1)
        throw DataError("observation budget: round(N*cr) must be >= 1");
    if (budget > n_rows)
        throw DataError("observation budget: round(N*cr) exceeds row count");
    return budget;
}

ObservationMask::ObservationMask(MatrixXb flags, double cr)
    : flags_(std::move(flags)), cr_(cr) {
    const long budget = observation_budget(flags_.rows(), cr_);
    for (Index j = 0; j < flags_.cols(); ++j) {
        const long count = flags_.col(j).count();
        if (count != budget)
            throw DataError("ObservationMask: column " + std::to_string(j + 1) + " holds " +
                            std::to_string(count) + " observations, budget is " +
                            std::to_string(budget));
    }
}

long ObservationMask::observed_count() const {
    return static_cast<long>(flags_.count());
}

FeatureTable::FeatureTable(FeatureAxis axis, MatrixXd values,
                           std::vector<std::string> dim_names,
                           std::vector<std::string> row_ids)
    : axis_(axis), values_(std::move(values)), dim_names_(std::move(dim_names)),
      row_ids_(std::move(row_ids)) {
    if (values_.cols() < 1)
        throw DataError("FeatureTable: needs at least one dimension");
    detail::require_finite(values_, "FeatureTable");
    if (static_cast<Index>(dim_names_.size()) != values_.cols())
        throw DataError("FeatureTable: dimension name count does not match column count");
    if (static_cast<Index>(row_ids_.size()) != values_.rows())
        throw DataError("FeatureTable: row id count does not match row count");
    detail::require_unique(dim_names_, "FeatureTable dimension names");
}

Factorization::Factorization(MatrixXd a, MatrixXd b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.cols() != b_.rows())
        throw DataError("Factorization: inner dimensions disagree");
    const Index r = a_.cols();
    if (r < 1 || r >= std::min(a_.rows(), b_.cols()))
        throw DataError("Factorization: rank must satisfy 1 <= R < min(N, M)");
    detail::require_finite(a_, "Factorization.a");
    detail::require_finite(b_, "Factorization.b");
}

}  // namespace edpmc
