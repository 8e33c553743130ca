#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace edpmc {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using MatrixXb = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Thrown on malformed files, dimension inconsistencies and invariant
// violations in the data model.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class EdpKind { TopDisplacement, BaseShear };

std::string to_string(EdpKind kind);
EdpKind edp_kind_from_string(const std::string& tag);

namespace detail {
void require_finite(const Eigen::Ref<const MatrixXd>& values, const char* what);
void require_unique(const std::vector<std::string>& ids, const char* what);
}  // namespace detail

// N x M table of one scalar engineering demand parameter: rows are ground
// motions, columns are material samples. Immutable after construction.
class EdpMatrix {
  public:
    EdpMatrix(EdpKind kind, MatrixXd values, std::vector<std::string> row_ids,
              std::vector<std::string> col_ids);

    EdpKind kind() const { return kind_; }
    const MatrixXd& values() const { return values_; }
    const std::vector<std::string>& row_ids() const { return row_ids_; }
    const std::vector<std::string>& col_ids() const { return col_ids_; }
    Index rows() const { return values_.rows(); }
    Index cols() const { return values_.cols(); }

  private:
    EdpKind kind_;
    MatrixXd values_;
    std::vector<std::string> row_ids_;
    std::vector<std::string> col_ids_;
};

// Per-column observation budget: round(n_rows * cr), half away from zero.
long observation_budget(Index n_rows, double cr);

// Boolean N x M table marking which simulations were actually run. Every
// column holds exactly observation_budget(N, cr) true entries.
class ObservationMask {
  public:
    ObservationMask(MatrixXb flags, double cr);

    const MatrixXb& flags() const { return flags_; }
    double cr() const { return cr_; }
    Index rows() const { return flags_.rows(); }
    Index cols() const { return flags_.cols(); }
    long column_budget() const { return observation_budget(flags_.rows(), cr_); }
    long observed_count() const;

  private:
    MatrixXb flags_;
    double cr_;
};

enum class FeatureAxis { GroundMotion, Material };

std::string to_string(FeatureAxis axis);
FeatureAxis feature_axis_from_string(const std::string& tag);

// Side-information table: one row per ground motion (N x 31) or per
// material sample (M x P). Finite entries, uniquely named dimensions.
class FeatureTable {
  public:
    FeatureTable(FeatureAxis axis, MatrixXd values,
                 std::vector<std::string> dim_names,
                 std::vector<std::string> row_ids);

    FeatureAxis axis() const { return axis_; }
    const MatrixXd& values() const { return values_; }
    const std::vector<std::string>& dim_names() const { return dim_names_; }
    const std::vector<std::string>& row_ids() const { return row_ids_; }
    Index rows() const { return values_.rows(); }
    Index dims() const { return values_.cols(); }

  private:
    FeatureAxis axis_;
    MatrixXd values_;
    std::vector<std::string> dim_names_;
    std::vector<std::string> row_ids_;
};

// Low-rank factor pair (A: N x R, B: R x M) whose product estimates X.
class Factorization {
  public:
    Factorization(MatrixXd a, MatrixXd b);

    const MatrixXd& a() const { return a_; }
    const MatrixXd& b() const { return b_; }
    Index rank() const { return a_.cols(); }
    MatrixXd product() const { return a_ * b_; }

  private:
    MatrixXd a_;
    MatrixXd b_;
};

}  // namespace edpmc
