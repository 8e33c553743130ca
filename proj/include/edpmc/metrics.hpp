#pragma once

#include "edpmc/types.hpp"

namespace edpmc {

// Relative Frobenius error between truth and estimate restricted to the
// cells where `score_cell` is true. Throws DataError on dimension mismatch,
// std::domain_error when no cell is scored or when the truth restricted to
// the scored cells is identically zero.
template <typename DerivedT, typename DerivedE>
double relative_error_on(const Eigen::MatrixBase<DerivedT>& truth,
                         const Eigen::MatrixBase<DerivedE>& estimate,
                         const MatrixXb& score_cell) {
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols() ||
        truth.rows() != score_cell.rows() || truth.cols() != score_cell.cols())
        throw DataError("relative_error_on: dimension mismatch");
    double num = 0.0;
    double den = 0.0;
    long scored = 0;
    for (Index j = 0; j < truth.cols(); ++j) {
        for (Index i = 0; i < truth.rows(); ++i) {
            if (!score_cell(i, j)) continue;
            ++scored;
            const double t = truth(i, j);
            const double d = t - estimate(i, j);
            num += d * d;
            den += t * t;
        }
    }
    if (scored == 0)
        throw std::domain_error("relative_error_on: no cell to score (mask observes everything)");
    if (den == 0.0)
        throw std::domain_error(
            "relative_error_on: truth is identically zero on the scored cells");
    return std::sqrt(num / den);
}

// Error of an estimate against the ground truth on the UNOBSERVED cells
// only; observed cells are known and excluded from scoring.
double masked_relative_error(const EdpMatrix& truth,
                             const Eigen::Ref<const MatrixXd>& estimate,
                             const ObservationMask& mask);

}  // namespace edpmc
