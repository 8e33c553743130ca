#include "edpmc/metrics.hpp"

namespace edpmc {

double masked_relative_error(const EdpMatrix& truth,
                             const Eigen::Ref<const MatrixXd>& estimate,
                             const ObservationMask& mask) {
    if (truth.rows() != mask.rows() || truth.cols() != mask.cols())
        throw DataError("masked_relative_error: mask dimensions do not match the matrix");
    MatrixXb unobserved = mask.flags().array() == false;
    return relative_error_on(truth.values(), estimate, unobserved);
}

}  // namespace edpmc
