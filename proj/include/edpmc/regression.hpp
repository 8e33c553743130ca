#pragma once

#include "edpmc/types.hpp"

namespace edpmc {

enum class RegressionModel { LinearRidge, KernelRidgeRbf };

std::string to_string(RegressionModel model);
RegressionModel regression_model_from_string(const std::string& tag);

struct RegressionConfig {
    RegressionModel model = RegressionModel::KernelRidgeRbf;
    double lambda = 1e-2;
    double bandwidth = 0.0;  // 0 selects the median pairwise-distance heuristic

    void validate() const;
};

// Effective values used by a fit, for output metadata.
struct RegressionInfo {
    double bandwidth = 0.0;  // after the median heuristic
    double target_mean = 0.0;
    double target_std = 1.0;
    Index training_cells = 0;
};

// Trains on the observed cells with features = [standardized IM row i,
// standardized material row j] and standardized targets, then predicts every
// cell of the N x M matrix and de-standardizes.
MatrixXd fit_predict(const FeatureTable& gm_features, const FeatureTable& material_features,
                     const EdpMatrix& matrix, const ObservationMask& mask,
                     const RegressionConfig& config, RegressionInfo* info = nullptr);

// Elementwise arithmetic mean of two equally sized estimates.
MatrixXd ensemble(const Eigen::Ref<const MatrixXd>& est1,
                  const Eigen::Ref<const MatrixXd>& est2);

}  // namespace edpmc
