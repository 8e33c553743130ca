#include "edpmc/regression.hpp"

#include "edpmc/kmedoids.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace edpmc {

std::string to_string(RegressionModel model) {
    return model == RegressionModel::LinearRidge ? "linear_ridge" : "kernel_ridge_rbf";
}

RegressionModel regression_model_from_string(const std::string& tag) {
    if (tag == "linear_ridge") return RegressionModel::LinearRidge;
    if (tag == "kernel_ridge_rbf") return RegressionModel::KernelRidgeRbf;
    throw DataError("unknown regression model '" + tag + "'");
}

void RegressionConfig::validate() const {
    if (lambda < 0.0) throw DataError("RegressionConfig: lambda must be >= 0");
    if (bandwidth < 0.0)
        throw DataError("RegressionConfig: bandwidth must be positive (0 = median heuristic)");
}

namespace {

struct Cell {
    Index row;
    Index col;
};

void check_solve(const MatrixXd& system, const VectorXd& solution, const VectorXd& rhs,
                 const char* what) {
    const double rhs_norm = rhs.norm();
    const double residual = (system * solution - rhs).norm();
    if (!solution.allFinite() || residual > 1e-6 * std::max(rhs_norm, 1.0))
        throw DataError(std::string(what) +
                        ": singular system (duplicate feature rows with lambda = 0?)");
}

}  // namespace

MatrixXd fit_predict(const FeatureTable& gm_features, const FeatureTable& material_features,
                     const EdpMatrix& matrix, const ObservationMask& mask,
                     const RegressionConfig& config, RegressionInfo* info) {
    config.validate();
    const Index n = matrix.rows();
    const Index m = matrix.cols();
    if (gm_features.rows() != n)
        throw DataError("fit_predict: ground-motion feature rows do not match the matrix");
    if (material_features.rows() != m)
        throw DataError("fit_predict: material feature rows do not match the matrix");
    if (mask.rows() != n || mask.cols() != m)
        throw DataError("fit_predict: mask dimensions do not match the matrix");

    const MatrixXd gm_std = standardize_columns(gm_features.values());
    const MatrixXd mat_std = standardize_columns(material_features.values());
    const Index d = gm_std.cols() + mat_std.cols();

    std::vector<Cell> cells;
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i)
            if (mask.flags()(i, j)) cells.push_back({i, j});
    const Index n_train = static_cast<Index>(cells.size());
    if (n_train < 2) throw DataError("fit_predict: needs at least 2 observed cells");

    MatrixXd x_train(n_train, d);
    VectorXd y_train(n_train);
    for (Index t = 0; t < n_train; ++t) {
        x_train.row(t) << gm_std.row(cells[static_cast<std::size_t>(t)].row),
            mat_std.row(cells[static_cast<std::size_t>(t)].col);
        y_train[t] = matrix.values()(cells[static_cast<std::size_t>(t)].row,
                                     cells[static_cast<std::size_t>(t)].col);
    }
    const double y_mean = y_train.mean();
    const double y_var = (y_train.array() - y_mean).square().sum() /
                         static_cast<double>(n_train);
    const double y_scale = y_var > 0.0 ? std::sqrt(y_var) : 1.0;
    const VectorXd y_std = (y_train.array() - y_mean) / y_scale;
    if (info) *info = {config.bandwidth, y_mean, y_scale, n_train};

    MatrixXd predictions(n, m);
    if (config.model == RegressionModel::LinearRidge) {
        // (d+1)-dimensional normal equations; intercept unpenalized.
        MatrixXd z(n_train, d + 1);
        z.leftCols(d) = x_train;
        z.col(d).setOnes();
        MatrixXd normal = z.transpose() * z;
        normal.topLeftCorner(d, d) += config.lambda * MatrixXd::Identity(d, d);
        const VectorXd rhs = z.transpose() * y_std;
        const VectorXd w = normal.ldlt().solve(rhs);
        check_solve(normal, w, rhs, "fit_predict[linear_ridge]");

        for (Index j = 0; j < m; ++j)
            for (Index i = 0; i < n; ++i) {
                double value = w[d];
                value += gm_std.row(i).dot(w.head(gm_std.cols()));
                value += mat_std.row(j).dot(w.segment(gm_std.cols(), mat_std.cols()));
                predictions(i, j) = value * y_scale + y_mean;
            }
        return predictions;
    }

    // Kernel ridge with the RBF kernel.
    double h = config.bandwidth;
    if (h == 0.0) {
        std::vector<double> distances;
        distances.reserve(static_cast<std::size_t>(n_train) *
                          static_cast<std::size_t>(n_train - 1) / 2);
        for (Index s = 0; s < n_train; ++s)
            for (Index t = s + 1; t < n_train; ++t)
                distances.push_back((x_train.row(s) - x_train.row(t)).norm());
        auto mid = distances.begin() + static_cast<std::ptrdiff_t>(distances.size() / 2);
        std::nth_element(distances.begin(), mid, distances.end());
        h = *mid;
        if (!(h > 0.0))
            throw DataError(
                "fit_predict[kernel_ridge_rbf]: median heuristic degenerate, all training "
                "points identical");
    }
    if (info) info->bandwidth = h;
    const double gamma = 1.0 / (2.0 * h * h);

    MatrixXd kernel(n_train, n_train);
    for (Index s = 0; s < n_train; ++s) {
        kernel(s, s) = 1.0 + config.lambda;
        for (Index t = s + 1; t < n_train; ++t) {
            const double k = std::exp(-gamma * (x_train.row(s) - x_train.row(t)).squaredNorm());
            kernel(s, t) = k;
            kernel(t, s) = k;
        }
    }
    const VectorXd alpha = kernel.ldlt().solve(y_std);
    check_solve(kernel, alpha, y_std, "fit_predict[kernel_ridge_rbf]");

    VectorXd x(d);
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i) {
            x << gm_std.row(i).transpose(), mat_std.row(j).transpose();
            double value = 0.0;
            for (Index t = 0; t < n_train; ++t)
                value += alpha[t] * std::exp(-gamma * (x_train.row(t).transpose() - x).squaredNorm());
            predictions(i, j) = value * y_scale + y_mean;
        }
    return predictions;
}

MatrixXd ensemble(const Eigen::Ref<const MatrixXd>& est1,
                  const Eigen::Ref<const MatrixXd>& est2) {
    if (est1.rows() != est2.rows() || est1.cols() != est2.cols())
        throw DataError("ensemble: estimate dimensions disagree");
    return 0.5 * (est1 + est2);
}

}  // namespace edpmc
