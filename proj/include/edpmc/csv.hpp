#pragma once

#include "edpmc/types.hpp"

#include <filesystem>

namespace edpmc {

// CSV conventions shared by all tables: comma separator, '.' decimal point,
// no locale-dependent formatting, values written with 17 significant digits
// so a write/read round trip is bit-stable. First row holds column ids,
// first column holds row ids, cell (1,1) holds the table kind tag.

EdpMatrix read_edp_matrix(const std::filesystem::path& path);
void write_edp_matrix(const EdpMatrix& matrix, const std::filesystem::path& path);

// Masks persist as 0/1 tables with the tag cell "mask:<cr>".
ObservationMask read_mask(const std::filesystem::path& path);
void write_mask(const ObservationMask& mask, const std::filesystem::path& path);

FeatureTable read_features(const std::filesystem::path& path);
void write_features(const FeatureTable& table, const std::filesystem::path& path);

// Headerless numeric table (sampler output, estimates).
MatrixXd read_table(const std::filesystem::path& path);
void write_table(const Eigen::Ref<const MatrixXd>& values, const std::filesystem::path& path);

std::string format_full_precision(double value);

}  // namespace edpmc
