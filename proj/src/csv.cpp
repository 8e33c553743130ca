#include "edpmc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace edpmc {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& field, Index row, Index col, const char* what) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    while (ptr != end && (*ptr == ' ' || *ptr == '\t' || *ptr == '\r')) ++ptr;
    if (ec != std::errc() || ptr != end)
        throw DataError(std::string(what) + ": non-numeric cell '" + field + "' at row " +
                        std::to_string(row) + ", column " + std::to_string(col));
    return value;
}

std::vector<std::string> read_lines(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw DataError(std::string(what) + ": cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

struct TaggedTable {
    std::string tag;
    std::vector<std::string> col_ids;
    std::vector<std::string> row_ids;
    MatrixXd values;
};

TaggedTable read_tagged(const std::filesystem::path& path, const char* what) {
    const auto lines = read_lines(path, what);
    if (lines.size() < 2)
        throw DataError(std::string(what) + ": '" + path.string() + "' holds no data rows");
    TaggedTable table;
    auto header = split_fields(lines[0]);
    if (header.size() < 2)
        throw DataError(std::string(what) + ": header needs a tag cell and column ids");
    table.tag = header[0];
    table.col_ids.assign(header.begin() + 1, header.end());
    const Index n_cols = static_cast<Index>(table.col_ids.size());
    const Index n_rows = static_cast<Index>(lines.size()) - 1;
    table.values.resize(n_rows, n_cols);
    table.row_ids.resize(n_rows);
    for (Index i = 0; i < n_rows; ++i) {
        auto fields = split_fields(lines[i + 1]);
        if (static_cast<Index>(fields.size()) != n_cols + 1)
            throw DataError(std::string(what) + ": row " + std::to_string(i + 2) + " has " +
                            std::to_string(fields.size()) + " cells, expected " +
                            std::to_string(n_cols + 1) + " (missing cell in column " +
                            std::to_string(fields.size() + 1) + "?)");
        table.row_ids[i] = fields[0];
        for (Index j = 0; j < n_cols; ++j)
            table.values(i, j) = parse_number(fields[j + 1], i + 2, j + 2, what);
    }
    return table;
}

void write_tagged(const std::filesystem::path& path, const std::string& tag,
                  const std::vector<std::string>& col_ids,
                  const std::vector<std::string>& row_ids,
                  const Eigen::Ref<const MatrixXd>& values, bool as_int, const char* what) {
    std::ofstream out(path);
    if (!out) throw DataError(std::string(what) + ": cannot write '" + path.string() + "'");
    out << tag;
    for (const auto& id : col_ids) out << ',' << id;
    out << '\n';
    for (Index i = 0; i < values.rows(); ++i) {
        out << row_ids[i];
        for (Index j = 0; j < values.cols(); ++j) {
            if (as_int)
                out << ',' << static_cast<long>(values(i, j));
            else
                out << ',' << format_full_precision(values(i, j));
        }
        out << '\n';
    }
    if (!out) throw DataError(std::string(what) + ": write to '" + path.string() + "' failed");
}

std::vector<std::string> index_ids(Index n, const std::string& prefix) {
    std::vector<std::string> ids(n);
    for (Index i = 0; i < n; ++i) ids[i] = prefix + std::to_string(i + 1);
    return ids;
}

}  // namespace

std::string format_full_precision(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

EdpMatrix read_edp_matrix(const std::filesystem::path& path) {
    auto table = read_tagged(path, "read_edp_matrix");
    return EdpMatrix(edp_kind_from_string(table.tag), std::move(table.values),
                     std::move(table.row_ids), std::move(table.col_ids));
}

void write_edp_matrix(const EdpMatrix& matrix, const std::filesystem::path& path) {
    write_tagged(path, to_string(matrix.kind()), matrix.col_ids(), matrix.row_ids(),
                 matrix.values(), false, "write_edp_matrix");
}

ObservationMask read_mask(const std::filesystem::path& path) {
    auto table = read_tagged(path, "read_mask");
    const auto colon = table.tag.find(':');
    if (table.tag.substr(0, colon) != "mask" || colon == std::string::npos)
        throw DataError("read_mask: expected tag 'mask:<cr>', got '" + table.tag + "'");
    const double cr = parse_number(table.tag.substr(colon + 1), 1, 1, "read_mask cr");
    MatrixXb flags(table.values.rows(), table.values.cols());
    for (Index j = 0; j < flags.cols(); ++j)
        for (Index i = 0; i < flags.rows(); ++i) {
            const double v = table.values(i, j);
            if (v != 0.0 && v != 1.0)
                throw DataError("read_mask: cell at row " + std::to_string(i + 2) +
                                ", column " + std::to_string(j + 2) + " is not 0 or 1");
            flags(i, j) = v != 0.0;
        }
    return ObservationMask(std::move(flags), cr);
}

void write_mask(const ObservationMask& mask, const std::filesystem::path& path) {
    MatrixXd values = mask.flags().cast<double>();
    write_tagged(path, "mask:" + format_full_precision(mask.cr()),
                 index_ids(mask.cols(), "c"), index_ids(mask.rows(), "r"), values, true,
                 "write_mask");
}

FeatureTable read_features(const std::filesystem::path& path) {
    auto table = read_tagged(path, "read_features");
    return FeatureTable(feature_axis_from_string(table.tag), std::move(table.values),
                        std::move(table.col_ids), std::move(table.row_ids));
}

void write_features(const FeatureTable& table, const std::filesystem::path& path) {
    write_tagged(path, to_string(table.axis()), table.dim_names(), table.row_ids(),
                 table.values(), false, "write_features");
}

MatrixXd read_table(const std::filesystem::path& path) {
    const auto lines = read_lines(path, "read_table");
    if (lines.empty()) throw DataError("read_table: '" + path.string() + "' is empty");
    const Index n_cols = static_cast<Index>(split_fields(lines[0]).size());
    MatrixXd values(static_cast<Index>(lines.size()), n_cols);
    for (Index i = 0; i < values.rows(); ++i) {
        auto fields = split_fields(lines[i]);
        if (static_cast<Index>(fields.size()) != n_cols)
            throw DataError("read_table: row " + std::to_string(i + 1) +
                            " has inconsistent cell count");
        for (Index j = 0; j < n_cols; ++j)
            values(i, j) = parse_number(fields[j], i + 1, j + 1, "read_table");
    }
    return values;
}

void write_table(const Eigen::Ref<const MatrixXd>& values, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("write_table: cannot write '" + path.string() + "'");
    for (Index i = 0; i < values.rows(); ++i) {
        for (Index j = 0; j < values.cols(); ++j) {
            if (j) out << ',';
            out << format_full_precision(values(i, j));
        }
        out << '\n';
    }
}

}  // namespace edpmc
