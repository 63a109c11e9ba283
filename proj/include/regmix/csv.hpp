#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regmix/dataset.hpp"

namespace regmix {

/// Comma-separated numeric table with a header row. UTF-8, '.' decimal,
/// no quoting (none of the supported datasets need it).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
  std::size_t row_count() const { return rows.size(); }
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Builds a Dataset from named columns, optionally prepending a constant-1
/// intercept column. Missing columns or non-numeric cells raise errors naming
/// the row and column.
Dataset load_csv(const std::string& path, const std::vector<std::string>& x_columns,
                 const std::string& y_column, bool add_intercept,
                 std::optional<double> sigma = std::nullopt);

class GridDensity;
class DiscreteMeasure;

/// Estimator serializations shared by the CLI and tests: grid densities as
/// (node coordinates, value) rows, discrete measures as (coordinates, weight),
/// particle sets as bare coordinates.
void write_grid_csv(const std::string& path, const GridDensity& g);
void write_atoms_csv(const std::string& path, const DiscreteMeasure& g);
void write_points_csv(const std::string& path, const Eigen::MatrixXd& points);
void write_labels_csv(const std::string& path, const std::vector<int>& labels);
void write_trace_csv(const std::string& path, const std::vector<double>& loglik);

GridDensity read_grid_csv(const std::string& path);
DiscreteMeasure read_atoms_csv(const std::string& path);

}  // namespace regmix
