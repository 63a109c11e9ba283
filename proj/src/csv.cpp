#include "regmix/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "regmix/discrete_measure.hpp"
#include "regmix/grid_density.hpp"

namespace regmix {

namespace {
std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace and a possible trailing CR
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}
}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("read_csv: empty file " + path);
  table.header = split_line(line);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw std::runtime_error("read_csv: " + path + " row " + std::to_string(row) +
                               " has " + std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(table.header.size()));
    std::vector<double> parsed(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      double value = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw std::runtime_error("read_csv: " + path + " row " + std::to_string(row) +
                                 " column '" + table.header[c] + "': non-numeric cell '" +
                                 cell + "'");
      parsed[c] = value;
    }
    table.rows.push_back(std::move(parsed));
  }
  return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out.precision(17);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

Dataset load_csv(const std::string& path, const std::vector<std::string>& x_columns,
                 const std::string& y_column, bool add_intercept,
                 std::optional<double> sigma) {
  const CsvTable table = read_csv(path);
  if (table.rows.empty()) throw std::runtime_error("load_csv: no data rows in " + path);
  std::vector<int> xcols;
  for (const auto& name : x_columns) {
    const int c = table.column(name);
    if (c < 0) throw std::runtime_error("load_csv: missing column '" + name + "'");
    xcols.push_back(c);
  }
  const int ycol = table.column(y_column);
  if (ycol < 0) throw std::runtime_error("load_csv: missing column '" + y_column + "'");

  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const int d = static_cast<int>(xcols.size()) + (add_intercept ? 1 : 0);
  Eigen::MatrixXd xs(n, d);
  Eigen::VectorXd ys(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    int k = 0;
    if (add_intercept) xs(i, k++) = 1.0;
    for (int c : xcols) xs(i, k++) = table.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    ys[i] = table.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(ycol)];
  }
  return Dataset(std::move(xs), std::move(ys), sigma);
}

namespace {
std::vector<std::string> coord_header(int d, const std::string& extra) {
  std::vector<std::string> h;
  for (int k = 0; k < d; ++k) h.push_back("b" + std::to_string(k + 1));
  if (!extra.empty()) h.push_back(extra);
  return h;
}
}  // namespace

void write_grid_csv(const std::string& path, const GridDensity& g) {
  const Eigen::MatrixXd nodes = g.grid().node_matrix();
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(nodes.rows()));
  for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k < nodes.cols(); ++k) row.push_back(nodes(i, k));
    row.push_back(g.values()[i]);
    rows.push_back(std::move(row));
  }
  write_csv(path, coord_header(g.grid().dim(), "value"), rows);
}

void write_atoms_csv(const std::string& path, const DiscreteMeasure& g) {
  std::vector<std::vector<double>> rows;
  for (const auto& a : g.atoms()) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k < a.beta.size(); ++k) row.push_back(a.beta[k]);
    row.push_back(a.weight);
    rows.push_back(std::move(row));
  }
  write_csv(path, coord_header(g.dim(), "weight"), rows);
}

void write_points_csv(const std::string& path, const Eigen::MatrixXd& points) {
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k < points.cols(); ++k) row.push_back(points(i, k));
    rows.push_back(std::move(row));
  }
  write_csv(path, coord_header(static_cast<int>(points.cols()), ""), rows);
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
  std::vector<std::vector<double>> rows;
  rows.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    rows.push_back({static_cast<double>(i), static_cast<double>(labels[i])});
  write_csv(path, {"row", "label"}, rows);
}

void write_trace_csv(const std::string& path, const std::vector<double>& loglik) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < loglik.size(); ++i)
    rows.push_back({static_cast<double>(i), loglik[i]});
  write_csv(path, {"iteration", "loglik"}, rows);
}

GridDensity read_grid_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.size() < 2 || t.header.back() != "value")
    throw std::runtime_error("read_grid_csv: unexpected header in " + path);
  const int d = static_cast<int>(t.header.size()) - 1;
  // reconstruct the uniform cell-center grid from the unique coordinates
  Eigen::VectorXd lower(d), upper(d);
  std::vector<int> res(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    std::vector<double> coords;
    coords.reserve(t.rows.size());
    for (const auto& row : t.rows) coords.push_back(row[static_cast<std::size_t>(k)]);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    if (coords.size() < 2)
      throw std::runtime_error("read_grid_csv: degenerate grid axis in " + path);
    const double step = coords[1] - coords[0];
    lower[k] = coords.front() - 0.5 * step;
    upper[k] = coords.back() + 0.5 * step;
    res[static_cast<std::size_t>(k)] = static_cast<int>(coords.size());
  }
  QuadratureGrid grid(lower, upper, res);
  if (grid.node_count() != static_cast<std::int64_t>(t.rows.size()))
    throw std::runtime_error("read_grid_csv: row count does not match grid in " + path);
  Eigen::VectorXd values(grid.node_count());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    values[static_cast<Eigen::Index>(i)] = t.rows[i].back();
  return GridDensity(std::move(grid), std::move(values), /*renormalize=*/true);
}

DiscreteMeasure read_atoms_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.size() < 2 || t.header.back() != "weight")
    throw std::runtime_error("read_atoms_csv: unexpected header in " + path);
  const int d = static_cast<int>(t.header.size()) - 1;
  std::vector<Atom> atoms;
  for (const auto& row : t.rows) {
    Eigen::VectorXd beta(d);
    for (int k = 0; k < d; ++k) beta[k] = row[static_cast<std::size_t>(k)];
    atoms.push_back({std::move(beta), row.back()});
  }
  return DiscreteMeasure(std::move(atoms));
}

}  // namespace regmix
