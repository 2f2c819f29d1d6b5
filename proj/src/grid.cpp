#include "plab/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace plab {

std::int64_t Grid::node_count() const {
  std::int64_t n = 1;
  for (int a = 0; a < dim; ++a) n *= nodes[a];
  return n;
}

double Grid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= lengths[a];
  return v;
}

double Grid::min_spacing() const {
  double h = spacing[0];
  for (int a = 1; a < dim; ++a) h = std::min(h, spacing[a]);
  return h;
}

double Grid::max_spacing() const {
  double h = spacing[0];
  for (int a = 1; a < dim; ++a) h = std::max(h, spacing[a]);
  return h;
}

double Grid::diameter() const {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += lengths[a] * lengths[a];
  return std::sqrt(s);
}

double Grid::coordinate(int axis, int index) const {
  return spacing[axis] * index;
}

std::array<std::int64_t, kMaxDim> Grid::strides() const {
  std::array<std::int64_t, kMaxDim> st{};
  std::int64_t s = 1;
  for (int a = dim - 1; a >= 0; --a) {
    st[a] = s;
    s *= nodes[a];
  }
  return st;
}

void Grid::unflatten(std::int64_t k, std::array<int, kMaxDim>& index) const {
  for (int a = dim - 1; a >= 0; --a) {
    index[a] = static_cast<int>(k % nodes[a]);
    k /= nodes[a];
  }
}

std::int64_t Grid::flatten(const std::array<int, kMaxDim>& index) const {
  std::int64_t k = 0;
  for (int a = 0; a < dim; ++a) k = k * nodes[a] + index[a];
  return k;
}

void Grid::node_coordinates(std::int64_t k, std::array<double, kMaxDim>& x) const {
  std::array<int, kMaxDim> idx{};
  unflatten(k, idx);
  for (int a = 0; a < dim; ++a) x[a] = spacing[a] * idx[a];
}

bool Grid::is_torus() const {
  for (int a = 0; a < dim; ++a)
    if (!periodic[a]) return false;
  return true;
}

bool Grid::is_box() const {
  for (int a = 0; a < dim; ++a)
    if (periodic[a]) return false;
  return true;
}

bool operator==(const Grid& a, const Grid& b) {
  if (a.dim != b.dim) return false;
  for (int i = 0; i < a.dim; ++i) {
    if (a.nodes[i] != b.nodes[i] || a.lengths[i] != b.lengths[i] ||
        a.periodic[i] != b.periodic[i])
      return false;
  }
  return true;
}

Grid make_grid(int dim, const std::vector<int>& nodes,
               const std::vector<double>& lengths,
               const std::vector<bool>& periodic) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("make_grid: dimension must be 1, 2 or 3");
  if (static_cast<int>(nodes.size()) != dim ||
      static_cast<int>(lengths.size()) != dim ||
      static_cast<int>(periodic.size()) != dim)
    throw std::invalid_argument("make_grid: per-axis argument size mismatch");

  Grid g;
  g.dim = dim;
  for (int a = 0; a < dim; ++a) {
    const int min_nodes = periodic[a] ? 2 : 3;
    if (nodes[a] < min_nodes)
      throw std::invalid_argument("make_grid: node count too small on axis " +
                                  std::to_string(a));
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
      throw std::invalid_argument("make_grid: non-positive length on axis " +
                                  std::to_string(a));
    g.nodes[a] = nodes[a];
    g.lengths[a] = lengths[a];
    g.periodic[a] = periodic[a];
    g.spacing[a] = periodic[a] ? lengths[a] / nodes[a]
                               : lengths[a] / (nodes[a] - 1);
  }
  return g;
}

ScalarField make_field(const Grid& grid, std::vector<double> values) {
  if (static_cast<std::int64_t>(values.size()) != grid.node_count())
    throw std::invalid_argument("make_field: value count does not match grid");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("make_field: non-finite value");
  return ScalarField{grid, std::move(values)};
}

ScalarField constant_field(const Grid& grid, double value) {
  if (!std::isfinite(value))
    throw std::invalid_argument("constant_field: non-finite value");
  return ScalarField{grid, std::vector<double>(grid.node_count(), value)};
}

ScalarField field_from_function(const Grid& grid, const Sampler& sampler) {
  const std::int64_t n = grid.node_count();
  std::vector<double> values(n);
  bool ok = true;
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    std::array<double, kMaxDim> x{};
    grid.node_coordinates(k, x);
    const double v = sampler(x);
    values[k] = v;
    if (!std::isfinite(v)) ok = false;
  }
  if (!ok)
    throw std::invalid_argument("field_from_function: sampler returned a non-finite value");
  return ScalarField{grid, std::move(values)};
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string join_ints(const int* v, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string join_doubles(const double* v, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

std::string join_bools(const bool* v, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ',';
    s += v[i] ? "true" : "false";
  }
  return s;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Header fields are "key=value" tokens separated by single spaces.
std::string header_value(const std::string& header, const std::string& key) {
  const std::string needle = key + "=";
  const auto pos = header.find(needle);
  if (pos == std::string::npos)
    throw std::invalid_argument("field CSV: missing header key " + key);
  const auto start = pos + needle.size();
  auto end = header.find(' ', start);
  if (end == std::string::npos) end = header.size();
  return header.substr(start, end - start);
}

}  // namespace

void write_field_csv(const ScalarField& field, std::ostream& out) {
  const Grid& g = field.grid;
  out << "# grid n=" << g.dim << " m=" << join_ints(g.nodes.data(), g.dim)
      << " lengths=" << join_doubles(g.lengths.data(), g.dim)
      << " periodic=" << join_bools(g.periodic.data(), g.dim) << "\n";
  for (double v : field.values) out << format_double(v) << "\n";
}

ScalarField read_field_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# grid ", 0) != 0)
    throw std::invalid_argument("field CSV: missing '# grid' header row");

  const int dim = std::stoi(header_value(header, "n"));
  const auto m_tok = split_csv(header_value(header, "m"));
  const auto len_tok = split_csv(header_value(header, "lengths"));
  const auto per_tok = split_csv(header_value(header, "periodic"));
  std::vector<int> nodes;
  std::vector<double> lengths;
  std::vector<bool> periodic;
  for (const auto& t : m_tok) nodes.push_back(std::stoi(t));
  for (const auto& t : len_tok) lengths.push_back(std::stod(t));
  for (const auto& t : per_tok) {
    if (t != "true" && t != "false")
      throw std::invalid_argument("field CSV: bad periodic flag '" + t + "'");
    periodic.push_back(t == "true");
  }
  const Grid grid = make_grid(dim, nodes, lengths, periodic);

  std::vector<double> values;
  values.reserve(grid.node_count());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  return make_field(grid, std::move(values));
}

void write_field_csv_file(const ScalarField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_field_csv(field, out);
}

ScalarField read_field_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_field_csv(in);
}

}  // namespace plab
