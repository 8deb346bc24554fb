#include "nlwave/io.hpp"

#include <cstdio>
#include <sstream>

namespace nlwave::io {

namespace {

std::vector<std::vector<Real>> read_numeric_csv(
    const std::filesystem::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::vector<std::vector<Real>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Real> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        Real v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) numeric = false;
        row.push_back(v);
      } catch (...) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw ConfigError("non-numeric row in " + path.string() + ": " + line);
    }
    first = false;
    if (row.size() != columns) {
      std::ostringstream os;
      os << path.string() << ": expected " << columns << " columns, got "
         << row.size();
      throw ConfigError(os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(path.string() + " has no data rows");
  return rows;
}

}  // namespace

std::string format_real(Real value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::string& header)
    : out_(path) {
  if (!out_) throw ConfigError("cannot open " + path.string() + " for writing");
  out_ << header << "\n";
}

void CsvWriter::row(std::initializer_list<Cell> cells) {
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) out_ << ",";
    first = false;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Real>) {
            out_ << format_real(v);
          } else if constexpr (std::is_same_v<T, bool>) {
            out_ << (v ? 1 : 0);
          } else {
            out_ << v;
          }
        },
        cell);
  }
  out_ << "\n";
}

std::pair<std::vector<Real>, std::vector<Real>> read_two_columns(
    const std::filesystem::path& path) {
  auto rows = read_numeric_csv(path, 2);
  std::vector<Real> a, b;
  a.reserve(rows.size());
  b.reserve(rows.size());
  for (const auto& r : rows) {
    a.push_back(r[0]);
    b.push_back(r[1]);
  }
  return {std::move(a), std::move(b)};
}

std::tuple<std::vector<Real>, std::vector<Real>, std::vector<Real>>
read_three_columns(const std::filesystem::path& path) {
  auto rows = read_numeric_csv(path, 3);
  std::vector<Real> a, b, c;
  for (const auto& r : rows) {
    a.push_back(r[0]);
    b.push_back(r[1]);
    c.push_back(r[2]);
  }
  return {std::move(a), std::move(b), std::move(c)};
}

void write_field(const std::filesystem::path& path, const std::string& header,
                 const PhysicalField& x, const PhysicalField& values) {
  if (x.size() != values.size()) throw LengthMismatch("x/value length mismatch");
  CsvWriter csv(path, header);
  for (Eigen::Index i = 0; i < x.size(); ++i) csv.row({x[i], values[i]});
}

void write_sample(const std::filesystem::path& path, const PhysicalField& x,
                  const PhysicalField& u, const PhysicalField& v) {
  if (x.size() != u.size() || x.size() != v.size()) {
    throw LengthMismatch("x/u/v length mismatch");
  }
  CsvWriter csv(path, "x,u,v");
  for (Eigen::Index i = 0; i < x.size(); ++i) csv.row({x[i], u[i], v[i]});
}

KernelSpec load_tabulated_kernel(const std::filesystem::path& path, Real r,
                                 Real c_bound) {
  auto [k, v] = read_two_columns(path);
  return KernelSpec::tabulated(std::move(k), std::move(v), r, c_bound);
}

}  // namespace nlwave::io
