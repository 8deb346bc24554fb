#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "nlwave/errors.hpp"
#include "nlwave/grid.hpp"
#include "nlwave/kernels.hpp"
#include "nlwave/types.hpp"

namespace nlwave::io {

/// Formats with 17 significant digits so doubles round-trip exactly.
std::string format_real(Real value);

/// Row-oriented CSV writer; reals print with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header);

  using Cell = std::variant<Real, int, long long, bool, std::string>;
  void row(std::initializer_list<Cell> cells);

 private:
  std::ofstream out_;
};

/// Two-column numeric CSV; a non-numeric first line is treated as a header.
std::pair<std::vector<Real>, std::vector<Real>> read_two_columns(
    const std::filesystem::path& path);

/// Three-column numeric CSV (x, u, v).
std::tuple<std::vector<Real>, std::vector<Real>, std::vector<Real>>
read_three_columns(const std::filesystem::path& path);

void write_field(const std::filesystem::path& path, const std::string& header,
                 const PhysicalField& x, const PhysicalField& values);

void write_sample(const std::filesystem::path& path, const PhysicalField& x,
                  const PhysicalField& u, const PhysicalField& v);

/// Tabulated kernel from a two-column CSV (k, beta_hat); the decay bound
/// (r, c_bound) is validated at load.
KernelSpec load_tabulated_kernel(const std::filesystem::path& path, Real r,
                                 Real c_bound);

}  // namespace nlwave::io
