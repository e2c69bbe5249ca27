#pragma once

// Binary ensemble file (all integers and floats little-endian):
//
//   offset  size  field
//   0       8     magic "HFENSEMB"
//   8       4     u32 format version (1)
//   12      4     u32 method (0 cholesky, 1 circulant_embedding, 2 spectral_series)
//   16      4     u32 units (0 time, 1 space)
//   20      4     u32 reserved (0)
//   24      8     u64 master seed
//   32      8     u64 fingerprint
//   40      8     u64 n_paths
//   48      8     u64 n_grid
//   56      8     f64 series_bias
//   64      8*n_grid            grid
//   ...     8*n_grid*n_paths    values, column layout: all paths at grid[0], then grid[1], ...
//
// CSV: header "path,<grid_0>,<grid_1>,...", one row per path.

#include <iosfwd>
#include <string>

#include "heatfield/samplers.hpp"

namespace heatfield {

inline constexpr std::uint32_t kEnsembleFormatVersion = 1;

void write_ensemble_binary(const PathEnsemble& e, std::ostream& os);
/// Throws FormatError on bad magic, version, or truncated data.
PathEnsemble read_ensemble_binary(std::istream& is);

void write_ensemble_csv(const PathEnsemble& e, std::ostream& os);
PathEnsemble read_ensemble_csv(std::istream& is);

void save_ensemble(const PathEnsemble& e, const std::string& path);
/// Format chosen by extension (.csv or anything else = binary).
PathEnsemble load_ensemble(const std::string& path);

}  // namespace heatfield
