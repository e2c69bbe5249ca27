#include "heatfield/ensemble_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "heatfield/errors.hpp"

namespace heatfield {

namespace {

constexpr char kMagic[8] = {'H', 'F', 'E', 'N', 'S', 'E', 'M', 'B'};

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw FormatError("ensemble file truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw FormatError("ensemble file truncated");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void write_ensemble_binary(const PathEnsemble& e, std::ostream& os) {
  os.write(kMagic, 8);
  put_u32(os, kEnsembleFormatVersion);
  put_u32(os, static_cast<std::uint32_t>(e.method));
  put_u32(os, e.units == "space" ? 1u : 0u);
  put_u32(os, 0u);
  put_u64(os, e.seed);
  put_u64(os, e.fingerprint);
  put_u64(os, static_cast<std::uint64_t>(e.n_paths()));
  put_u64(os, static_cast<std::uint64_t>(e.n_grid()));
  put_f64(os, e.series_bias);
  for (double g : e.grid) put_f64(os, g);
  for (int i = 0; i < e.n_grid(); ++i)
    for (int j = 0; j < e.n_paths(); ++j) put_f64(os, e.paths(j, i));
  if (!os) throw FormatError("failed writing ensemble");
}

PathEnsemble read_ensemble_binary(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw FormatError("not an ensemble file (bad magic)");
  const auto version = get_u32(is);
  if (version != kEnsembleFormatVersion)
    throw FormatError("unsupported ensemble format version " + std::to_string(version));
  PathEnsemble e;
  const auto method = get_u32(is);
  if (method > 2) throw FormatError("unknown sampler method code " + std::to_string(method));
  e.method = static_cast<SamplerMethod>(method);
  e.units = get_u32(is) == 1u ? "space" : "time";
  get_u32(is);
  e.seed = get_u64(is);
  e.fingerprint = get_u64(is);
  const auto n_paths = get_u64(is);
  const auto n_grid = get_u64(is);
  if (n_paths == 0 || n_grid == 0 || n_paths * n_grid > (1ULL << 34))
    throw FormatError("implausible ensemble dimensions");
  e.series_bias = get_f64(is);
  e.grid.resize(n_grid);
  for (auto& g : e.grid) g = get_f64(is);
  e.paths.resize(static_cast<Eigen::Index>(n_paths), static_cast<Eigen::Index>(n_grid));
  for (std::uint64_t i = 0; i < n_grid; ++i)
    for (std::uint64_t j = 0; j < n_paths; ++j) e.paths(j, i) = get_f64(is);
  return e;
}

void write_ensemble_csv(const PathEnsemble& e, std::ostream& os) {
  const auto old = os.precision(17);
  os << "path";
  for (double g : e.grid) os << ',' << g;
  os << '\n';
  for (int j = 0; j < e.n_paths(); ++j) {
    os << j;
    for (int i = 0; i < e.n_grid(); ++i) os << ',' << e.paths(j, i);
    os << '\n';
  }
  os.precision(old);
}

PathEnsemble read_ensemble_csv(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  auto num = [](const std::string& s, int line) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw FormatError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
  };
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty CSV");
  auto head = split(line);
  if (head.size() < 2 || head[0] != "path") throw FormatError("CSV header must start with 'path'");
  PathEnsemble e;
  for (std::size_t i = 1; i < head.size(); ++i) e.grid.push_back(num(head[i], 1));
  std::vector<std::vector<double>> rows;
  int ln = 1;
  while (std::getline(is, line)) {
    ++ln;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != head.size())
      throw FormatError("line " + std::to_string(ln) + ": expected " +
                        std::to_string(head.size()) + " columns");
    std::vector<double> r;
    for (std::size_t i = 1; i < cells.size(); ++i) r.push_back(num(cells[i], ln));
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw FormatError("CSV has no paths");
  e.paths.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(e.grid.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < e.grid.size(); ++i) e.paths(j, i) = rows[j][i];
  return e;
}

void save_ensemble(const PathEnsemble& e, const std::string& path) {
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  std::ofstream os(path, csv ? std::ios::out : std::ios::binary);
  if (!os) throw FormatError("cannot open '" + path + "' for writing");
  if (csv)
    write_ensemble_csv(e, os);
  else
    write_ensemble_binary(e, os);
}

PathEnsemble load_ensemble(const std::string& path) {
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  std::ifstream is(path, csv ? std::ios::in : std::ios::binary);
  if (!is) throw FormatError("cannot open '" + path + "'");
  return csv ? read_ensemble_csv(is) : read_ensemble_binary(is);
}

}  // namespace heatfield
