#include "hexscat/io.hpp"

#include <cstdio>
#include <cstring>

namespace hexscat {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), width_(header.size()) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  out_.open(path);
  if (!out_) throw std::runtime_error("cannot open " + path.string());
  for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::invalid_argument("CsvWriter: column count mismatch");
  for (size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << "\n";
}

namespace {
constexpr char kMagic[4] = {'H', 'X', 'S', 'T'};
constexpr uint32_t kVersion = 1;
}  // namespace

void save_state(const StateVector& u, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out.write(kMagic, 4);
  uint32_t ver = kVersion;
  int32_t hw = u.box.half_width;
  uint8_t bnd = u.box.boundary == Boundary::Periodic ? 1 : 0;
  out.write(reinterpret_cast<const char*>(&ver), sizeof ver);
  out.write(reinterpret_cast<const char*>(&hw), sizeof hw);
  out.write(reinterpret_cast<const char*>(&bnd), sizeof bnd);
  const int s = u.box.side();
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < s; ++i) {
      const Complex pair[2] = {u.u1(i, j), u.u2(i, j)};
      out.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
  }
}

StateVector load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("bad state file magic");
  uint32_t ver = 0;
  int32_t hw = 0;
  uint8_t bnd = 0;
  in.read(reinterpret_cast<char*>(&ver), sizeof ver);
  in.read(reinterpret_cast<char*>(&hw), sizeof hw);
  in.read(reinterpret_cast<char*>(&bnd), sizeof bnd);
  if (ver != kVersion) throw std::runtime_error("unsupported state file version");
  StateVector u(LatticeBox{hw, bnd ? Boundary::Periodic : Boundary::ZeroPadded});
  const int s = u.box.side();
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < s; ++i) {
      Complex pair[2];
      in.read(reinterpret_cast<char*>(pair), sizeof pair);
      u.u1(i, j) = pair[0];
      u.u2(i, j) = pair[1];
    }
  }
  if (!in) throw std::runtime_error("truncated state file");
  return u;
}

}  // namespace hexscat
