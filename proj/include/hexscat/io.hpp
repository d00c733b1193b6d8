#ifndef HEXSCAT_IO_HPP
#define HEXSCAT_IO_HPP

#include "hexscat/lattice.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace hexscat {

/// CSV writer with locale-independent, bit-stable formatting.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  size_t width_;
};

std::string format_double(double v);

/// Binary state format: magic, version, half_width, boundary, then the two
/// components as interleaved (u1[x], u2[x]) complex pairs in storage order.
void save_state(const StateVector& u, const std::filesystem::path& path);
StateVector load_state(const std::filesystem::path& path);

}  // namespace hexscat

#endif
