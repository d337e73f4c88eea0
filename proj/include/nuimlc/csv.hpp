#ifndef NUIMLC_CSV_HPP
#define NUIMLC_CSV_HPP

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nuimlc {

// Small CSV table with fixed numeric formatting (15 significant digits) so
// repeated runs of the same command produce byte-identical output.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::variant<double, long long, std::string>>> rows;

  static std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        if (std::holds_alternative<double>(row[i])) {
          out += format_number(std::get<double>(row[i]));
        } else if (std::holds_alternative<long long>(row[i])) {
          out += std::to_string(std::get<long long>(row[i]));
        } else {
          out += std::get<std::string>(row[i]);
        }
      }
      out += '\n';
    }
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << to_string();
    if (!f) throw std::runtime_error("write failure: " + path);
  }
};

}  // namespace nuimlc

#endif  // NUIMLC_CSV_HPP
