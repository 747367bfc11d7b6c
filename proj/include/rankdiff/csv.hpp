#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankdiff {

// Deterministic numeric formatting shared by all emitters, so identical
// inputs produce byte-identical files.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
  }

  void meta(const std::string& key, const std::string& value) {
    out_ << "# " << key << "=" << value << "\n";
  }

  void header(const std::vector<std::string>& names) {
    write_line(names);
  }

  void row(const std::vector<std::string>& cells) { write_line(cells); }

 private:
  void write_line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }
  std::ofstream out_;
};

}  // namespace rankdiff
