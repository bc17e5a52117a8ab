#ifndef LPM_IO_HPP
#define LPM_IO_HPP

#include "lpm/common.hpp"

namespace lpm {

/// RFC-4180 CSV of doubles, no header by default, 17 significant digits so
/// round-trips are bit-exact.
void write_csv(const std::string& path, const Matrix& m, bool header = false);
std::string matrix_to_csv(const Matrix& m, bool header = false);

Matrix read_csv(const std::string& path, bool header = false);
Matrix matrix_from_csv(const std::string& text, bool header = false);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace lpm

#endif
