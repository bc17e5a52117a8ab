#include "lpm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lpm {

std::string matrix_to_csv(const Matrix& m, bool header) {
    std::string out;
    out.reserve(static_cast<size_t>(m.size()) * 20);
    char buf[64];
    if (header) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) out.push_back(',');
            out += "c" + std::to_string(c);
        }
        out += "\r\n";
    }
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) out.push_back(',');
            const int len = std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            out.append(buf, static_cast<size_t>(len));
        }
        out += "\r\n";
    }
    return out;
}

void write_csv(const std::string& path, const Matrix& m, bool header) {
    write_text_file(path, matrix_to_csv(m, header));
}

Matrix matrix_from_csv(const std::string& text, bool header) {
    std::vector<std::vector<double>> rows;
    std::istringstream stream(text);
    std::string line;
    bool first = true;
    while (std::getline(stream, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header && first) {
            first = false;
            continue;
        }
        first = false;
        std::vector<double> row;
        size_t pos = 0;
        while (pos <= line.size()) {
            size_t comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            const std::string cell = line.substr(pos, comma - pos);
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InvalidInput("CSV: cannot parse value '" + cell + "'");
            }
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw InvalidInput("CSV: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidInput("CSV: no data rows");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    return m;
}

Matrix read_csv(const std::string& path, bool header) {
    return matrix_from_csv(read_text_file(path), header);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace lpm
