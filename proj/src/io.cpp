#include "sqmx/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "sqmx/errors.hpp"

namespace sqmx {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'Q', 'M', 'X'};
constexpr std::uint8_t kVersion = 1;

double parse_field(const std::string& field, std::size_t line_no, std::size_t col_no) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end) {
        throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(col_no) +
                         ": cannot parse '" + field + "' as a number");
    }
    if (!std::isfinite(value)) {
        throw NonFiniteEntryError("line " + std::to_string(line_no) + ", column " +
                                  std::to_string(col_no) + ": non-finite entry");
    }
    return value;
}

std::vector<Vector> parse_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<Vector> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        Vector row;
        std::size_t start = 0;
        std::size_t col_no = 0;
        while (start <= line.size()) {
            const std::size_t comma = line.find(',', start);
            const std::size_t stop = comma == std::string::npos ? line.size() : comma;
            ++col_no;
            row.push_back(parse_field(line.substr(start, stop - start), line_no, col_no));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("file has no data rows: " + path);
    return rows;
}

std::uint64_t read_u64_le(std::istream& in) {
    std::array<unsigned char, 8> buf{};
    in.read(reinterpret_cast<char*>(buf.data()), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf[static_cast<std::size_t>(i)];
    return v;
}

void write_u64_le(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> buf{};
    for (int i = 0; i < 8; ++i) buf[static_cast<std::size_t>(i)] = (v >> (8 * i)) & 0xff;
    out.write(reinterpret_cast<const char*>(buf.data()), 8);
}

}  // namespace

DenseMatrix load_matrix(const std::string& path, MatrixFormat format) {
    if (format == MatrixFormat::Csv) {
        std::vector<Vector> rows = parse_csv_rows(path);
        const std::size_t cols = rows.front().size();
        std::vector<double> data;
        data.reserve(rows.size() * cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) {
                throw ParseError("line " + std::to_string(i + 1) + ": expected " +
                                 std::to_string(cols) + " columns, found " +
                                 std::to_string(rows[i].size()));
            }
            data.insert(data.end(), rows[i].begin(), rows[i].end());
        }
        return DenseMatrix(rows.size(), cols, std::move(data));
    }

    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::array<char, 4> magic{};
    in.read(magic.data(), 4);
    if (!in || magic != kMagic) throw ParseError("bad magic bytes, expected SQMX: " + path);
    char version = 0;
    in.read(&version, 1);
    if (!in || static_cast<std::uint8_t>(version) != kVersion) {
        throw ParseError("unsupported SQMX version in " + path);
    }
    const std::uint64_t rows = read_u64_le(in);
    const std::uint64_t cols = read_u64_le(in);
    if (!in || rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20)) {
        throw ParseError("implausible dimensions in " + path);
    }
    std::vector<double> data(rows * cols);
    static_assert(sizeof(double) == 8);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!in) throw ParseError("truncated SQMX payload in " + path);
    DenseMatrix m(rows, cols, std::move(data));
    m.validate_finite();
    return m;
}

void save_matrix(const DenseMatrix& a, const std::string& path, MatrixFormat format) {
    if (format == MatrixFormat::Csv) {
        std::ofstream out(path);
        if (!out) throw IoError("cannot open file for writing: " + path);
        out.precision(17);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < a.cols(); ++j) {
                if (j) out << ',';
                out << a(i, j);
            }
            out << '\n';
        }
        if (!out) throw IoError("failed writing " + path);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out.write(kMagic.data(), 4);
    const char version = static_cast<char>(kVersion);
    out.write(&version, 1);
    write_u64_le(out, a.rows());
    write_u64_le(out, a.cols());
    out.write(reinterpret_cast<const char*>(a.data().data()),
              static_cast<std::streamsize>(a.data().size() * sizeof(double)));
    if (!out) throw IoError("failed writing " + path);
}

std::vector<Vector> load_points(const std::string& path) {
    std::vector<Vector> rows = parse_csv_rows(path);
    const std::size_t dim = rows.front().size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            throw RaggedRowsError("line " + std::to_string(i + 1) + ": point has dimension " +
                                  std::to_string(rows[i].size()) + ", expected " +
                                  std::to_string(dim));
        }
    }
    return rows;
}

}  // namespace sqmx
