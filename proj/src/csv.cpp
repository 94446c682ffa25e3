#include "ptcop/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace ptcop {

Matrix read_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::io_error, "cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected_cols = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && has_header) continue;
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t col_no = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            ++col_no;
            std::size_t end = line.find(',', start);
            if (end == std::string::npos) end = line.size();
            std::string_view cell(line.data() + start, end - start);
            // trim spaces
            while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
                cell.remove_prefix(1);
            while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t'))
                cell.remove_suffix(1);
            double value = 0.0;
            const auto result =
                std::from_chars(cell.data(), cell.data() + cell.size(), value);
            require(result.ec == std::errc() && result.ptr == cell.data() + cell.size(),
                    ErrorCode::ingestion,
                    "non-numeric cell at row " + std::to_string(line_no) + ", column " +
                        std::to_string(col_no) + " of '" + path + "'");
            row.push_back(value);
            start = end + 1;
            if (end == line.size()) break;
        }
        if (expected_cols == 0) expected_cols = row.size();
        require(row.size() == expected_cols, ErrorCode::ingestion,
                "ragged row at line " + std::to_string(line_no) + " of '" + path +
                    "': expected " + std::to_string(expected_cols) + " columns, got " +
                    std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), ErrorCode::ingestion, "no data rows in '" + path + "'");
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(expected_cols));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < expected_cols; ++j)
            out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const Matrix& values) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::io_error, "cannot write '" + path + "'");
    std::ostringstream body;
    for (Index i = 0; i < values.rows(); ++i) {
        for (Index j = 0; j < values.cols(); ++j) {
            if (j > 0) body << ',';
            body << format_double(values(i, j));
        }
        body << '\n';
    }
    out << body.str();
    require(out.good(), ErrorCode::io_error, "write to '" + path + "' failed");
}

}  // namespace ptcop
