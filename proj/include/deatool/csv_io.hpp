// Copyright 2026 The deatool authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEATOOL_CSV_IO_HPP
#define DEATOOL_CSV_IO_HPP

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "deatool/domain.hpp"

namespace deatool {

/// Malformed CSV input; row/column are 1-based and refer to the file layout.
class CsvError : public std::runtime_error {
  public:
    CsvError(int row, int column, const std::string& message)
        : std::runtime_error("row " + std::to_string(row) + ", column " +
                             std::to_string(column) + ": " + message),
          row_(row),
          column_(column) {}

    int row() const { return row_; }
    int column() const { return column_; }

  private:
    int row_, column_;
};

/// Shortest round-trip decimal rendering; identical bytes for identical values.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return std::string(buf, ptr);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline double parse_number(const std::string& field, int row, int col) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw CsvError(row, col, "cannot parse '" + field + "' as a number");
    return value;
}

}  // namespace detail

/// Schema: header `dmu_id,group,x1,...,xN,y1,...,yM`, one row per DMU.
inline std::vector<DmuRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw CsvError(1, 1, "empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = detail::split_csv_line(line);
    if (header.size() < 4 || header[0] != "dmu_id" || header[1] != "group")
        throw CsvError(1, 1, "header must start with dmu_id,group and carry x/y columns");
    int n = 0, m = 0;
    size_t col = 2;
    while (col < header.size() && header[col] == "x" + std::to_string(n + 1)) {
        ++n;
        ++col;
    }
    while (col < header.size() && header[col] == "y" + std::to_string(m + 1)) {
        ++m;
        ++col;
    }
    if (n == 0 || m == 0 || col != header.size())
        throw CsvError(1, static_cast<int>(col + 1),
                       "header columns must be x1..xN followed by y1..yM");

    std::vector<DmuRecord> records;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw CsvError(row, static_cast<int>(fields.size()),
                           "expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
        DmuRecord rec;
        rec.id = fields[0];
        rec.group = fields[1];
        if (rec.id.empty()) throw CsvError(row, 1, "empty dmu_id");
        rec.inputs.resize(n);
        rec.outputs.resize(m);
        for (int i = 0; i < n; ++i)
            rec.inputs[i] = detail::parse_number(fields[2 + i], row, 3 + i);
        for (int j = 0; j < m; ++j)
            rec.outputs[j] = detail::parse_number(fields[2 + n + j], row, 3 + n + j);
        records.push_back(std::move(rec));
    }
    return records;
}

inline void write_csv(std::ostream& out, const Cohort& cohort) {
    out << "dmu_id,group";
    for (int i = 1; i <= cohort.n_inputs; ++i) out << ",x" << i;
    for (int j = 1; j <= cohort.n_outputs; ++j) out << ",y" << j;
    out << "\n";
    for (const auto& rec : cohort.dmus) {
        out << rec.id << ',' << rec.group;
        for (int i = 0; i < cohort.n_inputs; ++i) out << ',' << format_double(rec.inputs[i]);
        for (int j = 0; j < cohort.n_outputs; ++j) out << ',' << format_double(rec.outputs[j]);
        out << "\n";
    }
}

}  // namespace deatool

#endif  // DEATOOL_CSV_IO_HPP
