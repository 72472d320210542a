#ifndef ZK_CSV_HPP
#define ZK_CSV_HPP

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace zk {

/// 17 significant digits, '.' decimal separator, round-trips every double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// RFC-4180 style writer: header row, comma separated, quoting only when needed.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::initializer_list<std::string_view> header) : os_(os) {
        write_row(std::vector<std::string>(header.begin(), header.end()));
    }
    CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os) { write_row(header); }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j) os_ << ',';
            os_ << quote(cells[j]);
        }
        os_ << "\r\n";
    }

    void write_numbers(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_double(v));
        write_row(cells);
    }

private:
    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    }

    std::ostream& os_;
};

}  // namespace zk

#endif
