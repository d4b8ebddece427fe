#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace bmeter::csv {

/// Full double precision (17 significant digits) so golden-file comparisons
/// are exact across runs.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Row {
    std::vector<std::string> cells;
    void add(const std::string& s) { cells.push_back(s); }
    void add(double v) { cells.push_back(format_double(v)); }
    void write(std::ostream& os) const {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    }
};

} // namespace bmeter::csv
