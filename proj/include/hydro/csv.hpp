#pragma once

#include <span>
#include <string>
#include <vector>

namespace hydro {

/// Column-oriented CSV table. Serialization is full-precision (%.17g) so a
/// write/parse round trip reproduces every double bit-exactly.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // one vector per header entry
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

std::string format_full(double v);

}  // namespace hydro
