#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <eit/core.hpp>

namespace eit {

/// 17 significant digits in scientific notation.
inline std::string format_number(real v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<real>> rows;

    void add_row(std::vector<real> row) { rows.push_back(std::move(row)); }
};

inline void write_csv(std::ostream& os, const CsvTable& table)
{
    const std::size_t arity = table.header.size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != arity) {
            throw std::invalid_argument(
                "csv row " + std::to_string(r) + " has arity " +
                std::to_string(table.rows[r].size()) + ", header has " +
                std::to_string(arity));
        }
    }

    for (std::size_t c = 0; c < arity; ++c) {
        if (c) os << ',';
        os << table.header[c];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < arity; ++c) {
            if (c) os << ',';
            os << format_number(row[c]);
        }
        os << '\n';
    }
}

inline void write_csv(const CsvTable& table, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot open '" + path + "' for writing");
    }
    write_csv(out, table);
    out.flush();
    if (!out) {
        throw io_error("write to '" + path + "' failed");
    }
}

} // namespace eit
