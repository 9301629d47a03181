#pragma once

#include "sorptran/experiments.hpp"
#include "sorptran/grid.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sorptran {

/// Shortest decimal string that parses back to the same double.
std::string format_number(double v);

/// Columns x,u,q over interior cells.
void write_profile_csv(const std::filesystem::path& path, const Grid1D& g, const Field& f);
/// Columns x,y,u,q, rows ordered by y then x.
void write_grid_csv(const std::filesystem::path& path, const Grid2D& g, const Field& f);
/// Columns M,N,E,EOC,cpu_seconds,C_max_computed; undefined E or EOC stay empty.
void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows);
/// Columns x,u,q for point samples.
void write_samples_csv(const std::filesystem::path& path, const std::vector<double>& x,
                       const std::vector<double>& u, const std::vector<double>& q);

/// Parsed CSV: header plus string cells. Throws IoError on unreadable files.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace sorptran
