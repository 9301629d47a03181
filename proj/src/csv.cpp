#include "sorptran/csv.hpp"

#include "sorptran/errors.hpp"

#include <boost/algorithm/string.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sorptran {

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path)
{
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
}

std::string optional_number(const std::optional<double>& v)
{
    return v ? format_number(*v) : std::string();
}

} // namespace

std::string format_number(double v)
{
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_profile_csv(const std::filesystem::path& path, const Grid1D& g, const Field& f)
{
    auto out = open_out(path);
    out << "x,u,q\n";
    for (int i = 1; i <= g.cells(); ++i) {
        const std::size_t k = g.index(i);
        out << format_number(g.center(i)) << ',' << format_number(f.u[k]) << ',' << format_number(f.q[k]) << '\n';
    }
    close_checked(out, path);
}

void write_grid_csv(const std::filesystem::path& path, const Grid2D& g, const Field& f)
{
    auto out = open_out(path);
    out << "x,y,u,q\n";
    for (int j = 1; j <= g.cells(); ++j) {
        for (int i = 1; i <= g.cells(); ++i) {
            const std::size_t k = g.index(i, j);
            out << format_number(g.center(i)) << ',' << format_number(g.center(j)) << ','
                << format_number(f.u[k]) << ',' << format_number(f.q[k]) << '\n';
        }
    }
    close_checked(out, path);
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows)
{
    auto out = open_out(path);
    out << "M,N,E,EOC,cpu_seconds,C_max_computed\n";
    for (const auto& r : rows) {
        out << r.M << ',' << r.N << ',' << optional_number(r.E) << ',' << optional_number(r.EOC) << ','
            << format_number(r.cpu_seconds) << ',' << format_number(r.c_max) << '\n';
    }
    close_checked(out, path);
}

void write_samples_csv(const std::filesystem::path& path, const std::vector<double>& x,
                       const std::vector<double>& u, const std::vector<double>& q)
{
    if (x.size() != u.size() || x.size() != q.size())
        throw ValidationError({"sample columns differ in length"});
    auto out = open_out(path);
    out << "x,u,q\n";
    for (std::size_t k = 0; k < x.size(); ++k)
        out << format_number(x[k]) << ',' << format_number(u[k]) << ',' << format_number(q[k]) << '\n';
    close_checked(out, path);
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        boost::split(cells, line, boost::is_any_of(","));
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

} // namespace sorptran
