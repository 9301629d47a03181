#include "sorptran/cli.hpp"
#include "sorptran/config.hpp"
#include "sorptran/csv.hpp"
#include "sorptran/errors.hpp"
#include "sorptran/isotherm.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace sorptran;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = SORPTRAN_GOLDEN_DIR;

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("sorptran_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "sorptran");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const char* kMinimal = R"([problem]
x_left = 0
x_right = 5
M = 40
N = 4
T = 3

[isotherm]
p = 0.5

[scheme]
name = implicit1

[velocity]
kind = constant
value = 1

[ic]
kind = step
)";

/// Drops one named column from every line of a CSV text.
std::string without_column(const std::string& text, const std::string& column)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> head;
    std::stringstream hs(line);
    for (std::string c; std::getline(hs, c, ',');) head.push_back(c);
    std::size_t drop = head.size();
    for (std::size_t k = 0; k < head.size(); ++k)
        if (head[k] == column) drop = k;
    std::string result;
    std::istringstream again(text);
    while (std::getline(again, line)) {
        std::stringstream ls(line);
        std::size_t k = 0;
        for (std::string c; std::getline(ls, c, ','); ++k)
            if (k != drop) result += c + ",";
        result += "\n";
    }
    return result;
}

} // namespace

TEST_CASE("profile CSV has one row per interior cell")
{
    const fs::path d = scratch("profile");
    const IsothermSpec iso(1.0, 0.5);
    const Grid1D g(0.0, 3.0, 4);
    std::vector<double> u(g.size(), 0.0);
    for (int i = 1; i <= 4; ++i) u[g.index(i)] = 0.1 * i;
    write_profile_csv(d / "p.csv", g, make_field(iso, u));
    const CsvTable t = read_csv(d / "p.csv");
    CHECK(t.header == std::vector<std::string>{"x", "u", "q"});
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0][0] == "0.375");
    CHECK(t.rows[2][1] == "0.30000000000000004");
    CHECK(std::stod(t.rows[3][2]) == isotherm_F(iso, 0.4));
}

TEST_CASE("3-cell and 2D grid CSVs")
{
    const fs::path d = scratch("grid");
    const IsothermSpec iso(1.0, 2.0);
    const Grid1D g(0.0, 1.0, 4);
    write_samples_csv(d / "s.csv", {0.1, 0.2, 0.3}, {1, 2, 3}, {2, 6, 12});
    const CsvTable s = read_csv(d / "s.csv");
    CHECK(s.header == std::vector<std::string>{"x", "u", "q"});
    CHECK(s.rows.size() == 3);

    const Grid2D g2(-1.0, 1.0, 4);
    std::vector<double> u(g2.size(), 0.0);
    for (int j = 1; j <= 4; ++j)
        for (int i = 1; i <= 4; ++i) u[g2.index(i, j)] = i + 10 * j;
    write_grid_csv(d / "g.csv", g2, make_field(iso, u));
    const CsvTable t = read_csv(d / "g.csv");
    CHECK(t.header == std::vector<std::string>{"x", "y", "u", "q"});
    REQUIRE(t.rows.size() == 16);
    // Row-major by y then x.
    CHECK(t.rows[0][2] == "11");
    CHECK(t.rows[1][2] == "12");
    CHECK(t.rows[4][2] == "21");
    CHECK(t.rows[1][0] == "-0.25");
    CHECK(t.rows[1][1] == "-0.75");
}

TEST_CASE("convergence CSV schema")
{
    const fs::path d = scratch("conv");
    std::vector<ConvergenceRow> rows(4);
    for (int k = 0; k < 4; ++k) {
        rows[k].M = 320 << k;
        rows[k].N = 640 << k;
        rows[k].E = 1e-3 / (1 << k);
        rows[k].cpu_seconds = 0.5 * k;
        rows[k].c_max = 0.5;
    }
    rows[3].E.reset();
    fill_eoc(rows);
    write_convergence_csv(d / "c.csv", rows);
    const CsvTable t = read_csv(d / "c.csv");
    CHECK(t.header == std::vector<std::string>{"M", "N", "E", "EOC", "cpu_seconds", "C_max_computed"});
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0][0] == "320");
    CHECK(t.rows[0][3].empty());
    CHECK(t.rows[1][3] == "1");
    CHECK(t.rows[3][2].empty());
    CHECK(t.rows[3][3].empty());
    CHECK(t.rows[2][5] == "0.5");
}

TEST_CASE("numbers use the shortest round-trip form")
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 2.5e10, -7.0, 0.0, 123456789.125})
        CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(3.0) == "3");
}

TEST_CASE("CSV I/O failures name the path")
{
    const fs::path d = scratch("io");
    const fs::path blocker = d / "file";
    std::ofstream(blocker) << "x";
    const Grid1D g(0.0, 1.0, 4);
    const Field f = make_field(IsothermSpec(1.0, 0.5), std::vector<double>(g.size(), 0.0));
    try {
        write_profile_csv(blocker / "sub" / "p.csv", g, f);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("file") != std::string::npos);
    }
    CHECK_THROWS_AS(read_csv(d / "missing.csv"), IoError);
}

TEST_CASE("minimal configuration parses with defaults")
{
    const RunConfigFile c = parse_config(kMinimal);
    CHECK(c.dimension == 1);
    CHECK(c.M == 40);
    CHECK(c.N == 4);
    CHECK(c.t0 == 0.0);
    CHECK(c.a == 1.0);
    CHECK(c.p == 0.5);
    CHECK(c.scheme.kind == SchemeKind::implicit1);
    CHECK(c.right.kind == SideKind::outflow);
    CHECK(c.reference == ReferenceKind::none);
    CHECK(c.out_dir == "out");
    const Run1DConfig r = to_run_1d(c);
    CHECK(r.grid.cells() == 40);
    CHECK(r.t_end == 3.0);
}

TEST_CASE("constraint violations are enumerated")
{
    std::string text = kMinimal;
    text.replace(text.find("p = 0.5"), 7, "p = -1");
    try {
        parse_config(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        REQUIRE(e.violations().size() == 1);
        CHECK(e.violations()[0].find("isotherm.p") != std::string::npos);
    }
    text.replace(text.find("M = 40"), 6, "M = 2");
    text.replace(text.find("T = 3"), 5, "T = -1");
    try {
        parse_config(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations().size() == 3);
    }
}

TEST_CASE("unknown keys and malformed values are rejected")
{
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "colour = red\n"), ValidationError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "\n[plot]\nwidth = 3\n"), ValidationError);
    std::string text = kMinimal;
    text.replace(text.find("M = 40"), 6, "M = 4x");
    CHECK_THROWS_AS(parse_config(text), ValidationError);
    std::string missing = kMinimal;
    missing.erase(missing.find("N = 4\n"), 6);
    try {
        parse_config(missing);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("problem.N") != std::string::npos);
    }
}

TEST_CASE("syntax errors report the line")
{
    const std::string text = std::string(kMinimal) + "[broken\n";
    try {
        parse_config(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("line 20") != std::string::npos);
    }
}

TEST_CASE("Table 1 configuration round-trips to its normalized form")
{
    const RunConfigFile c = load_config(kGolden / "table1_M320.ini");
    const std::string normal = serialize_config(c);
    CHECK(normal == slurp(kGolden / "table1_M320.normalized.ini"));
    CHECK(serialize_config(parse_config(normal)) == normal);
}

TEST_CASE("list-presets prints every preset")
{
    const CliResult r = cli({"list-presets"});
    CHECK(r.code == 0);
    for (const char* name : {"table1-smooth", "table2-cmax10", "table3-step", "table4-step", "table5-step",
                             "fig4-blowup", "cos-velocity", "rotation-2d", "exact-profiles"})
        CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("run exits 1 with every violation for a bad config")
{
    const fs::path d = scratch("bad");
    std::string text = kMinimal;
    text.replace(text.find("p = 0.5"), 7, "p = -1");
    text.replace(text.find("M = 40"), 6, "M = 2");
    std::ofstream(d / "bad.ini") << text;
    const CliResult r = cli({"run", "--config", (d / "bad.ini").string(), "--out", d.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("isotherm.p") != std::string::npos);
    CHECK(r.err.find("problem.M") != std::string::npos);
    CHECK(cli({"run", "--config", (d / "nothing.ini").string()}).code == 1);
    CHECK(cli({"bogus"}).code == 1);
    CHECK(cli({"oracle", "--config", (d / "bad.ini").string(), "--refine", "2"}).code == 1);
}

TEST_CASE("run reproduces the golden profile")
{
    const fs::path d = scratch("golden");
    const CliResult r = cli({"run", "--config", (kGolden / "small_run.ini").string(), "--out", d.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(d / "profile.csv") == slurp(kGolden / "small_run_profile.csv"));
    // Cell 1 sees zero inflow and q = 2u, so each step with tau = h multiplies it by 2/3.
    const CsvTable t = read_csv(d / "profile.csv");
    CHECK(std::stod(t.rows[0][1]) == doctest::Approx(16.0 / 81.0).epsilon(1e-14));
}

TEST_CASE("identical configs give byte-identical artifacts")
{
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    std::string text = slurp(kGolden / "table1_M320.ini");
    for (const fs::path& d : {a, b}) {
        std::ofstream(d / "c.ini") << text;
        REQUIRE(cli({"run", "--config", (d / "c.ini").string(), "--out", d.string()}).code == 0);
    }
    CHECK(slurp(a / "profile.csv") == slurp(b / "profile.csv"));
    CHECK(without_column(slurp(a / "convergence.csv"), "cpu_seconds") ==
          without_column(slurp(b / "convergence.csv"), "cpu_seconds"));
    const CsvTable t = read_csv(a / "convergence.csv");
    REQUIRE(t.rows.size() == 1);
    CHECK_FALSE(t.rows[0][2].empty());
}

TEST_CASE("output directory precedence")
{
    const fs::path env_dir = scratch("env");
    const fs::path flag_dir = scratch("flag");
    ::setenv("SORPTRAN_OUT", env_dir.c_str(), 1);
    REQUIRE(cli({"run", "--config", (kGolden / "small_run.ini").string()}).code == 0);
    CHECK(fs::exists(env_dir / "profile.csv"));
    REQUIRE(cli({"run", "--config", (kGolden / "small_run.ini").string(), "--out", flag_dir.string()}).code == 0);
    CHECK(fs::exists(flag_dir / "profile.csv"));
    ::unsetenv("SORPTRAN_OUT");
}

TEST_CASE("oracle writes the refined reference on the coarse grid")
{
    const fs::path d = scratch("oracle");
    REQUIRE(cli({"oracle", "--config", (kGolden / "small_run.ini").string(), "--refine", "4", "--out", d.string()})
                .code == 0);
    const CsvTable t = read_csv(d / "oracle_r4.csv");
    CHECK(t.header == std::vector<std::string>{"x", "u", "q"});
    CHECK(t.rows.size() == 8);
}

TEST_CASE("preset writes convergence CSVs")
{
    const fs::path d = scratch("preset");
    const CliResult r = cli({"preset", "table1-smooth", "--out", d.string(), "--rungs", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("table1-smooth:") != std::string::npos);
    bool found = false;
    for (const auto& e : fs::directory_iterator(d / "table1-smooth")) {
        if (e.path().filename().string().starts_with("convergence_")) {
            found = true;
            const CsvTable t = read_csv(e.path());
            CHECK(t.header[0] == "M");
            CHECK(t.rows.size() == 2);
        }
    }
    CHECK(found);
    CHECK(cli({"preset", "table9"}).code == 1);
}

TEST_CASE("the installed binary reports exit codes")
{
    const std::string bin = SORPTRAN_CLI;
    CHECK(std::system((bin + " list-presets > /dev/null").c_str()) == 0);
    const int bad = std::system((bin + " run --config /nonexistent.ini 2> /dev/null").c_str());
    REQUIRE(WIFEXITED(bad));
    CHECK(WEXITSTATUS(bad) == 1);
}
