#include "sorptran/config.hpp"

#include "sorptran/csv.hpp"
#include "sorptran/errors.hpp"
#include "sorptran/exact.hpp"
#include "sorptran/experiments.hpp"

#include <boost/algorithm/string/classification.hpp>
#include <boost/algorithm/string/split.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace sorptran {

namespace {

namespace pt = boost::property_tree;

template <class E>
struct Names {
    std::vector<std::pair<E, std::string_view>> table;

    std::optional<E> parse(std::string_view s) const
    {
        for (const auto& [e, n] : table)
            if (n == s) return e;
        return std::nullopt;
    }
    std::string_view name(E e) const
    {
        for (const auto& [k, n] : table)
            if (k == e) return n;
        return "?";
    }
    std::string list() const
    {
        std::string out;
        for (const auto& [e, n] : table) {
            if (!out.empty()) out += ", ";
            out += n;
        }
        return out;
    }
};

const Names<VelocityKind> kVelocityNames{{{VelocityKind::constant, "constant"},
                                          {VelocityKind::cosine, "cosine"},
                                          {VelocityKind::tabulated, "tabulated"},
                                          {VelocityKind::rotation, "rotation"}}};
const Names<InitialKind> kInitialNames{{{InitialKind::step, "step"},
                                        {InitialKind::gauss4, "gauss4"},
                                        {InitialKind::constant, "constant"},
                                        {InitialKind::exact_step, "exact_step"}}};
const Names<SideKind> kSideNames{
    {{SideKind::dirichlet, "dirichlet"}, {SideKind::outflow, "outflow"}, {SideKind::exact, "exact"}}};
const Names<ReferenceKind> kReferenceNames{
    {{ReferenceKind::none, "none"}, {ReferenceKind::exact, "exact"}, {ReferenceKind::oracle, "oracle"}}};
const Names<SchemeKind> kSchemeNames{{{SchemeKind::explicit1, "explicit1"},
                                      {SchemeKind::explicit2, "explicit2"},
                                      {SchemeKind::implicit1, "implicit1"},
                                      {SchemeKind::compact2, "compact2"},
                                      {SchemeKind::hires_weno, "hires_weno"}}};

const std::vector<std::string_view> kFormats{"profile", "initial", "convergence"};

const std::map<std::string, std::set<std::string>, std::less<>> kSchema{
    {"problem", {"dimension", "x_left", "x_right", "M", "N", "t0", "T"}},
    {"isotherm", {"a", "p"}},
    {"scheme",
     {"name", "omega", "weno_eps", "corrector_passes", "local_bounds", "bound_bisections", "force_first_order"}},
    {"newton", {"abs_tol", "max_iter", "reg_floor"}},
    {"sweep", {"tol", "max_sweeps"}},
    {"velocity", {"kind", "value", "vx", "vy", "amplitude", "wavenumber", "omega", "x", "v"}},
    {"ic", {"kind", "value"}},
    {"bc",
     {"left", "left_value", "right", "right_value", "west", "west_value", "east", "east_value", "south",
      "south_value", "north", "north_value"}},
    {"reference", {"kind", "refine"}},
    {"output", {"dir", "formats"}},
};

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(", \t"), boost::token_compress_on);
    parts.erase(std::remove(parts.begin(), parts.end(), std::string()), parts.end());
    return parts;
}

/// Reads typed values out of the tree, records every violation and which keys were consumed.
class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::vector<std::string> bad;

    bool has(const std::string& key) const { return raw(key).has_value(); }

    std::optional<std::string> take_string(const std::string& key)
    {
        auto v = raw(key);
        if (v) used_.insert(key);
        return v;
    }

    void read(const std::string& key, double& out, bool required = false)
    {
        const auto v = take_string(key);
        if (!v) return missing(key, required);
        double x = 0.0;
        const char* end = v->data() + v->size();
        const auto res = std::from_chars(v->data(), end, x);
        if (res.ec != std::errc() || res.ptr != end || !std::isfinite(x)) {
            bad.push_back(key + " must be a finite number, got '" + *v + "'");
            return;
        }
        out = x;
    }

    void read(const std::string& key, int& out, bool required = false)
    {
        const auto v = take_string(key);
        if (!v) return missing(key, required);
        int x = 0;
        const char* end = v->data() + v->size();
        const auto res = std::from_chars(v->data(), end, x);
        if (res.ec != std::errc() || res.ptr != end) {
            bad.push_back(key + " must be an integer, got '" + *v + "'");
            return;
        }
        out = x;
    }

    void read(const std::string& key, bool& out)
    {
        const auto v = take_string(key);
        if (!v) return;
        if (*v == "true")
            out = true;
        else if (*v == "false")
            out = false;
        else
            bad.push_back(key + " must be true or false, got '" + *v + "'");
    }

    void read(const std::string& key, std::vector<double>& out)
    {
        const auto v = take_string(key);
        if (!v) return;
        out.clear();
        for (const auto& part : split_list(*v)) {
            double x = 0.0;
            const char* end = part.data() + part.size();
            const auto res = std::from_chars(part.data(), end, x);
            if (res.ec != std::errc() || res.ptr != end || !std::isfinite(x)) {
                bad.push_back(key + " must be a list of finite numbers, got '" + *v + "'");
                return;
            }
            out.push_back(x);
        }
    }

    template <class E>
    void read(const std::string& key, E& out, const Names<E>& names, bool required = false)
    {
        const auto v = take_string(key);
        if (!v) return missing(key, required);
        if (const auto e = names.parse(*v))
            out = *e;
        else
            bad.push_back(key + " must be one of " + names.list() + ", got '" + *v + "'");
    }

    /// Keys that are known but were never consumed for the chosen kinds.
    void report_unused()
    {
        for (const auto& [section, body] : tree_) {
            for (const auto& [key, node] : body) {
                const std::string full = section + "." + key;
                const auto s = kSchema.find(section);
                if (s != kSchema.end() && s->second.count(key) && !used_.count(full))
                    bad.push_back(full + " does not apply to this configuration");
            }
        }
    }

private:
    std::optional<std::string> raw(const std::string& key) const
    {
        const auto dot = key.find('.');
        const auto sec = tree_.find(key.substr(0, dot));
        if (sec == tree_.not_found()) return std::nullopt;
        const auto k = sec->second.find(key.substr(dot + 1));
        if (k == sec->second.not_found()) return std::nullopt;
        return k->second.data();
    }

    void missing(const std::string& key, bool required)
    {
        if (required) bad.push_back(key + " is required");
    }

    const pt::ptree& tree_;
    std::set<std::string> used_;
};

void check_structure(const pt::ptree& tree, std::vector<std::string>& bad)
{
    for (const auto& [section, body] : tree) {
        const auto s = kSchema.find(section);
        if (body.empty() && !body.data().empty()) {
            bad.push_back("key '" + section + "' appears outside a section");
            continue;
        }
        if (s == kSchema.end()) {
            bad.push_back("unknown section [" + section + "]");
            continue;
        }
        for (const auto& [key, node] : body)
            if (!s->second.count(key)) bad.push_back("unknown key " + section + "." + key);
    }
}

bool is_2d_scheme(SchemeKind k) { return !is_explicit(k); }

void read_side(Reader& r, const std::string& name, SideConfig& side)
{
    r.read("bc." + name, side.kind, kSideNames);
    if (side.kind == SideKind::dirichlet) {
        r.read("bc." + name + "_value", side.value);
        if (!(side.value >= 0.0)) r.bad.push_back("bc." + name + "_value must be >= 0");
    }
}

void validate(RunConfigFile& c, Reader& r)
{
    auto& bad = r.bad;
    if (c.dimension != 1 && c.dimension != 2) bad.push_back("problem.dimension must be 1 or 2");
    if (!(c.x_right > c.x_left)) bad.push_back("problem.x_right must exceed problem.x_left");
    if (c.M < 4) bad.push_back("problem.M must be >= 4");
    if (c.N < 0) bad.push_back("problem.N must be >= 0");
    if (!(c.T > c.t0)) bad.push_back("problem.T must exceed problem.t0");
    if (!(c.a > 0.0)) bad.push_back("isotherm.a must be > 0");
    if (!(c.p > 0.0)) bad.push_back("isotherm.p must be > 0");
    try {
        c.scheme.validate();
    } catch (const ValidationError& e) {
        bad.insert(bad.end(), e.violations().begin(), e.violations().end());
    }
    const bool two_d = c.dimension == 2;
    if (two_d && !is_2d_scheme(c.scheme.kind))
        bad.push_back("scheme.name " + std::string(scheme_name(c.scheme.kind)) + " is not available in 2D");

    const bool velocity_ok = two_d ? (c.velocity == VelocityKind::constant || c.velocity == VelocityKind::rotation)
                                   : c.velocity != VelocityKind::rotation;
    if (!velocity_ok)
        bad.push_back("velocity.kind " + std::string(kVelocityNames.name(c.velocity)) + " is not available in " +
                      (two_d ? "2D" : "1D"));
    if (c.velocity == VelocityKind::tabulated) {
        try {
            (void)VelocityField1D::tabulated(c.table_x, c.table_v);
        } catch (const ValidationError& e) {
            bad.insert(bad.end(), e.violations().begin(), e.violations().end());
        }
    }

    if (two_d && (c.ic == InitialKind::step || c.ic == InitialKind::exact_step))
        bad.push_back("ic.kind " + std::string(kInitialNames.name(c.ic)) + " is not available in 2D");
    if (c.ic == InitialKind::constant && !(c.ic_value >= 0.0)) bad.push_back("ic.value must be >= 0");

    const std::vector<std::pair<std::string, const SideConfig*>> sides =
        two_d ? std::vector<std::pair<std::string, const SideConfig*>>{{"west", &c.west},
                                                                        {"east", &c.east},
                                                                        {"south", &c.south},
                                                                        {"north", &c.north}}
              : std::vector<std::pair<std::string, const SideConfig*>>{{"left", &c.left}, {"right", &c.right}};
    bool exact_side = false;
    for (const auto& [name, side] : sides) {
        if (side->kind != SideKind::exact) continue;
        exact_side = true;
        if (two_d) bad.push_back("bc." + name + " exact is not available in 2D");
    }

    if (c.reference == ReferenceKind::oracle && c.refine < 4) bad.push_back("reference.refine must be >= 4");
    if (c.reference == ReferenceKind::exact && two_d) bad.push_back("reference.kind exact is not available in 2D");
    if (c.reference == ReferenceKind::exact && c.ic != InitialKind::step && c.ic != InitialKind::exact_step)
        bad.push_back("reference.kind exact needs ic.kind step or exact_step");

    // The exact step solution assumes unit velocity and holds until the fan meets the shock.
    const bool uses_exact = !two_d && (exact_side || c.ic == InitialKind::exact_step || c.reference == ReferenceKind::exact);
    if (uses_exact) {
        if (c.velocity != VelocityKind::constant || c.velocity_value != 1.0)
            bad.push_back("exact step data needs velocity.kind constant with velocity.value 1");
        if (c.a > 0.0 && c.p > 0.0 && std::isfinite(c.p)) {
            const StepRiemannSolution ex(IsothermSpec(c.a, c.p));
            if (!(c.T < ex.t_interact()))
                bad.push_back("problem.T must be below " + format_number(ex.t_interact()) +
                              " where the exact step solution ends");
        }
        if (c.t0 < 0.0) bad.push_back("problem.t0 must be >= 0 for exact step data");
    }

    if (c.out_dir.empty()) bad.push_back("output.dir must not be empty");
    for (const auto& f : c.formats)
        if (std::find(kFormats.begin(), kFormats.end(), f) == kFormats.end())
            bad.push_back("output.formats entry '" + f + "' must be one of profile, initial, convergence");
}

RunConfigFile read_tree(const pt::ptree& tree, std::vector<std::string> bad)
{
    check_structure(tree, bad);
    Reader r(tree);
    RunConfigFile c;
    r.read("problem.dimension", c.dimension);
    r.read("problem.x_left", c.x_left, true);
    r.read("problem.x_right", c.x_right, true);
    r.read("problem.M", c.M, true);
    r.read("problem.N", c.N, true);
    r.read("problem.t0", c.t0);
    r.read("problem.T", c.T, true);
    r.read("isotherm.a", c.a);
    r.read("isotherm.p", c.p, true);

    r.read("scheme.name", c.scheme.kind, kSchemeNames, true);
    const SchemeKind k = c.scheme.kind;
    if (k == SchemeKind::compact2) r.read("scheme.omega", c.scheme.omega);
    if (k == SchemeKind::hires_weno) {
        r.read("scheme.weno_eps", c.scheme.weno_eps);
        r.read("scheme.corrector_passes", c.scheme.corrector_passes);
        r.read("scheme.local_bounds", c.scheme.local_bounds);
        r.read("scheme.bound_bisections", c.scheme.bound_bisections);
    }
    if (k == SchemeKind::compact2 || k == SchemeKind::hires_weno)
        r.read("scheme.force_first_order", c.scheme.force_first_order);
    r.read("newton.abs_tol", c.scheme.newton.abs_tol);
    r.read("newton.max_iter", c.scheme.newton.max_iter);
    r.read("newton.reg_floor", c.scheme.newton.reg_floor);
    r.read("sweep.tol", c.scheme.sweep_tol);
    r.read("sweep.max_sweeps", c.scheme.max_sweeps);

    r.read("velocity.kind", c.velocity, kVelocityNames, true);
    switch (c.velocity) {
    case VelocityKind::constant:
        if (c.dimension == 2) {
            r.read("velocity.vx", c.velocity_vx);
            r.read("velocity.vy", c.velocity_vy);
        } else {
            r.read("velocity.value", c.velocity_value);
        }
        break;
    case VelocityKind::cosine:
        r.read("velocity.amplitude", c.amplitude);
        r.read("velocity.wavenumber", c.wavenumber);
        break;
    case VelocityKind::tabulated:
        r.read("velocity.x", c.table_x);
        r.read("velocity.v", c.table_v);
        break;
    case VelocityKind::rotation:
        r.read("velocity.omega", c.omega);
        break;
    }

    r.read("ic.kind", c.ic, kInitialNames, true);
    if (c.ic == InitialKind::constant) r.read("ic.value", c.ic_value);

    if (c.dimension == 2) {
        read_side(r, "west", c.west);
        read_side(r, "east", c.east);
        read_side(r, "south", c.south);
        read_side(r, "north", c.north);
    } else {
        read_side(r, "left", c.left);
        read_side(r, "right", c.right);
    }

    r.read("reference.kind", c.reference, kReferenceNames);
    if (c.reference == ReferenceKind::oracle) r.read("reference.refine", c.refine);

    if (const auto d = r.take_string("output.dir")) c.out_dir = *d;
    if (const auto f = r.take_string("output.formats")) c.formats = split_list(*f);

    r.report_unused();
    validate(c, r);
    bad.insert(bad.end(), r.bad.begin(), r.bad.end());
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return c;
}

void put(std::ostream& out, std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; }
void put(std::ostream& out, std::string_view key, double v) { put(out, key, format_number(v)); }
void put(std::ostream& out, std::string_view key, int v) { put(out, key, std::to_string(v)); }
void put(std::ostream& out, std::string_view key, bool v) { put(out, key, std::string(v ? "true" : "false")); }

std::string join_numbers(const std::vector<double>& v)
{
    std::string out;
    for (double x : v) {
        if (!out.empty()) out += ", ";
        out += format_number(x);
    }
    return out;
}

void put_side(std::ostream& out, const std::string& name, const SideConfig& s)
{
    put(out, name, std::string(kSideNames.name(s.kind)));
    if (s.kind == SideKind::dirichlet) put(out, name + "_value", s.value);
}

BoundarySide make_side(const SideConfig& s, const IsothermSpec& iso)
{
    switch (s.kind) {
    case SideKind::dirichlet:
        return BoundarySide::dirichlet(s.value);
    case SideKind::outflow:
        return BoundarySide::outflow();
    case SideKind::exact: {
        const StepRiemannSolution ex(iso);
        return BoundarySide::function([ex](double xl, double xr, double t) {
            return isotherm_invert(ex.isotherm(), ex.cell_average_q(xl, xr, t), NewtonConfig{});
        });
    }
    }
    return BoundarySide::outflow();
}

} // namespace

RunConfigFile parse_config(std::string_view text)
{
    std::istringstream in{std::string(text)};
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError({"line " + std::to_string(e.line()) + ": " + e.message()});
    }
    return read_tree(tree, {});
}

RunConfigFile load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read config file " + path.string());
    try {
        return parse_config(ss.str());
    } catch (const ValidationError& e) {
        std::vector<std::string> bad;
        for (const auto& v : e.violations()) bad.push_back(path.string() + ": " + v);
        throw ValidationError(std::move(bad));
    }
}

std::string serialize_config(const RunConfigFile& c)
{
    std::ostringstream out;
    out << "[problem]\n";
    put(out, "dimension", c.dimension);
    put(out, "x_left", c.x_left);
    put(out, "x_right", c.x_right);
    put(out, "M", c.M);
    put(out, "N", c.N);
    put(out, "t0", c.t0);
    put(out, "T", c.T);

    out << "\n[isotherm]\n";
    put(out, "a", c.a);
    put(out, "p", c.p);

    const auto& s = c.scheme;
    out << "\n[scheme]\n";
    put(out, "name", std::string(kSchemeNames.name(s.kind)));
    if (s.kind == SchemeKind::compact2) put(out, "omega", s.omega);
    if (s.kind == SchemeKind::hires_weno) {
        put(out, "weno_eps", s.weno_eps);
        put(out, "corrector_passes", s.corrector_passes);
        put(out, "local_bounds", s.local_bounds);
        put(out, "bound_bisections", s.bound_bisections);
    }
    if (s.kind == SchemeKind::compact2 || s.kind == SchemeKind::hires_weno)
        put(out, "force_first_order", s.force_first_order);

    out << "\n[newton]\n";
    put(out, "abs_tol", s.newton.abs_tol);
    put(out, "max_iter", s.newton.max_iter);
    put(out, "reg_floor", s.newton.reg_floor);

    out << "\n[sweep]\n";
    put(out, "tol", s.sweep_tol);
    put(out, "max_sweeps", s.max_sweeps);

    out << "\n[velocity]\n";
    put(out, "kind", std::string(kVelocityNames.name(c.velocity)));
    switch (c.velocity) {
    case VelocityKind::constant:
        if (c.dimension == 2) {
            put(out, "vx", c.velocity_vx);
            put(out, "vy", c.velocity_vy);
        } else {
            put(out, "value", c.velocity_value);
        }
        break;
    case VelocityKind::cosine:
        put(out, "amplitude", c.amplitude);
        put(out, "wavenumber", c.wavenumber);
        break;
    case VelocityKind::tabulated:
        put(out, "x", join_numbers(c.table_x));
        put(out, "v", join_numbers(c.table_v));
        break;
    case VelocityKind::rotation:
        put(out, "omega", c.omega);
        break;
    }

    out << "\n[ic]\n";
    put(out, "kind", std::string(kInitialNames.name(c.ic)));
    if (c.ic == InitialKind::constant) put(out, "value", c.ic_value);

    out << "\n[bc]\n";
    if (c.dimension == 2) {
        put_side(out, "west", c.west);
        put_side(out, "east", c.east);
        put_side(out, "south", c.south);
        put_side(out, "north", c.north);
    } else {
        put_side(out, "left", c.left);
        put_side(out, "right", c.right);
    }

    out << "\n[reference]\n";
    put(out, "kind", std::string(kReferenceNames.name(c.reference)));
    if (c.reference == ReferenceKind::oracle) put(out, "refine", c.refine);

    out << "\n[output]\n";
    put(out, "dir", c.out_dir);
    std::string formats;
    for (const auto& f : c.formats) formats += (formats.empty() ? "" : ", ") + f;
    put(out, "formats", formats);
    return out.str();
}

Run1DConfig to_run_1d(const RunConfigFile& c)
{
    if (c.dimension != 1) throw ValidationError({"problem.dimension must be 1 for a 1D run"});
    Run1DConfig r;
    r.grid = Grid1D(c.x_left, c.x_right, c.M);
    r.iso = IsothermSpec(c.a, c.p);
    switch (c.velocity) {
    case VelocityKind::constant:
        r.velocity = VelocityField1D::constant(c.velocity_value);
        break;
    case VelocityKind::cosine:
        r.velocity = VelocityField1D::cosine(c.amplitude, c.wavenumber);
        break;
    case VelocityKind::tabulated:
        r.velocity = VelocityField1D::tabulated(c.table_x, c.table_v);
        break;
    case VelocityKind::rotation:
        throw ValidationError({"velocity.kind rotation is not available in 1D"});
    }
    r.scheme = c.scheme;
    r.bc.left = make_side(c.left, r.iso);
    r.bc.right = make_side(c.right, r.iso);
    r.t0 = c.t0;
    r.t_end = c.T;
    r.steps = c.N;
    switch (c.ic) {
    case InitialKind::step:
        r.initial = ic_step_1d;
        break;
    case InitialKind::gauss4:
        r.initial = ic_gauss4_1d;
        break;
    case InitialKind::constant:
        r.initial = [v = c.ic_value](const Grid1D& g, const IsothermSpec& iso) { return ic_constant_1d(g, iso, v); };
        break;
    case InitialKind::exact_step:
        r.initial = [t0 = c.t0](const Grid1D& g, const IsothermSpec& iso) {
            return ic_exact_step(g, StepRiemannSolution(iso), t0);
        };
        break;
    }
    return r;
}

Run2DConfig to_run_2d(const RunConfigFile& c)
{
    if (c.dimension != 2) throw ValidationError({"problem.dimension must be 2 for a 2D run"});
    Run2DConfig r;
    r.grid = Grid2D(c.x_left, c.x_right, c.M);
    r.iso = IsothermSpec(c.a, c.p);
    if (c.velocity == VelocityKind::rotation)
        r.velocity = VelocityField2D::rotation(c.omega);
    else if (c.velocity == VelocityKind::constant)
        r.velocity = VelocityField2D::constant(c.velocity_vx, c.velocity_vy);
    else
        throw ValidationError({"velocity.kind " + std::string(kVelocityNames.name(c.velocity)) +
                               " is not available in 2D"});
    r.scheme = c.scheme;
    r.bc.west = make_side(c.west, r.iso);
    r.bc.east = make_side(c.east, r.iso);
    r.bc.south = make_side(c.south, r.iso);
    r.bc.north = make_side(c.north, r.iso);
    r.t0 = c.t0;
    r.t_end = c.T;
    r.steps = c.N;
    if (c.ic == InitialKind::gauss4)
        r.initial = ic_gauss4_2d;
    else if (c.ic == InitialKind::constant)
        r.initial = [v = c.ic_value](const Grid2D& g, const IsothermSpec& iso) { return ic_constant_2d(g, iso, v); };
    else
        throw ValidationError({"ic.kind " + std::string(kInitialNames.name(c.ic)) + " is not available in 2D"});
    return r;
}

} // namespace sorptran
