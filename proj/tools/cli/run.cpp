#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "modloc/conventions.hpp"
#include "modloc/errors.hpp"
#include "modloc/flap.hpp"
#include "modloc/localization.hpp"
#include "modloc/modular.hpp"
#include "modloc/parallel.hpp"

namespace modloc::cli {
namespace {

constexpr double kPi = std::numbers::pi;

// Typed access to an object with field-path diagnostics.
class Params {
public:
    Params(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {}

    bool has(const std::string& k) const { return j_.contains(k); }
    std::string field(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
    const nlohmann::json& raw(const std::string& k) const { return j_.at(k); }
    Params sub(const std::string& k) const {
        if (!j_.at(k).is_object()) fail(k, "expected an object");
        return {j_.at(k), field(k)};
    }

    double num(const std::string& k, double def) const {
        if (!has(k)) return def;
        if (!j_[k].is_number()) fail(k, "expected a number");
        return j_[k].get<double>();
    }
    double positive(const std::string& k, double def) const {
        const double v = num(k, def);
        if (!(v > 0.0)) fail(k, "must be positive");
        return v;
    }
    int integer(const std::string& k, int def) const {
        if (!has(k)) return def;
        if (!j_[k].is_number_integer()) fail(k, "expected an integer");
        return j_[k].get<int>();
    }
    std::string str(const std::string& k, const std::string& def) const {
        if (!has(k)) return def;
        if (!j_[k].is_string()) fail(k, "expected a string");
        return j_[k].get<std::string>();
    }
    bool flag(const std::string& k, bool def) const {
        if (!has(k)) return def;
        if (!j_[k].is_boolean()) fail(k, "expected true or false");
        return j_[k].get<bool>();
    }
    [[noreturn]] void fail(const std::string& k, const std::string& msg) const {
        throw ConfigError("field '" + field(k) + "': " + msg);
    }

private:
    const nlohmann::json& j_;
    std::string path_;
};

cplx to_complex(const nlohmann::json& v, const std::string& field) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError("field '" + field + "': expected a number or [re, im]");
}

Eigen::VectorXd to_vector(const nlohmann::json& v, const std::string& field, int n = -1) {
    if (!v.is_array() || (n >= 0 && static_cast<int>(v.size()) != n))
        throw ConfigError("field '" + field + "': expected an array" + (n >= 0 ? " of length " + std::to_string(n) : ""));
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError("field '" + field + "[" + std::to_string(i) + "]': expected a number");
        out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    return out;
}

std::string strip_prefix(const std::string& what) {
    static const std::string p = "ConfigError: ";
    return what.rfind(p, 0) == 0 ? what.substr(p.size()) : what;
}

std::vector<double> as_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

LorentzTransform parse_lorentz(const nlohmann::json& j, const std::string& field) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "identity") return LorentzTransform();
        if (s == "upsilon" || s == "rotation_z_pi") return rotation_z_pi();
        if (s == "rotation_x_pi") return rotation_x_pi();
        if (s == "rotation_y_pi") return rotation_y_pi();
        throw ConfigError("field '" + field + "': unknown transform '" + s + "'");
    }
    if (j.is_array()) {
        LorentzTransform l;
        for (std::size_t i = 0; i < j.size(); ++i) l = l * parse_lorentz(j[i], field + "[" + std::to_string(i) + "]");
        return l;
    }
    if (j.is_object() && j.size() == 1) {
        const auto& [key, val] = *j.items().begin();
        if (key == "boost") {
            if (!val.is_number()) throw ConfigError("field '" + field + ".boost': expected a number");
            return boost3(val.get<double>());
        }
        if (key == "rotation_z") {
            if (!val.is_number()) throw ConfigError("field '" + field + ".rotation_z': expected a number");
            return rotation_z(val.get<double>());
        }
        if (key == "matrix") {
            if (!val.is_array() || val.size() != 4) throw ConfigError("field '" + field + ".matrix': expected 4 rows");
            Eigen::Matrix4d m;
            for (int r = 0; r < 4; ++r) {
                const Eigen::VectorXd row = to_vector(val[r], field + ".matrix[" + std::to_string(r) + "]", 4);
                m.row(r) = row.transpose();
            }
            const LorentzTransform l(m);
            if (!l.preserves_metric(1e-10) || !l.is_proper_orthochronous(1e-10))
                throw ConfigError("field '" + field + ".matrix': not a proper orthochronous Lorentz matrix");
            return l;
        }
    }
    throw ConfigError("field '" + field + "': expected a transform name, {boost|rotation_z|matrix: ...} or a list");
}

PoincareElement parse_frame(const Params& p, const std::string& key) {
    if (!p.has(key)) return PoincareElement::identity();
    const Params f = p.sub(key);
    FourVector a;
    if (f.has("a")) a = FourVector(Eigen::Vector4d(to_vector(f.raw("a"), f.field("a"), 4)));
    const LorentzTransform l = f.has("lambda") ? parse_lorentz(f.raw("lambda"), f.field("lambda")) : LorentzTransform();
    return {a, l};
}

GridPtr make_grid(const GridConfig& g) {
    std::vector<TransversePoint> t;
    for (const auto& [p1, p2] : g.transverse) t.push_back({p1, p2, 1.0});
    return std::make_shared<const MassShellGrid>(g.mass, g.theta_min, g.theta_max, g.n_theta, t);
}

std::vector<Sign> parse_signs(const Params& p) {
    if (!p.has("signs")) return {Sign::plus, Sign::minus};
    const auto& s = p.raw("signs");
    if (!s.is_array() || s.empty()) p.fail("signs", "expected a nonempty array of \"+\" / \"-\"");
    std::vector<Sign> out;
    for (const auto& v : s) {
        if (!v.is_string()) p.fail("signs", "expected strings");
        try {
            out.push_back(sign_from_string(v.get<std::string>()));
        } catch (const Error& e) {
            p.fail("signs", e.what());
        }
    }
    return out;
}

Sign parse_sign(const Params& p) {
    try {
        return sign_from_string(p.str("sign", "+"));
    } catch (const Error& e) {
        p.fail("sign", e.what());
    }
}

// Battery in the frame: the default gaussians or explicit family specs.
std::vector<WaveFunction> parse_battery(const Params& p, GridPtr grid, const PoincareElement& frame) {
    if (!p.has("battery") || (p.raw("battery").is_string() && p.raw("battery").get<std::string>() == "gaussian"))
        return gaussian_battery(grid, frame);
    const auto& b = p.raw("battery");
    if (!b.is_array() || b.empty()) p.fail("battery", "expected \"gaussian\" or a nonempty array of families");
    std::vector<WaveFunction> out;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const std::string at = p.field("battery") + "[" + std::to_string(i) + "]";
        if (!b[i].is_object()) throw ConfigError("field '" + at + "': expected an object");
        const Params m(b[i], at);
        FamilyParams fp;
        const std::string tag = m.str("tag", "gaussian");
        if (tag == "gaussian") fp.tag = FamilyTag::gaussian;
        else if (tag == "sech") fp.tag = FamilyTag::sech;
        else if (tag == "rational") fp.tag = FamilyTag::rational;
        else m.fail("tag", "unknown family '" + tag + "'");
        fp.center = m.num("center", 0.0);
        fp.width = m.positive("width", 1.25);
        fp.scale = m.positive("scale", 0.25);
        if (m.has("amplitude")) fp.amplitude = to_complex(m.raw("amplitude"), m.field("amplitude"));
        if (m.has("poles")) {
            if (!m.raw("poles").is_array()) m.fail("poles", "expected an array");
            for (std::size_t k = 0; k < m.raw("poles").size(); ++k)
                fp.poles.push_back(to_complex(m.raw("poles")[k], m.field("poles") + "[" + std::to_string(k) + "]"));
        }
        try {
            out.push_back(apply_poincare(frame, make_analytic(fp, grid).second, ResamplePolicy::exact_only));
        } catch (const SingularityInStrip& e) {
            throw ConfigError("field '" + at + "': " + e.what());
        }
    }
    return out;
}

std::pair<TubeFunction, int> parse_function(const nlohmann::json& j, const std::string& field) {
    if (!j.is_object()) throw ConfigError("field '" + field + "': expected an object");
    const Params p(j, field);
    const std::string kind = p.str("kind", "");
    if (kind == "inverse") return {[](const ComplexVector& z) { return 1.0 / z(0); }, 1};
    if (kind == "shifted_inverse") {
        const cplx s = p.has("shift") ? to_complex(p.raw("shift"), p.field("shift")) : cplx(0.0, 0.0);
        return {[s](const ComplexVector& z) { return 1.0 / (z(0) + s); }, 1};
    }
    if (kind == "const") {
        const cplx c = p.has("value") ? to_complex(p.raw("value"), p.field("value")) : cplx(1.0, 0.0);
        return {[c](const ComplexVector&) { return c; }, 1};
    }
    if (kind == "gaussian_phase") {
        return {[](const ComplexVector& z) { return std::exp(cplx(0.0, -1.0) * z(0) * z(0)); }, 1};
    }
    if (kind == "product") {
        if (!p.has("factors") || !p.raw("factors").is_array() || p.raw("factors").size() != 2)
            p.fail("factors", "expected two one-dimensional factors");
        auto [f1, n1] = parse_function(p.raw("factors")[0], p.field("factors") + "[0]");
        auto [f2, n2] = parse_function(p.raw("factors")[1], p.field("factors") + "[1]");
        if (n1 != 1 || n2 != 1) p.fail("factors", "factors must be one-dimensional");
        return {[f1, f2](const ComplexVector& z) {
                    ComplexVector a(1), b(1);
                    a(0) = z(0);
                    b(0) = z(1);
                    return f1(a) * f2(b);
                },
                2};
    }
    p.fail("kind", "expected inverse, shifted_inverse, const, gaussian_phase or product");
}

SampledDistribution parse_distribution(const Params& p, const RunConfig& cfg) {
    nlohmann::json dj;
    std::string where;
    if (p.has("distribution")) {
        dj = p.raw("distribution");
        where = p.field("distribution");
    } else if (p.has("distribution_file")) {
        std::filesystem::path path = p.str("distribution_file", "");
        if (path.is_relative()) path = cfg.base_dir / path;
        std::ifstream in(path);
        if (!in) p.fail("distribution_file", "cannot open " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            dj = nlohmann::json::parse(ss.str());
        } catch (const nlohmann::json::parse_error& e) {
            p.fail("distribution_file", path.string() + ": " + e.what());
        }
        where = path.string();
    } else {
        throw ConfigError("field 'params.distribution': required (or params.distribution_file)");
    }
    try {
        return distribution_from_json(dj);
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + strip_prefix(e.what()));
    }
}

ZetaNorm parse_norm(const Params& p) {
    const std::string s = p.str("norm", "max");
    if (s == "max") return ZetaNorm::max;
    if (s == "euclidean") return ZetaNorm::euclidean;
    p.fail("norm", "expected max or euclidean");
}

std::vector<Eigen::VectorXd> axis_directions(int n) {
    std::vector<Eigen::VectorXd> d;
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(j) = 1.0;
        d.push_back(e);
        d.push_back(-e);
    }
    return d;
}

std::vector<Eigen::VectorXd> parse_directions(const Params& p, int n) {
    if (!p.has("directions")) return axis_directions(n);
    const auto& d = p.raw("directions");
    if (!d.is_array() || d.empty()) p.fail("directions", "expected a nonempty array");
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 0; i < d.size(); ++i)
        out.push_back(to_vector(d[i], p.field("directions") + "[" + std::to_string(i) + "]", n));
    return out;
}

Check check_le(const std::string& name, double v, double thr) { return {name, v, thr, "<=", v <= thr}; }
Check check_gt(const std::string& name, double v, double thr) { return {name, v, thr, ">", v > thr}; }
Check check_true(const std::string& name, bool v) { return {name, v ? 1.0 : 0.0, 1.0, "==", v}; }

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

std::string csv_number(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// ---------------------------------------------------------------- modes

Outcome run_tomita(const RunConfig& cfg) {
    const Params p(cfg.params, "params");
    const GridPtr grid = make_grid(cfg.grid);
    const PoincareElement frame = parse_frame(p, "frame");
    const std::vector<WaveFunction> battery = parse_battery(p, grid, frame);
    const double tol = cfg.tol.value_or(p.positive("relation_tol", 1e-8));
    const double agree_tol = p.positive("agreement_tol", 1e-6);
    TomitaOptions opts;
    try {
        opts.backend = backend_from_string(p.str("backend", "closed_form"));
    } catch (const Error& e) {
        p.fail("backend", e.what());
    }
    if (p.has("mismatched_frame")) opts.mismatched_frame = parse_frame(p, "mismatched_frame");

    Outcome out;
    nlohmann::json result;
    result["frame"] = frame_to_json(frame);
    result["battery_size"] = battery.size();
    result["reports"] = nlohmann::json::array();
    std::ostringstream rel;
    rel << "sign,relation,residual\n";
    for (Sign s : parse_signs(p)) {
        const ModularReport r = tomita_check(frame, battery, s, opts);
        result["reports"].push_back(r.to_json());
        for (const auto& x : r.relations) rel << to_string(s) << ',' << x.name << ',' << csv_number(x.residual) << '\n';
        out.checks.push_back(check_le(std::string("relations_") + to_string(s), r.max_residual(), tol));
    }
    out.csv.push_back({"relations.csv", rel.str()});

    if (p.flag("backend_agreement", true)) {
        double worst = 0.0;
        nlohmann::json per = nlohmann::json::array();
        for (const auto& phi : battery) {
            const double a = std::max(backend_agreement(phi, frame, {0.0, kPi}), backend_agreement(phi, frame, {0.0, -kPi}));
            per.push_back(a);
            worst = std::max(worst, a);
        }
        result["backend_agreement"] = per;
        out.checks.push_back(check_le("backend_agreement", worst, agree_tol));
    }
    if (p.flag("white_noise_control", true)) {
        bool raised = false;
        std::string msg;
        try {
            continue_boost(white_noise(grid, cfg.seed), frame, {0.0, kPi / 2}, Backend::spectral);
        } catch (const NotInDomain& e) {
            raised = true;
            msg = e.what();
        }
        result["white_noise_control"] = {{"seed", cfg.seed}, {"raised", raised}, {"message", msg}};
        out.checks.push_back(check_true("white_noise_not_in_domain", raised));
    }

    // Plot data: first member and its delta^{1/2}_+ image.
    const WaveFunction d = delta_half(frame, Sign::plus, battery.front());
    std::ostringstream pl;
    pl << "theta,abs_phi,abs_delta_half_phi\n";
    for (int j = 0; j < grid->n_theta(); ++j)
        pl << csv_number(grid->theta(j)) << ',' << csv_number(std::abs(battery.front().at(j, 0))) << ','
           << csv_number(std::abs(d.at(j, 0))) << '\n';
    out.csv.push_back({"continuation.csv", pl.str()});
    out.report["result"] = result;
    return out;
}

WedgeFamily parse_family(const Params& p) {
    if (!p.has("family")) return slab_family(2.0);
    const Params f = p.sub("family");
    if (f.has("slab")) return slab_family(f.positive("slab", 2.0));
    if (f.has("frames")) {
        const auto& fr = f.raw("frames");
        if (!fr.is_array() || fr.empty()) f.fail("frames", "expected a nonempty array");
        std::vector<PoincareElement> frames;
        for (std::size_t i = 0; i < fr.size(); ++i) {
            const nlohmann::json holder = {{"frame", fr[i]}};
            frames.push_back(parse_frame(Params(holder, f.field("frames") + "[" + std::to_string(i) + "]"), "frame"));
        }
        try {
            return make_wedge_family(frames);
        } catch (const Error& e) {
            f.fail("frames", e.what());
        }
    }
    throw ConfigError("field 'params.family': expected {\"slab\": b} or {\"frames\": [...]}");
}

std::size_t member_index(const Params& p, std::size_t n) {
    const int i = p.integer("member", 0);
    if (i < 0 || static_cast<std::size_t>(i) >= n) p.fail("member", "index outside the battery");
    return static_cast<std::size_t>(i);
}

Outcome run_localize(const RunConfig& cfg) {
    const Params p(cfg.params, "params");
    const GridPtr grid = make_grid(cfg.grid);
    const WedgeFamily family = parse_family(p);
    const Sign sign = parse_sign(p);
    const std::vector<WaveFunction> battery = parse_battery(p, grid, PoincareElement::identity());
    const WaveFunction phi = battery[member_index(p, battery.size())];
    const double tol = cfg.tol.value_or(p.positive("residual_tol", 1e-6));
    const int cycles = p.integer("max_cycles", 200);
    if (cycles < 1) p.fail("max_cycles", "must be at least 1");

    Outcome out;
    const LocalizationResult lr = localize(family, sign, phi, tol, cycles);
    double worst = 0.0;
    for (double r : lr.residuals) worst = std::max(worst, r);
    out.checks.push_back(check_le("per_wedge_residual", worst, tol));

    nlohmann::json result;
    result["localization"] = lr.to_json(family);

    if (p.flag("real_subspace_algebra", true)) {
        // Members of the first wedge: psi = phi + s phi.
        const PoincareElement w = family.frames.front();
        const WedgeFamily single = make_wedge_family({w});
        const std::vector<WaveFunction> b = gaussian_battery(grid, w);
        const WaveFunction m1 = b[0] + s_op(w, sign, b[0]);
        const WaveFunction m2 = b[1] + s_op(w, sign, b[1]);
        const double mtol = p.positive("membership_tol", 1e-8);
        const MembershipResult real_comb = membership_test(single, sign, 0.7 * m1 + (-1.3) * m2, mtol);
        const MembershipResult imag = membership_test(single, sign, cplx(0.0, 1.0) * m1, mtol);
        result["real_subspace"] = {{"real_combination_residual", real_comb.residuals},
                                   {"i_multiple_residual", imag.residuals},
                                   {"membership_tol", mtol}};
        out.checks.push_back(check_le("real_combination_member", real_comb.residuals.front(), mtol));
        out.checks.push_back(check_gt("i_multiple_rejected", imag.residuals.front(), mtol));
    }

    std::ostringstream hist;
    hist << "cycle";
    for (std::size_t w = 0; w < family.frames.size(); ++w) hist << ",wedge" << w;
    hist << '\n';
    for (std::size_t c = 0; c < lr.history.size(); ++c) {
        hist << c + 1;
        for (double r : lr.history[c]) hist << ',' << csv_number(r);
        hist << '\n';
    }
    out.csv.push_back({"history.csv", hist.str()});
    std::ostringstream proj;
    write_csv(lr.projected, proj);
    out.csv.push_back({"projected.csv", proj.str()});
    out.report["result"] = result;
    return out;
}

Outcome run_boundary(const RunConfig& cfg) {
    const Params p(cfg.params, "params");
    const GridPtr grid = make_grid(cfg.grid);
    const PoincareElement frame = parse_frame(p, "frame");
    const Sign sign = parse_sign(p);
    const std::vector<WaveFunction> battery = parse_battery(p, grid, frame);
    const WaveFunction& base = battery[member_index(p, battery.size())];
    const WaveFunction member = base + s_op(frame, sign, base);
    const double window = p.positive("theta_window", 4.0);
    const double tol = cfg.tol.value_or(p.positive("boundary_tol", 1e-6));
    const double control = p.positive("control_threshold", 1e-2);
    const double ftol = p.positive("factorization_tol", 1e-8);
    const double fwindow = p.positive("factorization_window", 3.0);

    std::vector<cplx> taus{{0.0, 0.5}, {0.2, 1.0}, {0.0, kPi}};
    if (p.has("taus")) {
        const auto& t = p.raw("taus");
        if (!t.is_array() || t.empty()) p.fail("taus", "expected a nonempty array");
        taus.clear();
        for (std::size_t i = 0; i < t.size(); ++i)
            taus.push_back(to_complex(t[i], p.field("taus") + "[" + std::to_string(i) + "]"));
    }
    for (auto& t : taus)
        if (sign == Sign::minus) t = std::conj(t);

    Outcome out;
    const auto pts = theta_window(*grid, window);
    const BoundaryConditionReport bm = boundary_condition_check(member, frame, sign, pts);
    const BoundaryConditionReport bc = boundary_condition_check(cplx(0.0, 1.0) * member, frame, sign, pts);
    const double fr = factorization_residual(member, frame, taus, theta_window(*grid, fwindow));
    out.checks.push_back(check_le("boundary_member", bm.max_residual, tol));
    out.checks.push_back(check_gt("boundary_i_control", bc.max_residual, control));
    out.checks.push_back(check_le("factorization", fr, ftol));

    nlohmann::json result;
    result["frame"] = frame_to_json(frame);
    result["sign"] = to_string(sign);
    result["samples"] = pts.size();
    result["boundary_member_residual"] = bm.max_residual;
    result["boundary_control_residual"] = bc.max_residual;
    result["factorization_residual"] = fr;
    nlohmann::json tj = nlohmann::json::array();
    for (const auto& t : taus) tj.push_back({t.real(), t.imag()});
    result["taus"] = tj;

    const TubeSample ts = boundary_function(member, frame, taus, theta_window(*grid, fwindow));
    result["max_shell_residual"] = ts.max_shell_residual();
    std::ostringstream tube;
    ts.write_csv(tube);
    out.csv.push_back({"tube.csv", tube.str()});
    out.report["result"] = result;
    return out;
}

TubeGrid parse_tube_grid(const Params& p, int n) {
    TubeGrid g = default_tube_grid(n);
    if (!p.has("tube")) return g;
    const Params t = p.sub("tube");
    const double r_max = t.positive("r_max", 50.0);
    const int n_radii = t.integer("n_radii", 12);
    if (n_radii < 2) t.fail("n_radii", "must be at least 2");
    g = default_tube_grid(n, r_max, n_radii);
    g.xi_max = t.positive("xi_max", g.xi_max);
    g.n_xi = t.integer("n_xi", g.n_xi);
    if (g.n_xi < 1) t.fail("n_xi", "must be positive");
    if (t.has("directions")) g.directions = parse_directions(t, n);
    return g;
}

Outcome run_pws(const RunConfig& cfg) {
    const Params p(cfg.params, "params");
    const SampledDistribution u = parse_distribution(p, cfg);
    if (!u.compact()) throw ConfigError("field 'params.distribution': pws needs compact support");
    const TubeGrid g = parse_tube_grid(p, u.n);
    PwsOptions opts;
    opts.norm = parse_norm(p);
    if (p.has("C")) opts.c_declared = p.positive("C", 1.0);
    if (cfg.tol) opts.stability = *cfg.tol;
    if (p.has("K")) {
        try {
            opts.k = region_from_json(p.raw("K"));
        } catch (const std::exception& e) {
            p.fail("K", strip_prefix(e.what()));
        }
        if (opts.k->dim() != u.n) p.fail("K", "dimension differs from the distribution");
    }
    const PolyRegion& k = opts.k ? *opts.k : u.hull;

    Outcome out;
    const BoundReport r = pws_check(u, g, opts);
    out.checks.push_back({"pws_bound", r.c_doubled, (1.0 + opts.stability) * r.c, "<=", r.pass});
    nlohmann::json result;
    result["distribution"] = u.to_json();
    result["bound"] = r.to_json();

    // Plot data: ratio along the imaginary rays at xi = 0.
    std::ostringstream rays;
    rays << "direction,r,abs_u,ratio\n";
    for (std::size_t d = 0; d < g.directions.size(); ++d)
        for (double rad : g.radii) {
            const Eigen::VectorXd eta = rad * g.directions[d];
            const cplx v = fl_transform(u, cplx(0.0, 1.0) * eta.cast<cplx>());
            const double ratio = std::abs(v) * std::exp(-support_function(k, eta)) /
                                 std::pow(1.0 + rad, static_cast<double>(u.order));
            rays << d << ',' << csv_number(rad) << ',' << csv_number(std::abs(v)) << ',' << csv_number(ratio) << '\n';
        }
    out.csv.push_back({"rays.csv", rays.str()});
    out.report["result"] = result;
    return out;
}

Outcome run_hormander(const RunConfig& cfg) {
    const Params p(cfg.params, "params");
    const SampledDistribution u = parse_distribution(p, cfg);
    const double tol = cfg.tol.value_or(p.positive("endpoint_tol", 1e-9));

    Outcome out;
    PolyRegion gamma;
    try {
        gamma = hormander_cone_estimate(u);
    } catch (const UnsupportedDensity& e) {
        throw ConfigError(std::string("field 'params.distribution': ") + e.what());
    }
    nlohmann::json result;
    result["gamma"] = region_to_json(gamma);
    if (u.n == 1) {
        Eigen::VectorXd e(1);
        e(0) = 1.0;
        const double hi = support_function(gamma, e);
        const double lo = -support_function(gamma, -e);
        result["interval"] = {num(lo), num(hi)};
        if (p.has("expected")) {
            const Params x = p.sub("expected");
            auto endpoint = [&](const std::string& k, double def) {
                if (!x.has(k)) return def;
                const auto& v = x.raw(k);
                if (v.is_null()) return k == "lo" ? -std::numeric_limits<double>::infinity()
                                                  : std::numeric_limits<double>::infinity();
                if (!v.is_number()) x.fail(k, "expected a number or null for an open end");
                return v.get<double>();
            };
            const double elo = endpoint("lo", lo), ehi = endpoint("hi", hi);
            auto diff = [](double a, double b) {
                if (std::isinf(a) || std::isinf(b)) return a == b ? 0.0 : std::numeric_limits<double>::infinity();
                return std::abs(a - b);
            };
            out.checks.push_back(check_le("lower_endpoint", diff(lo, elo), tol));
            out.checks.push_back(check_le("upper_endpoint", diff(hi, ehi), tol));
        }
    }
    if (p.has("probes")) {
        nlohmann::json pr = nlohmann::json::array();
        for (const auto& eta : parse_directions(Params({{"directions", p.raw("probes")}}, "params.probes"), u.n))
            pr.push_back({{"eta", as_std(eta)}, {"tempered", is_tempered(u, eta)}});
        result["probes"] = pr;
    }
    out.report["result"] = result;
    return out;
}

Outcome run_support(const RunConfig& cfg) {
    const Params p(cfg.params, "params");
    const SampledDistribution u = parse_distribution(p, cfg);
    const auto dirs = parse_directions(p, u.n);
    const double r_min = p.positive("r_min", 2.0), r_max = p.positive("r_max", 50.0);
    const int count = p.integer("n_radii", 12);
    if (count < 4) p.fail("n_radii", "must be at least 4");
    const double tol = cfg.tol.value_or(p.positive("relative_tol", 1e-2));
    const auto radii = geometric_radii(r_min, r_max, count);
    const TubeFunction f = [&u](const ComplexVector& z) { return fl_transform(u, z); };

    Outcome out;
    const SupportEstimate est = support_from_growth(f, dirs, radii);
    double worst = 0.0;
    nlohmann::json cmp = nlohmann::json::array();
    for (const auto& [eta, h] : est.h) {
        const double exact = support_function(u.hull, eta);
        const double err = std::abs(h - exact) / std::max(1.0, std::abs(exact));
        worst = std::max(worst, err);
        cmp.push_back({{"eta", as_std(eta)}, {"H_est", h}, {"H_hull", num(exact)}, {"relative_error", num(err)}});
    }
    out.checks.push_back(check_le("support_relative_error", worst, tol));
    nlohmann::json result;
    result["estimate"] = est.to_json();
    result["comparison"] = cmp;
    result["radii"] = radii;

    std::ostringstream g;
    g << "direction,r,log_abs_u\n";
    for (std::size_t d = 0; d < dirs.size(); ++d)
        for (double r : radii) {
            const double m = std::abs(f(cplx(0.0, r) * dirs[d].cast<cplx>()));
            g << d << ',' << csv_number(r) << ',' << csv_number(m > 0.0 ? std::log(m) : -1e308) << '\n';
        }
    out.csv.push_back({"growth.csv", g.str()});
    out.report["result"] = result;
    return out;
}

Outcome run_epstein(const RunConfig& cfg) {
    const Params p(cfg.params, "params");
    if (!p.has("function")) throw ConfigError("field 'params.function': required");
    const auto [f, n] = parse_function(p.raw("function"), "params.function");
    std::vector<Eigen::VectorXd> m;
    if (p.has("M")) {
        const auto& mj = p.raw("M");
        if (!mj.is_array() || mj.empty()) p.fail("M", "expected a nonempty array of eta samples");
        for (std::size_t i = 0; i < mj.size(); ++i) m.push_back(to_vector(mj[i], "params.M[" + std::to_string(i) + "]", n));
    } else {
        for (double v : {0.5, 0.75, 1.0, 1.5, 2.0}) m.push_back(Eigen::VectorXd::Constant(n, v));
    }
    XiGrid xi;
    xi.xi_max = p.positive("xi_max", xi.xi_max);
    xi.n_xi = p.integer("n_xi", xi.n_xi);
    EpsteinOptions opts;
    opts.n_declared = p.num("N", 0.0);
    if (p.has("C")) opts.c_declared = p.positive("C", 1.0);
    opts.norm = parse_norm(p);
    opts.probe_steps = p.integer("probe_steps", opts.probe_steps);
    if (cfg.tol) opts.stability = *cfg.tol;

    Outcome out;
    BoundReport r;
    try {
        r = epstein_bound_check(f, nonnegative_orthant(n), m, xi, n, opts);
    } catch (const ConfigError& e) {
        throw ConfigError("field 'params.M': " + strip_prefix(e.what()));
    }
    out.checks.push_back({"epstein_bound", r.c_doubled, (1.0 + opts.stability) * r.c, "<=", r.pass});
    const double n_tol = p.num("N_est_max", 0.1);
    out.checks.push_back(check_le("order_estimate", r.n_est, opts.n_declared + n_tol));
    out.report["result"] = {{"bound", r.to_json()}};

    std::ostringstream pr;
    pr << "test_function,eta,increment\n";
    if (r.extra.contains("probe") && r.extra["probe"].is_array())
        for (const auto& t : r.extra["probe"])
            for (std::size_t k = 0; k < t["increments"].size(); ++k)
                pr << t["test_function"].get<std::string>() << ',' << csv_number(t["eta"][k + 1].get<double>()) << ','
                   << (t["increments"][k].is_null() ? std::string("inf") : csv_number(t["increments"][k].get<double>()))
                   << '\n';
    out.csv.push_back({"probe.csv", pr.str()});
    return out;
}

Outcome run_cauchy(const RunConfig& cfg) {
    const Params p(cfg.params, "params");
    if (!p.has("function")) throw ConfigError("field 'params.function': required");
    const auto [f, n] = parse_function(p.raw("function"), "params.function");
    if (!p.has("lo") || !p.has("hi") || !p.has("target"))
        throw ConfigError("field 'params': lo, hi and target are required");
    const Eigen::VectorXd lo = to_vector(p.raw("lo"), "params.lo", n), hi = to_vector(p.raw("hi"), "params.hi", n);
    const auto& tj = p.raw("target");
    if (!tj.is_array() || static_cast<int>(tj.size()) != n) p.fail("target", "expected one [re, im] per dimension");
    ComplexVector z(n);
    for (int j = 0; j < n; ++j) z(j) = to_complex(tj[j], "params.target[" + std::to_string(j) + "]");
    CauchyOptions opts;
    opts.n_points = p.integer("n_points", n == 1 ? 161 : 81);
    opts.t_max = p.positive("t_max", opts.t_max);
    opts.tolerance = cfg.tol.value_or(p.positive("quadrature_tol", 1e-4));
    opts.throw_on_insufficient = false;

    Outcome out;
    CauchyResult coarse, fine;
    try {
        coarse = cauchy_tube_reconstruct(f, lo, hi, z, opts);
        CauchyOptions o2 = opts;
        o2.n_points = 2 * opts.n_points - 1;
        fine = cauchy_tube_reconstruct(f, lo, hi, z, o2);
    } catch (const InsufficientSampling& e) {
        out.checks.push_back(check_true("sampling_sufficient", false));
        out.report["result"] = {{"error", e.what()}};
        return out;
    } catch (const Error& e) {
        throw ConfigError(std::string("field 'params': ") + e.what());
    }
    const cplx direct = f(z);
    const double e1 = std::abs(coarse.value - direct), e2 = std::abs(fine.value - direct);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(direct));
    out.checks.push_back(check_le("self_estimate", coarse.error_estimate, opts.tolerance));
    out.checks.push_back(check_le("direct_error", e1, opts.tolerance));
    out.checks.push_back(check_le("error_after_doubling", e2, std::max(0.5 * e1, floor)));
    out.report["result"] = {{"value", {coarse.value.real(), coarse.value.imag()}},
                            {"direct", {direct.real(), direct.imag()}},
                            {"error", e1},
                            {"error_estimate", coarse.error_estimate},
                            {"n_points", coarse.n_points},
                            {"doubled", {{"n_points", fine.n_points}, {"error", e2}, {"error_estimate", fine.error_estimate}}},
                            {"roundoff_floor", floor},
                            {"k", opts.k},
                            {"t_max", opts.t_max}};
    return out;
}

const char* pairing_for(const std::string& mode) {
    return mode == "tomita" || mode == "localize" || mode == "boundary" ? "minkowski" : "euclidean";
}

}  // namespace

bool Outcome::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Outcome run(const RunConfig& cfg) {
    Outcome out;
    if (cfg.mode == "tomita") out = run_tomita(cfg);
    else if (cfg.mode == "localize") out = run_localize(cfg);
    else if (cfg.mode == "boundary") out = run_boundary(cfg);
    else if (cfg.mode == "pws") out = run_pws(cfg);
    else if (cfg.mode == "hormander") out = run_hormander(cfg);
    else if (cfg.mode == "epstein") out = run_epstein(cfg);
    else if (cfg.mode == "support-estimate") out = run_support(cfg);
    else if (cfg.mode == "cauchy") out = run_cauchy(cfg);
    else throw ConfigError("field 'mode': unknown mode '" + cfg.mode + "'");

    out.report["mode"] = cfg.mode;
    out.report["seed"] = cfg.seed;
    out.report["config"] = cfg.source;
    out.report["conventions"] = conventions::tags(pairing_for(cfg.mode));
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : out.checks)
        checks.push_back({{"name", c.name}, {"value", num(c.value)}, {"threshold", num(c.threshold)},
                          {"relation", c.relation}, {"pass", c.pass}});
    out.report["checks"] = checks;
    out.report["pass"] = out.pass();
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot write " + tmp.string());
        os << content;
        if (!os) throw ConfigError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

int emit(const RunConfig& cfg, const Outcome& out) {
    std::filesystem::create_directories(cfg.out_dir);
    nlohmann::json report = out.report;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    report["metadata"] = {{"timestamp", ts.str()}, {"threads", worker_count()}};
    write_atomic(cfg.out_dir / "report.json", report.dump(2) + "\n");
    for (const auto& c : out.csv) write_atomic(cfg.out_dir / c.name, c.content);
    return out.pass() ? 0 : 2;
}

int run_main(const std::string& mode, const std::filesystem::path& config, const std::optional<std::string>& out,
             const std::optional<std::uint64_t>& seed, const std::optional<double>& tol) {
    try {
        RunConfig cfg = load_config(config);
        if (!cfg.mode.empty() && cfg.mode != mode)
            throw ConfigError("field 'mode': config says '" + cfg.mode + "' but '" + mode + "' was requested");
        if (std::find(modes().begin(), modes().end(), mode) == modes().end())
            throw ConfigError("unknown mode '" + mode + "'");
        cfg.mode = mode;
        if (out) cfg.out_dir = *out;
        if (seed) cfg.seed = *seed;
        if (tol) {
            if (!(*tol > 0.0)) throw ConfigError("--tol must be positive");
            cfg.tol = *tol;
        }
        const Outcome o = run(cfg);
        const int code = emit(cfg, o);
        for (const auto& c : o.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.value << ' ' << c.relation << ' '
                      << c.threshold << '\n';
        std::cout << "report: " << (cfg.out_dir / "report.json").string() << '\n';
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace modloc::cli
