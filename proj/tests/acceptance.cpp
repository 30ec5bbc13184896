// Acceptance runner: one PASS/FAIL line per criterion, details indented above it.
// Usage: modloc_acceptance [--criterion N]

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "modloc/errors.hpp"
#include "modloc/flap.hpp"
#include "modloc/localization.hpp"
#include "oracles.hpp"

using namespace modloc;
namespace fs = std::filesystem;

namespace {

struct Item {
    std::string name;
    double value;
    double threshold;
    std::string relation;
    bool pass;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit;  // seconds
    std::function<void(std::vector<Item>&)> body;
};

Item le(std::string name, double v, double t) { return {std::move(name), v, t, "<=", v <= t}; }
Item gt(std::string name, double v, double t) { return {std::move(name), v, t, ">", v > t}; }
Item flag(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, "==", ok}; }

double max_diff(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) { return (a - b).cwiseAbs().maxCoeff(); }

Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }

GridPtr default_grid() { return std::make_shared<const MassShellGrid>(MassShellGrid::default_1p1()); }

// 1. Geometry identities.
void geometry(std::vector<Item>& out) {
    double metric_err = 0.0, law_err = 0.0, oracle_err = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double t = -5.0 + 0.05 * k;
        const Eigen::Matrix4d b = boost3(t).m;
        metric_err = std::max(metric_err, max_diff(b.transpose() * metric() * b, metric()) / (std::cosh(t) * std::cosh(t)));
        const auto o = oracle::boost(t);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) oracle_err = std::max(oracle_err, std::abs(b(r, c) - o[r][c]) / std::cosh(t));
    }
    for (int k = 0; k < 1000; ++k) {
        const double s = oracle::uniform(-3, 3), t = oracle::uniform(-3, 3);
        const double scale = std::cosh(std::abs(s) + std::abs(t));
        law_err = std::max(law_err, max_diff((boost3(s) * boost3(t)).m, boost3(s + t).m) / scale);
    }
    const Eigen::Matrix4cd ipi = boost3_complex(cplx(0.0, oracle::pi)).m;
    const Eigen::Matrix4cd minus_ups = (-1.0 * rotation_z_pi().m).cast<cplx>();
    const double ipi_err = (ipi - minus_ups).cwiseAbs().maxCoeff();
    const double inv_err = (boost3_complex(cplx(0.0, -oracle::pi)).m - minus_ups).cwiseAbs().maxCoeff();
    out.push_back(le("metric invariance (relative)", metric_err, 1e-12));
    out.push_back(le("boost matches hand matrix", oracle_err, 1e-12));
    out.push_back(le("boost group law (relative)", law_err, 1e-12));
    out.push_back(le("Lambda(i pi) + Upsilon", ipi_err, 1e-12));
    out.push_back(le("Lambda(i pi)^{-1} + Upsilon", inv_err, 1e-12));
}

// 2. Representation on the 1024-point grid.
void representation(std::vector<Item>& out) {
    const GridPtr g = default_grid();
    const auto battery = gaussian_battery(g);
    auto exact_element = [&](int steps, bool flip, const FourVector& a) {
        LorentzTransform l = boost3(steps * g->dtheta());
        if (flip) l = rotation_x_pi() * l;
        return PoincareElement(a, l);
    };
    double unitary = 0.0, law = 0.0, phase = 0.0;
    for (int k = 0; k < 10; ++k) {
        const auto x = exact_element(static_cast<int>(oracle::uniform(-30, 30)), k % 2 == 1,
                                     {oracle::uniform(-2, 2), 0.0, 0.0, oracle::uniform(-2, 2)});
        const auto y = exact_element(static_cast<int>(oracle::uniform(-30, 30)), k % 3 == 0,
                                     {oracle::uniform(-2, 2), 0.0, 0.0, oracle::uniform(-2, 2)});
        const WaveFunction& a = battery[k % battery.size()];
        const WaveFunction& b = battery[(k + 1) % battery.size()];
        const auto ux = [&](const WaveFunction& f) { return apply_poincare(x, f, ResamplePolicy::exact_only); };
        unitary = std::max(unitary, std::abs(inner_product(ux(a), ux(b)).value - inner_product(a, b).value));
        const WaveFunction lhs = ux(apply_poincare(y, a, ResamplePolicy::exact_only));
        const WaveFunction rhs = apply_poincare(poincare_compose(x, y), a, ResamplePolicy::exact_only);
        law = std::max(law, relative_distance(lhs, rhs));

        const FourVector t(oracle::uniform(-3, 3), 0.0, 0.0, oracle::uniform(-3, 3));
        const WaveFunction tr = apply_translation(t, a);
        for (int j = 0; j < g->n_theta(); ++j) {
            const auto p = oracle::shell(g->mass(), g->theta(j), 0.0, 0.0);
            const cplx expect = oracle::translation_phase(p, {t[0], t[1], t[2], t[3]}) * a.at(j);
            phase = std::max(phase, std::abs(tr.at(j) - expect));
        }
    }
    out.push_back(le("unitarity |<Ua,Ub> - <a,b>|", unitary, 1e-10));
    out.push_back(le("representation law", law, 1e-10));
    out.push_back(le("translation phase", phase, 1e-10));
}

// 3. Modular objects of the standard wedge.
void modular(std::vector<Item>& out) {
    const GridPtr g = default_grid();
    const PoincareElement frame = PoincareElement::identity();
    const auto battery = gaussian_battery(g, frame);
    double agreement = 0.0;
    for (const auto& phi : battery)
        for (cplx tau : {cplx(0.0, oracle::pi), cplx(0.0, -oracle::pi), cplx(0.4, oracle::pi / 2)})
            agreement = std::max(agreement, backend_agreement(phi, frame, tau));
    out.push_back(le("backend agreement over " + std::to_string(battery.size()) + " gaussians", agreement, 1e-6));
    for (Sign s : {Sign::plus, Sign::minus}) {
        const ModularReport rep = tomita_check(frame, battery, s);
        for (const auto& r : rep.relations) {
            if (r.name == "s^2 = 1" || r.name == "j^2 = 1" || r.name.rfind("j delta", 0) == 0)
                out.push_back(le(std::string("[") + to_string(s) + "] " + r.name, r.residual, 1e-8));
        }
    }
    bool raised = false;
    try {
        continue_boost(white_noise(g, 1), frame, cplx(0.0, oracle::pi), Backend::spectral);
    } catch (const NotInDomain&) {
        raised = true;
    }
    out.push_back(flag("white noise raises NotInDomain", raised));
}

// 4. Localization in a slab and the real-subspace structure.
void localization(std::vector<Item>& out) {
    const GridPtr g = default_grid();
    const WedgeFamily slab = slab_family(2.0);
    const auto battery = gaussian_battery(g);
    const LocalizationResult lr = localize(slab, Sign::plus, battery[0], 1e-6, 200);
    double worst = 0.0;
    for (double r : lr.residuals) worst = std::max(worst, r);
    out.push_back(le("slab per-wedge residual after " + std::to_string(lr.iterations) + " cycles", worst, 1e-6));

    const PoincareElement std_frame = PoincareElement::identity();
    const WedgeFamily single = make_wedge_family({std_frame});
    const WaveFunction m1 = battery[0] + s_op(std_frame, Sign::plus, battery[0]);
    const WaveFunction m2 = battery[1] + s_op(std_frame, Sign::plus, battery[1]);
    out.push_back(le("real combination is a member",
                     membership_test(single, Sign::plus, 0.7 * m1 + (-1.3) * m2, 1e-8).residuals[0], 1e-8));
    out.push_back(gt("i-multiple is rejected", membership_test(single, Sign::plus, cplx(0, 1) * m1, 1e-8).residuals[0], 1e-8));

    const auto pts = theta_window(*g, 4.0);
    double member_res = 0.0, control_res = std::numeric_limits<double>::infinity(), fact = 0.0;
    for (const auto& frame : {std_frame, PoincareElement::translation(FourVector(0, 0, 0, 1))}) {
        const auto b = gaussian_battery(g, frame);
        const WaveFunction m = b[0] + s_op(frame, Sign::plus, b[0]);
        member_res = std::max(member_res, boundary_condition_check(m, frame, Sign::plus, pts).max_residual);
        control_res = std::min(control_res,
                               boundary_condition_check(cplx(0, 1) * m, frame, Sign::plus, pts).max_residual);
        fact = std::max(fact, factorization_residual(m, frame, {{0.0, 0.5}, {0.2, 1.0}, {0.0, oracle::pi}},
                                                     theta_window(*g, 3.0)));
    }
    out.push_back(le("boundary condition, members", member_res, 1e-6));
    out.push_back(gt("boundary condition, i-multiple control", control_res, 1e-2));
    out.push_back(le("factorization", fact, 1e-8));
}

// 5. Paley-Wiener-Schwartz bound.
void pws(std::vector<Item>& out) {
    const BoundReport point = pws_check(point_mass(v1(0.7)), default_tube_grid(1));
    const double min_ratio = point.extra.value("min_ratio", 0.0);
    out.push_back(le("point mass max |ratio - 1|", std::max(std::abs(point.c - 1.0), std::abs(min_ratio - 1.0)), 1e-12));
    const BoundReport good = pws_check(interval_indicator(-1, 1), default_tube_grid(1));
    out.push_back(flag("interval passes with K = [-1, 1]", good.pass));
    PwsOptions small;
    small.k = box_region(v1(-0.5), v1(0.5));
    const BoundReport bad = pws_check(interval_indicator(-1, 1), default_tube_grid(1), small);
    out.push_back(flag("interval fails with K = [-0.5, 0.5]", !bad.pass));
    out.push_back(gt("ratio up to r = 50 with K = [-0.5, 0.5]", bad.c, 1e3));
}

// 6. Temperedness region from tail rates.
void hormander(std::vector<Item>& out) {
    auto endpoints = [](const PolyRegion& r) {
        double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
        for (const auto& h : r.halfspaces()) {
            if (h.n(0) > 0) hi = std::min(hi, h.c / h.n(0));
            if (h.n(0) < 0) lo = std::max(lo, h.c / h.n(0));
        }
        return std::pair{lo, hi};
    };
    const auto one = distribution_from_json(nlohmann::json::parse(
        R"({"n": 1, "cells": [{"lo": [0], "hi": ["inf"], "density": "exp", "rate": [-1]}]})"));
    const auto two = distribution_from_json(nlohmann::json::parse(
        R"({"n": 1, "cells": [{"lo": [0], "hi": ["inf"], "density": "exp", "rate": [-1]},
                              {"lo": ["-inf"], "hi": [0], "density": "exp", "rate": [1]}]})"));
    const auto [lo1, hi1] = endpoints(hormander_cone_estimate(one));
    const auto [lo2, hi2] = endpoints(hormander_cone_estimate(two));
    out.push_back(flag("e^{-x} 1_{x>=0}: lower end open", std::isinf(lo1) && lo1 < 0));
    out.push_back(le("e^{-x} 1_{x>=0}: |upper - 1|", std::abs(hi1 - 1.0), 1e-9));
    out.push_back(le("e^{-|x|}: |lower + 1|", std::abs(lo2 + 1.0), 1e-9));
    out.push_back(le("e^{-|x|}: |upper - 1|", std::abs(hi2 - 1.0), 1e-9));
}

// 7. Support recovered from growth.
void support(std::vector<Item>& out) {
    const std::vector<Eigen::VectorXd> dirs{v1(1.0), v1(-1.0)};
    const auto radii = geometric_radii(2.0, 50.0, 12);
    const auto interval = interval_indicator(-1, 1);
    const SupportEstimate si =
        support_from_growth([&](const ComplexVector& z) { return fl_transform(interval, z); }, dirs, radii);
    double rel = 0.0;
    for (const auto& [eta, h] : si.h) rel = std::max(rel, std::abs(h - oracle::interval_support(-1, 1, eta(0))));
    out.push_back(le("interval [-1, 1] relative error", rel, 1e-2));
    const auto point = point_mass(v1(0.7));
    const SupportEstimate sp =
        support_from_growth([&](const ComplexVector& z) { return fl_transform(point, z); }, dirs, radii);
    double err = 0.0;
    for (const auto& [eta, h] : sp.h) err = std::max(err, std::abs(h - 0.7 * eta(0)));
    out.push_back(le("point {0.7} absolute error", err, 1e-6));
}

// 8. Tube bounds and Cauchy reconstruction.
void epstein(std::vector<Item>& out) {
    const Cone upper = nonnegative_orthant(1);
    const std::vector<Eigen::VectorXd> m{v1(0.5), v1(0.75), v1(1.0), v1(1.5), v1(2.0)};
    const BoundReport inv = epstein_bound_check([](const ComplexVector& z) { return 1.0 / z(0); }, upper, m, XiGrid{}, 1);
    out.push_back(flag("1/zeta passes", inv.pass));
    out.push_back(le("1/zeta N_est", inv.n_est, 0.1));
    out.push_back(flag("1/zeta boundary probe monotone", inv.extra.value("probe_monotone", false)));
    const BoundReport ctl = epstein_bound_check(
        [](const ComplexVector& z) { return std::exp(cplx(0, -1) * z(0) * z(0)); }, upper, m, XiGrid{}, 1);
    out.push_back(flag("e^{-i zeta^2} control fails", !ctl.pass));

    const TubeFunction f = [](const ComplexVector& z) { return oracle::shifted_inverse(z(0), cplx(0, 2)); };
    ComplexVector target(1);
    target(0) = cplx(0.3, 1.0);
    const cplx direct = f(target);
    const CauchyResult r = cauchy_tube_reconstruct(f, v1(0.5), v1(1.5), target);
    out.push_back(le("Cauchy reconstruction vs direct", std::abs(r.value - direct), 1e-4));
    CauchyOptions coarse;
    coarse.n_points = 81;
    coarse.throw_on_insufficient = false;  // compared against the finer rule below
    CauchyOptions fine;
    fine.n_points = 161;
    const double e1 = std::abs(cauchy_tube_reconstruct(f, v1(0.5), v1(1.5), target, coarse).value - direct);
    const double e2 = std::abs(cauchy_tube_reconstruct(f, v1(0.5), v1(1.5), target, fine).value - direct);
    out.push_back(le("error after doubling / error before", e2 / e1, 0.5));
}

// 9. Byte-identical reports from the command line pipeline.
void reproducibility(std::vector<Item>& out) {
    const fs::path configs = MODLOC_CONFIG_DIR;
    auto strip_timestamp = [](const fs::path& p) {
        std::ifstream is(p);
        std::string line, text;
        while (std::getline(is, line))
            if (line.find("\"timestamp\"") == std::string::npos) text += line + '\n';
        return text;
    };
    for (const auto& [mode, file] : std::vector<std::pair<std::string, std::string>>{
             {"tomita", "tomita_standard.json"}, {"pws", "pws_interval.json"}, {"epstein", "epstein_inverse.json"}}) {
        std::vector<std::string> reports;
        for (const char* tag : {"a", "b"}) {
            const fs::path dir = fs::temp_directory_path() / ("modloc_acceptance_" + mode + "_" + tag);
            fs::remove_all(dir);
            std::ostringstream sink;
            auto* old = std::cout.rdbuf(sink.rdbuf());
            cli::run_main(mode, configs / file, dir.string(), 11u, std::nullopt);
            std::cout.rdbuf(old);
            reports.push_back(strip_timestamp(dir / "report.json"));
        }
        out.push_back(flag(mode + " reports identical", !reports[0].empty() && reports[0] == reports[1]));
    }
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> c{
        {1, "geometry", 1.0, geometry},
        {2, "representation", 5.0, representation},
        {3, "modular", 30.0, modular},
        {4, "localization", 120.0, localization},
        {5, "paley-wiener-schwartz", 10.0, pws},
        {6, "hormander", 1.0, hormander},
        {7, "support reconstruction", 10.0, support},
        {8, "epstein and cauchy", 60.0, epstein},
        {9, "reproducibility", 180.0, reproducibility},
    };
    return c;
}

bool run_one(const Criterion& c) {
    std::vector<Item> items;
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
        c.body(items);
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    items.push_back(le("runtime [s]", secs, c.time_limit));
    bool ok = error.empty();
    for (const auto& it : items) {
        ok = ok && it.pass;
        std::cout << "    " << (it.pass ? "ok  " : "bad ") << it.name << ": " << std::setprecision(6) << it.value
                  << ' ' << it.relation << ' ' << it.threshold << '\n';
    }
    if (!error.empty()) std::cout << "    error: " << error << '\n';
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << ") " << std::fixed
              << std::setprecision(2) << secs << " s" << std::defaultfloat << std::endl;
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: modloc_acceptance [--criterion N]\n";
            return 1;
        }
    }
    if (only < 0 || only > static_cast<int>(criteria().size())) {
        std::cerr << "criterion must be 1.." << criteria().size() << '\n';
        return 1;
    }
    bool all = true;
    for (const auto& c : criteria())
        if (only == 0 || c.id == only) all = run_one(c) && all;
    return all ? 0 : 1;
}
