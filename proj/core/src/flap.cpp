#include "modloc/flap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "modloc/errors.hpp"
#include "modloc/parallel.hpp"
#include "numeric.hpp"

namespace modloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeriesCut = 1e-4;
constexpr cplx kI{0.0, 1.0};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double rate_of(const Cell& c, int j) {
    return c.density == Density::exponential ? c.rate(j) : 0.0;
}

// int_a^b e^{s x} dx, either bound possibly infinite.
cplx axis_integral(cplx s, double a, double b) {
    const bool a_inf = std::isinf(a), b_inf = std::isinf(b);
    if (a_inf && b_inf) throw NotInDomain("cell unbounded in both directions along one axis");
    if (b_inf) {
        if (!(s.real() < 0.0)) throw NotInDomain("exponential tail toward +inf is not integrable here");
        return -std::exp(s * a) / s;
    }
    if (a_inf) {
        if (!(s.real() > 0.0)) throw NotInDomain("exponential tail toward -inf is not integrable here");
        return std::exp(s * b) / s;
    }
    if (std::abs(s) < kSeriesCut) {
        // sum_{k>=1} s^{k-1} (b^k - a^k) / k!
        cplx sum = 0.0, sp = 1.0;
        double ak = 1.0, bk = 1.0, fact = 1.0;
        for (int k = 1; k <= 6; ++k) {
            ak *= a;
            bk *= b;
            fact *= k;
            sum += sp * (bk - ak) / fact;
            sp *= s;
        }
        return sum;
    }
    return (std::exp(s * b) - std::exp(s * a)) / s;
}

double zeta_abs(const ComplexVector& z, ZetaNorm norm) {
    if (norm == ZetaNorm::euclidean) return z.norm();
    double m = 0.0;
    for (Eigen::Index j = 0; j < z.size(); ++j) m = std::max(m, std::abs(z(j)));
    return m;
}

std::string norm_name(ZetaNorm n) { return n == ZetaNorm::max ? "max" : "euclidean"; }

double read_bound(const nlohmann::json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ConfigError(where + ": expected a number, \"inf\" or \"-inf\"");
}

nlohmann::json write_bound(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

Eigen::VectorXd read_vector(const nlohmann::json& v, int n, const std::string& where, bool bounds = false) {
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        throw ConfigError(where + ": expected an array of length " + std::to_string(n));
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        if (bounds) {
            out(i) = read_bound(v[i], at);
        } else {
            if (!v[i].is_number()) throw ConfigError(at + ": expected a number");
            out(i) = v[i].get<double>();
        }
    }
    return out;
}

cplx read_weight(const nlohmann::json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(where + ": expected a number or [re, im]");
}

// Half-spaces of the smallest box containing all atoms and cells.
PolyRegion bounding_hull(const SampledDistribution& u) {
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(u.n, kInf), hi = Eigen::VectorXd::Constant(u.n, -kInf);
    for (const auto& a : u.atoms) {
        lo = lo.cwiseMin(a.x);
        hi = hi.cwiseMax(a.x);
    }
    for (const auto& c : u.cells) {
        lo = lo.cwiseMin(c.lo);
        hi = hi.cwiseMax(c.hi);
    }
    std::vector<HalfSpace> h;
    for (int i = 0; i < u.n; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(u.n);
        e(i) = 1.0;
        if (std::isfinite(hi(i))) h.push_back({e, hi(i)});
        if (std::isfinite(lo(i))) h.push_back({-e, -lo(i)});
    }
    return PolyRegion(u.n, std::move(h));
}

std::vector<Eigen::VectorXd> tensor_grid(int n, double xi_max, int n_xi) {
    std::vector<double> axis(n_xi);
    for (int i = 0; i < n_xi; ++i)
        axis[i] = n_xi == 1 ? 0.0 : -xi_max + 2.0 * xi_max * i / (n_xi - 1);
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(n_xi);
    std::vector<Eigen::VectorXd> out;
    out.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        Eigen::VectorXd x(n);
        std::size_t rem = k;
        for (int d = 0; d < n; ++d) {
            x(d) = axis[rem % n_xi];
            rem /= n_xi;
        }
        out.push_back(std::move(x));
    }
    return out;
}

struct RatioScan {
    double c = 0.0;
    double log_c = -kInf;
    std::vector<double> at;
    double min_ratio = kInf;
    std::size_t samples = 0, skipped = 0;
    std::vector<std::pair<double, double>> envelope;  // (log(1+|zeta|), log(|f| e^{-H}))
};

// Worst ratio over the tensor product of xi and eta points. log_weight(eta)
// is subtracted from log|f|.
RatioScan scan_ratio(const TubeFunction& f, const std::vector<Eigen::VectorXd>& xi,
                     const std::vector<Eigen::VectorXd>& eta, const std::vector<double>& log_weight, double n_exp,
                     ZetaNorm norm) {
    const std::size_t ne = eta.size();
    const std::size_t total = xi.size() * ne;
    std::vector<double> log_ratio(total), log_size(total), log_mod(total);
    std::vector<char> bad(total, 0);
    parallel_for(total, [&](std::size_t k) {
        const Eigen::VectorXd& x = xi[k / ne];
        const std::size_t e = k % ne;
        const ComplexVector z = x.cast<cplx>() + kI * eta[e].cast<cplx>();
        const cplx v = f(z);
        const double za = zeta_abs(z, norm);
        log_size[k] = std::log1p(za);
        if (!finite(v)) {
            bad[k] = 1;
            log_mod[k] = kInf;
            log_ratio[k] = kInf;
            return;
        }
        const double m = std::abs(v);
        log_mod[k] = (m > 0.0 ? std::log(m) : -kInf) - log_weight[e];
        log_ratio[k] = log_mod[k] - n_exp * log_size[k];
    });
    RatioScan s;
    s.samples = total;
    for (std::size_t k = 0; k < total; ++k) {
        if (log_ratio[k] > s.log_c || s.at.empty()) {
            if (log_ratio[k] > s.log_c) s.log_c = log_ratio[k];
            const Eigen::VectorXd& x = xi[k / ne];
            const Eigen::VectorXd& y = eta[k % ne];
            s.at.clear();
            for (Eigen::Index d = 0; d < x.size(); ++d) {
                s.at.push_back(x(d));
                s.at.push_back(y(d));
            }
        }
        s.min_ratio = std::min(s.min_ratio, std::exp(log_ratio[k]));
        if (bad[k]) {
            ++s.skipped;
            continue;
        }
        if (std::isfinite(log_mod[k])) s.envelope.emplace_back(log_size[k], log_mod[k]);
    }
    s.c = std::exp(s.log_c);
    return s;
}

double trapezoid_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

}  // namespace

bool Cell::bounded() const { return lo.allFinite() && hi.allFinite(); }

bool SampledDistribution::compact() const {
    return std::all_of(cells.begin(), cells.end(), [](const Cell& c) { return c.bounded(); });
}

void SampledDistribution::validate() const {
    if (n != 1 && n != 2 && n != 4) throw ConfigError("n: dimension must be 1, 2 or 4");
    if (hull.dim() != n) throw ConfigError("hull: dimension differs from n");
    int max_deriv = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Atom& a = atoms[i];
        const std::string at = "atoms[" + std::to_string(i) + "]";
        if (a.x.size() != n) throw ConfigError(at + ".x: wrong length");
        if (!hull.contains(a.x)) throw ConfigError(at + ": outside the support hull");
        if (!a.deriv.empty() && static_cast<int>(a.deriv.size()) != n)
            throw ConfigError(at + ".deriv: wrong length");
        int order = 0;
        for (int d : a.deriv) {
            if (d < 0) throw ConfigError(at + ".deriv: negative entry");
            order += d;
        }
        max_deriv = std::max(max_deriv, order);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Cell& c = cells[i];
        const std::string at = "cells[" + std::to_string(i) + "]";
        if (c.lo.size() != n || c.hi.size() != n) throw ConfigError(at + ": bounds have the wrong length");
        if ((c.lo.array() > c.hi.array()).any()) throw ConfigError(at + ": lo exceeds hi");
        if (c.density == Density::exponential && c.rate.size() != n) throw ConfigError(at + ".rate: wrong length");
        // Finite corners must lie in the hull; infinite sides need a recession direction.
        Eigen::VectorXd corner = c.lo;
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            if (std::isinf(c.hi(j))) {
                e(j) = 1.0;
                if (std::isfinite(support_function(hull, e))) throw ConfigError(at + ": unbounded beyond the hull");
            }
            if (std::isinf(c.lo(j))) {
                e(j) = -1.0;
                if (std::isfinite(support_function(hull, e))) throw ConfigError(at + ": unbounded beyond the hull");
            }
        }
        for (int mask = 0; mask < (1 << n); ++mask) {
            bool skip = false;
            for (int j = 0; j < n; ++j) {
                corner(j) = (mask >> j) & 1 ? c.hi(j) : c.lo(j);
                if (std::isinf(corner(j))) skip = true;
            }
            if (!skip && !hull.contains(corner)) throw ConfigError(at + ": corner outside the support hull");
        }
    }
    if (order < max_deriv) throw ConfigError("order: smaller than the highest derivative atom");
}

nlohmann::json SampledDistribution::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["order"] = order;
    j["atoms"] = nlohmann::json::array();
    for (const auto& a : atoms) {
        nlohmann::json e;
        e["x"] = std::vector<double>(a.x.data(), a.x.data() + a.x.size());
        e["w"] = {a.w.real(), a.w.imag()};
        if (!a.deriv.empty()) e["deriv"] = a.deriv;
        j["atoms"].push_back(e);
    }
    j["cells"] = nlohmann::json::array();
    for (const auto& c : cells) {
        nlohmann::json e;
        e["lo"] = nlohmann::json::array();
        e["hi"] = nlohmann::json::array();
        for (int i = 0; i < n; ++i) {
            e["lo"].push_back(write_bound(c.lo(i)));
            e["hi"].push_back(write_bound(c.hi(i)));
        }
        e["density"] = c.density == Density::constant ? "const" : c.density == Density::exponential ? "exp" : c.density_tag;
        if (c.density == Density::exponential) e["rate"] = std::vector<double>(c.rate.data(), c.rate.data() + c.rate.size());
        e["w"] = {c.w.real(), c.w.imag()};
        j["cells"].push_back(e);
    }
    j["hull"] = region_to_json(hull);
    return j;
}

SampledDistribution point_mass(const Eigen::VectorXd& x, cplx w) {
    SampledDistribution u;
    u.n = static_cast<int>(x.size());
    u.atoms.push_back({x, w, {}});
    u.hull = point_region(x);
    return u;
}

SampledDistribution interval_indicator(double a, double b) {
    SampledDistribution u;
    u.n = 1;
    Cell c;
    c.lo = Eigen::VectorXd::Constant(1, a);
    c.hi = Eigen::VectorXd::Constant(1, b);
    u.cells.push_back(c);
    u.hull = box_region(c.lo, c.hi);
    return u;
}

SampledDistribution distribution_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("distribution: expected an object");
    SampledDistribution u;
    if (!j.contains("n") || !j["n"].is_number_integer()) throw ConfigError("n: expected an integer");
    u.n = j["n"].get<int>();
    if (u.n != 1 && u.n != 2 && u.n != 4) throw ConfigError("n: dimension must be 1, 2 or 4");
    if (j.contains("atoms")) {
        if (!j["atoms"].is_array()) throw ConfigError("atoms: expected an array");
        for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
            const auto& e = j["atoms"][i];
            const std::string at = "atoms[" + std::to_string(i) + "]";
            if (!e.is_object() || !e.contains("x")) throw ConfigError(at + ": expected an object with x");
            Atom a;
            a.x = read_vector(e["x"], u.n, at + ".x");
            if (e.contains("w")) a.w = read_weight(e["w"], at + ".w");
            if (e.contains("deriv")) {
                if (!e["deriv"].is_array()) throw ConfigError(at + ".deriv: expected an array");
                for (const auto& d : e["deriv"]) {
                    if (!d.is_number_integer()) throw ConfigError(at + ".deriv: expected integers");
                    a.deriv.push_back(d.get<int>());
                }
            }
            u.atoms.push_back(std::move(a));
        }
    }
    if (j.contains("cells")) {
        if (!j["cells"].is_array()) throw ConfigError("cells: expected an array");
        for (std::size_t i = 0; i < j["cells"].size(); ++i) {
            const auto& e = j["cells"][i];
            const std::string at = "cells[" + std::to_string(i) + "]";
            if (!e.is_object() || !e.contains("lo") || !e.contains("hi"))
                throw ConfigError(at + ": expected an object with lo and hi");
            Cell c;
            c.lo = read_vector(e["lo"], u.n, at + ".lo", true);
            c.hi = read_vector(e["hi"], u.n, at + ".hi", true);
            const std::string tag = e.value("density", std::string("const"));
            if (tag == "const") {
                c.density = Density::constant;
            } else if (tag == "exp") {
                c.density = Density::exponential;
                if (!e.contains("rate")) throw ConfigError(at + ".rate: required for exp density");
                c.rate = read_vector(e["rate"], u.n, at + ".rate");
            } else {
                c.density = Density::opaque;
                c.density_tag = tag;
            }
            if (e.contains("w")) c.w = read_weight(e["w"], at + ".w");
            u.cells.push_back(std::move(c));
        }
    }
    if (j.contains("order")) {
        if (!j["order"].is_number_integer() || j["order"].get<int>() < 0)
            throw ConfigError("order: expected a nonnegative integer");
        u.order = j["order"].get<int>();
    }
    if (j.contains("hull")) {
        try {
            u.hull = region_from_json(j["hull"]);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ConfigError(std::string("hull: ") + ex.what());
        }
    } else {
        u.hull = bounding_hull(u);
    }
    u.validate();
    return u;
}

cplx fl_transform(const SampledDistribution& u, const ComplexVector& zeta) {
    if (zeta.size() != u.n) throw Error("fl_transform: zeta has the wrong dimension");
    cplx total = 0.0;
    for (const auto& a : u.atoms) {
        cplx phase = 0.0;
        for (int j = 0; j < u.n; ++j) phase += a.x(j) * zeta(j);
        cplx term = a.w * std::exp(-kI * phase);
        for (std::size_t j = 0; j < a.deriv.size(); ++j)
            for (int p = 0; p < a.deriv[j]; ++p) term *= kI * zeta(static_cast<Eigen::Index>(j));
        total += term;
    }
    for (const auto& c : u.cells) {
        if (c.density == Density::opaque) throw UnsupportedDensity("no closed form for density '" + c.density_tag + "'");
        cplx term = c.w;
        for (int j = 0; j < u.n; ++j) term *= axis_integral(rate_of(c, j) - kI * zeta(j), c.lo(j), c.hi(j));
        total += term;
    }
    return total;
}

std::vector<Eigen::VectorXd> TubeGrid::xi_points() const { return tensor_grid(n, xi_max, n_xi); }

std::vector<Eigen::VectorXd> TubeGrid::eta_points() const {
    std::vector<Eigen::VectorXd> out;
    bool zero_done = false;
    for (double r : radii) {
        if (r == 0.0) {
            if (!zero_done) out.push_back(Eigen::VectorXd::Zero(n));
            zero_done = true;
            continue;
        }
        for (const auto& d : directions) out.push_back(r * d);
    }
    return out;
}

TubeGrid TubeGrid::doubled() const {
    TubeGrid g = *this;
    g.xi_max = 2.0 * xi_max;
    g.n_xi = 4 * n_xi - 3;
    std::set<double> r(radii.begin(), radii.end());
    std::vector<double> sorted(r.begin(), r.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) r.insert(0.5 * (sorted[i] + sorted[i + 1]));
    for (double v : sorted) r.insert(2.0 * v);
    g.radii.assign(r.begin(), r.end());
    return g;
}

void TubeGrid::validate() const {
    for (const auto& d : directions)
        if (d.size() != n) throw ConfigError("tube grid: direction has the wrong dimension");
    if (n_xi < 1 || xi_max < 0.0) throw ConfigError("tube grid: bad xi range");
    if (!cone) return;
    for (const auto& e : eta_points())
        if (e.norm() > 0.0 && !cone_contains(*cone, e)) throw ConfigError("tube grid: eta sample outside the cone");
}

nlohmann::json TubeGrid::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["xi_max"] = xi_max;
    j["n_xi"] = n_xi;
    j["radii"] = radii;
    j["directions"] = nlohmann::json::array();
    for (const auto& d : directions) j["directions"].push_back(std::vector<double>(d.data(), d.data() + d.size()));
    return j;
}

std::vector<double> geometric_radii(double r_min, double r_max, int count) {
    std::vector<double> r(count);
    for (int i = 0; i < count; ++i)
        r[i] = count == 1 ? r_max : r_min * std::pow(r_max / r_min, static_cast<double>(i) / (count - 1));
    return r;
}

TubeGrid default_tube_grid(int n, double r_max, int n_radii) {
    TubeGrid g;
    g.n = n;
    g.n_xi = n == 1 ? 41 : n == 2 ? 21 : 7;
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(j) = 1.0;
        g.directions.push_back(e);
        g.directions.push_back(-e);
    }
    g.radii = {0.0};
    for (double r : geometric_radii(2.0, r_max, n_radii)) g.radii.push_back(r);
    return g;
}

BoundReport pws_check(const SampledDistribution& u, const TubeGrid& grid, const PwsOptions& opts) {
    if (!u.compact()) throw Error("pws_check needs a compactly supported distribution");
    if (grid.n != u.n) throw Error("pws_check: grid dimension differs from u");
    grid.validate();
    const PolyRegion& k = opts.k ? *opts.k : u.hull;
    if (k.dim() != u.n) throw Error("pws_check: hull dimension differs from u");
    const TubeFunction f = [&u](const ComplexVector& z) { return fl_transform(u, z); };

    auto run = [&](const TubeGrid& g) {
        const auto eta = g.eta_points();
        std::vector<double> h(eta.size());
        for (std::size_t i = 0; i < eta.size(); ++i) h[i] = support_function(k, eta[i]);
        return scan_ratio(f, g.xi_points(), eta, h, u.order, opts.norm);
    };
    const RatioScan base = run(grid);
    const TubeGrid big = grid.doubled();
    const RatioScan dbl = run(big);

    BoundReport r;
    r.check = "pws";
    r.n_declared = u.order;
    r.n_used = u.order;
    r.n_est = upper_envelope_slope(base.envelope);
    r.c = base.c;
    r.c_doubled = dbl.c;
    r.max_ratio_at = base.at;
    r.samples = base.samples + dbl.samples;
    r.skipped = base.skipped + dbl.skipped;
    r.pass = base.skipped == 0 && dbl.skipped == 0 && bound_stable(r.c, r.c_doubled, opts.stability);
    if (opts.c_declared) r.pass = r.pass && r.c <= *opts.c_declared;
    r.grid = grid.to_json();
    r.grid["doubled"] = big.to_json();
    r.grid["zeta_norm"] = norm_name(opts.norm);
    r.grid["support_pairing"] = "euclidean";
    r.extra["K"] = region_to_json(k);
    r.extra["min_ratio"] = std::isfinite(base.min_ratio) ? nlohmann::json(base.min_ratio) : nlohmann::json();
    r.extra["log_C"] = std::isfinite(base.log_c) ? nlohmann::json(base.log_c) : nlohmann::json();
    if (opts.c_declared) r.extra["C_declared"] = *opts.c_declared;
    return r;
}

bool is_tempered(const SampledDistribution& u, const Eigen::VectorXd& eta) {
    return hormander_cone_estimate(u).contains(eta, 0.0);
}

PolyRegion hormander_cone_estimate(const SampledDistribution& u) {
    std::vector<HalfSpace> h;
    for (std::size_t i = 0; i < u.cells.size(); ++i) {
        const Cell& c = u.cells[i];
        if (c.bounded()) continue;
        if (c.density == Density::opaque)
            throw UnsupportedDensity("cells[" + std::to_string(i) + "]: unbounded tail with density '" + c.density_tag + "'");
        for (int j = 0; j < u.n; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(u.n);
            // e^{(rate_j + eta_j) x_j} must not grow along the infinite side.
            if (std::isinf(c.hi(j))) {
                e(j) = 1.0;
                h.push_back({e, -rate_of(c, j)});
            }
            if (std::isinf(c.lo(j))) {
                e(j) = -1.0;
                h.push_back({e, rate_of(c, j)});
            }
        }
    }
    // Keep the tightest bound per normal.
    std::vector<HalfSpace> tight;
    for (const auto& s : h) {
        auto it = std::find_if(tight.begin(), tight.end(), [&](const HalfSpace& t) { return (t.n - s.n).norm() == 0.0; });
        if (it == tight.end())
            tight.push_back(s);
        else
            it->c = std::min(it->c, s.c);
    }
    return PolyRegion(u.n, std::move(tight));
}

nlohmann::json SupportEstimate::to_json() const {
    nlohmann::json j;
    j["samples"] = nlohmann::json::array();
    for (std::size_t i = 0; i < h.size(); ++i) {
        nlohmann::json e;
        e["eta"] = std::vector<double>(h[i].first.data(), h[i].first.data() + h[i].first.size());
        e["H"] = h[i].second;
        e["log_coefficient"] = log_coefficient[i];
        j["samples"].push_back(e);
    }
    j["region"] = region_to_json(region);
    return j;
}

SupportEstimate support_from_growth(const TubeFunction& f, const std::vector<Eigen::VectorXd>& directions,
                                    const std::vector<double>& radii) {
    std::vector<double> r_sorted(radii);
    std::sort(r_sorted.begin(), r_sorted.end());
    r_sorted.erase(std::remove_if(r_sorted.begin(), r_sorted.end(), [](double r) { return !(r > 0.0); }), r_sorted.end());
    const std::vector<double> top(r_sorted.begin() + static_cast<std::ptrdiff_t>(r_sorted.size() / 2), r_sorted.end());

    SupportEstimate out;
    bool any_nonzero = false;
    for (const auto& eta : directions) {
        std::vector<double> rs, ys;
        for (double r : r_sorted) {
            const cplx v = f((kI * r) * eta.cast<cplx>());
            const double m = std::abs(v);
            if (finite(v) && m >= 1e-300) any_nonzero = true;
        }
        for (double r : top) {
            const cplx v = f((kI * r) * eta.cast<cplx>());
            const double m = std::abs(v);
            if (!finite(v) || m < 1e-300) continue;
            rs.push_back(r);
            ys.push_back(std::log(m));
        }
        if (rs.size() < 2) continue;
        const int cols = rs.size() >= 3 ? 3 : 2;
        Eigen::MatrixXd a(rs.size(), cols);
        Eigen::VectorXd y(rs.size());
        for (std::size_t i = 0; i < rs.size(); ++i) {
            a(i, 0) = rs[i];
            a(i, cols - 1) = 1.0;
            if (cols == 3) a(i, 1) = std::log(rs[i]);
            y(i) = ys[i];
        }
        const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
        out.h.emplace_back(eta, coef(0));
        out.log_coefficient.push_back(cols == 3 ? coef(1) : 0.0);
    }
    if (!any_nonzero) throw ZeroFunction("|f| below 1e-300 at every probe");
    out.region = reconstruct_from_support(out.h);
    if (!out.h.empty() && out.region.dim() != static_cast<int>(directions.front().size()))
        out.region = whole_space(static_cast<int>(directions.front().size()));
    return out;
}

nlohmann::json ProbeResult::to_json() const {
    nlohmann::json j;
    j["test_function"] = test_function;
    j["eta"] = eta;
    nlohmann::json inc = nlohmann::json::array();
    for (double d : increments) inc.push_back(std::isfinite(d) ? nlohmann::json(d) : nlohmann::json());
    j["increments"] = inc;
    j["monotone"] = monotone;
    j["edge_decay"] = edge_decay;
    return j;
}

std::vector<ProbeResult> epstein_probe(const TubeFunction& f, double direction, const EpsteinOptions& opts) {
    struct Test {
        const char* name;
        double (*phi)(double);
    };
    static const Test battery[] = {
        {"gaussian", [](double x) { return std::exp(-x * x); }},
        {"sech", [](double x) { return 1.0 / std::cosh(x); }},
        {"exp_sqrt", [](double x) { return std::exp(-std::sqrt(1.0 + x * x)); }},
    };
    const int steps = opts.probe_steps;
    const double eta0 = opts.probe_eta0.value_or(2.0);
    const double eta_min = eta0 / std::ldexp(1.0, steps);
    const double h = eta_min / 8.0;
    const auto n_nodes = static_cast<std::size_t>(std::ceil(2.0 * opts.probe_window / h)) + 1;
    const double step = 2.0 * opts.probe_window / static_cast<double>(n_nodes - 1);
    const std::size_t n_tests = std::size(battery);
    const std::size_t n_eta = static_cast<std::size_t>(steps) + 1;

    std::vector<cplx> integral(n_tests * n_eta);
    std::vector<char> decays(n_tests * n_eta, 1);
    parallel_for(n_tests * n_eta, [&](std::size_t k) {
        const Test& t = battery[k / n_eta];
        const double eta = direction * eta0 / std::ldexp(1.0, static_cast<int>(k % n_eta));
        std::vector<cplx> terms(n_nodes);
        ComplexVector z(1);
        double peak = 0.0;
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const double x = -opts.probe_window + step * static_cast<double>(i);
            z(0) = cplx(x, eta);
            terms[i] = f(z) * t.phi(x) * (trapezoid_weight(static_cast<int>(i), static_cast<int>(n_nodes)) * step);
            if (finite(terms[i])) peak = std::max(peak, std::abs(terms[i]));
        }
        const double edge = std::max(std::abs(terms.front()), std::abs(terms.back())) / step;
        if (!finite(terms.front()) || !finite(terms.back()) || !(edge <= 1e-8 * std::max(peak / step, 1e-300)))
            decays[k] = 0;
        integral[k] = detail::pairwise_sum(terms);
    });

    std::vector<ProbeResult> out;
    for (std::size_t t = 0; t < n_tests; ++t) {
        ProbeResult p;
        p.test_function = battery[t].name;
        for (std::size_t j = 0; j < n_eta; ++j) {
            p.eta.push_back(direction * eta0 / std::ldexp(1.0, static_cast<int>(j)));
            p.edge_decay = p.edge_decay && decays[t * n_eta + j];
        }
        for (std::size_t j = 0; j + 1 < n_eta; ++j)
            p.increments.push_back(std::abs(integral[t * n_eta + j + 1] - integral[t * n_eta + j]));
        double scale = 1.0;
        for (std::size_t j = 0; j < n_eta; ++j) scale = std::max(scale, std::abs(integral[t * n_eta + j]));
        const double floor = 1e-12 * scale;
        p.monotone = p.edge_decay;
        for (std::size_t j = 0; j + 1 < p.increments.size(); ++j)
            if (!(p.increments[j + 1] < p.increments[j] || p.increments[j + 1] <= floor)) p.monotone = false;
        out.push_back(std::move(p));
    }
    return out;
}

BoundReport epstein_bound_check(const TubeFunction& f, const Cone& gamma, const std::vector<Eigen::VectorXd>& m,
                                const XiGrid& xi, int n, const EpsteinOptions& opts) {
    if (m.empty()) throw ConfigError("epstein: empty compact set M");
    for (const auto& e : m) {
        if (e.size() != n) throw ConfigError("epstein: eta sample has the wrong dimension");
        if (!cone_contains(gamma, e)) throw ConfigError("epstein: M is not contained in the cone");
    }
    const std::vector<double> no_weight(m.size(), 0.0);
    const RatioScan base = scan_ratio(f, tensor_grid(n, xi.xi_max, xi.n_xi), m, no_weight, opts.n_declared, opts.norm);
    const XiGrid big{2.0 * xi.xi_max, 4 * xi.n_xi - 3};
    const RatioScan dbl = scan_ratio(f, tensor_grid(n, big.xi_max, big.n_xi), m, no_weight, opts.n_declared, opts.norm);

    BoundReport r;
    r.check = "epstein";
    r.n_declared = opts.n_declared;
    r.n_used = opts.n_declared;
    r.n_est = upper_envelope_slope(base.envelope);
    r.c = base.c;
    r.c_doubled = dbl.c;
    r.max_ratio_at = base.at;
    r.samples = base.samples + dbl.samples;
    r.skipped = base.skipped + dbl.skipped;
    r.pass = base.skipped == 0 && dbl.skipped == 0 && bound_stable(r.c, r.c_doubled, opts.stability);
    if (opts.c_declared) r.pass = r.pass && r.c <= *opts.c_declared;
    r.grid = {{"n", n},
              {"xi_max", xi.xi_max},
              {"n_xi", xi.n_xi},
              {"doubled", {{"xi_max", big.xi_max}, {"n_xi", big.n_xi}}},
              {"zeta_norm", norm_name(opts.norm)}};
    r.grid["M"] = nlohmann::json::array();
    for (const auto& e : m) r.grid["M"].push_back(std::vector<double>(e.data(), e.data() + e.size()));

    if (opts.boundary_probe && n == 1) {
        // Ray toward the boundary through the first sample of M.
        const double dir = m.front()(0) >= 0.0 ? 1.0 : -1.0;
        EpsteinOptions po = opts;
        if (!po.probe_eta0) {
            double lowest = std::numeric_limits<double>::infinity();
            for (const auto& e : m)
                if (e(0) * dir > 0.0) lowest = std::min(lowest, std::abs(e(0)));
            po.probe_eta0 = std::isfinite(lowest) ? lowest : 2.0;
        }
        const auto probes = epstein_probe(f, dir, po);
        r.extra["probe_eta0"] = *po.probe_eta0;
        bool ok = true;
        r.extra["probe"] = nlohmann::json::array();
        for (const auto& p : probes) {
            ok = ok && p.monotone;
            r.extra["probe"].push_back(p.to_json());
        }
        r.extra["probe_monotone"] = ok;
        r.pass = r.pass && ok;
    } else {
        r.extra["probe"] = nullptr;
    }
    return r;
}

CauchyResult cauchy_tube_reconstruct(const TubeFunction& f, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                     const ComplexVector& zeta, const CauchyOptions& opts) {
    const int n = static_cast<int>(zeta.size());
    if (n != 1 && n != 2) throw Error("cauchy_tube_reconstruct supports n = 1 or 2");
    if (lo.size() != n || hi.size() != n) throw Error("cauchy_tube_reconstruct: line offsets have the wrong dimension");
    for (int j = 0; j < n; ++j) {
        if (!(lo(j) < zeta(j).imag() && zeta(j).imag() < hi(j)))
            throw Error("cauchy_tube_reconstruct: target not strictly between the lines");
        if (lo(j) <= -1.0 && hi(j) >= -1.0) throw SingularityInStrip("kernel pole at -i lies in the strip");
    }
    if (opts.n_points < 5 || opts.n_points % 2 == 0) throw Error("cauchy_tube_reconstruct: n_points must be odd and >= 5");

    const int np = opts.n_points;
    const double h = 2.0 * opts.t_max / (np - 1);
    std::vector<double> x(np), w(np), w2(np);
    for (int i = 0; i < np; ++i) {
        const double t = -opts.t_max + h * i;
        x[i] = std::sinh(t);
        w[i] = trapezoid_weight(i, np) * h * std::cosh(t);
        // Every other node with step 2h.
        w2[i] = i % 2 == 0 ? trapezoid_weight(i / 2, (np + 1) / 2) * 2.0 * h * std::cosh(t) : 0.0;
    }

    // Kernel (x + i theta - zeta)^{-1} (x + i theta + i)^{-k} per axis and line.
    auto kernel = [&](int j, double theta, double xv) {
        const cplx wv(xv, theta);
        return 1.0 / ((wv - zeta(j)) * std::pow(wv + kI, opts.k));
    };

    const std::size_t per_line = n == 1 ? static_cast<std::size_t>(np) : static_cast<std::size_t>(np) * np;
    const int corners = 1 << n;
    std::vector<cplx> fine(per_line * corners), coarse(per_line * corners);
    parallel_for(per_line * corners, [&](std::size_t k) {
        const int corner = static_cast<int>(k / per_line);
        const std::size_t idx = k % per_line;
        ComplexVector z(n);
        cplx kern = 1.0;
        double wf = 1.0, wc = 1.0, sign = 1.0;
        std::size_t rem = idx;
        for (int j = 0; j < n; ++j) {
            const int i = static_cast<int>(rem % np);
            rem /= np;
            const bool upper = (corner >> j) & 1;
            const double theta = upper ? hi(j) : lo(j);
            if (upper) sign = -sign;
            z(j) = cplx(x[i], theta);
            kern *= kernel(j, theta, x[i]);
            wf *= w[i];
            wc *= w2[i];
        }
        const cplx v = sign * f(z) * kern;
        fine[k] = v * wf;
        coarse[k] = v * wc;
    });

    cplx pref = 1.0;
    for (int j = 0; j < n; ++j) pref *= std::pow(zeta(j) + kI, opts.k) / (2.0 * std::numbers::pi * kI);
    CauchyResult res;
    res.value = pref * detail::pairwise_sum(fine);
    const cplx rough = pref * detail::pairwise_sum(coarse);
    res.error_estimate = std::abs(res.value - rough);
    res.n_points = np;
    if (!finite(res.value)) throw InsufficientSampling("boundary data produced non-finite quadrature values");
    if (opts.throw_on_insufficient && res.error_estimate > opts.tolerance)
        throw InsufficientSampling("quadrature self-estimate exceeds tolerance");
    return res;
}

}  // namespace modloc
