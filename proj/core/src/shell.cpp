#include "modloc/shell.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "modloc/conventions.hpp"
#include "modloc/errors.hpp"
#include "modloc/parallel.hpp"
#include "numeric.hpp"

namespace modloc {

MassShellGrid::MassShellGrid(double mass, double theta_min, double theta_max, int n_theta,
                             std::vector<TransversePoint> transverse)
    : mass_(mass), theta_min_(theta_min), theta_max_(theta_max), n_theta_(n_theta),
      transverse_(std::move(transverse)) {
    if (!(mass_ > 0.0)) throw ConfigError("mass must be positive");
    if (n_theta_ < 4) throw ConfigError("rapidity grid needs at least 4 points");
    if (!(theta_max_ > theta_min_)) throw ConfigError("theta_max must exceed theta_min");
    if (transverse_.empty()) throw ConfigError("transverse grid is empty");
    for (const auto& p : transverse_) {
        if (!(p.weight > 0.0)) throw ConfigError("transverse weights must be positive");
    }
}

double MassShellGrid::m_perp(int t) const {
    const auto& p = transverse_[t];
    return std::sqrt(mass_ * mass_ + p.p1 * p.p1 + p.p2 * p.p2);
}

bool MassShellGrid::symmetric(double tol) const { return std::abs(theta_min_ + theta_max_) <= tol; }

int MassShellGrid::transverse_index(double p1, double p2, double tol) const {
    for (int t = 0; t < n_transverse(); ++t) {
        if (std::abs(transverse_[t].p1 - p1) <= tol && std::abs(transverse_[t].p2 - p2) <= tol) return t;
    }
    return -1;
}

bool MassShellGrid::same_as(const MassShellGrid& o) const {
    if (mass_ != o.mass_ || theta_min_ != o.theta_min_ || theta_max_ != o.theta_max_ || n_theta_ != o.n_theta_ ||
        transverse_.size() != o.transverse_.size())
        return false;
    for (size_t i = 0; i < transverse_.size(); ++i) {
        const auto &a = transverse_[i], &b = o.transverse_[i];
        if (a.p1 != b.p1 || a.p2 != b.p2 || a.weight != b.weight) return false;
    }
    return true;
}

FourVector shell_point(const MassShellGrid& g, int j, int t) {
    if (j < 0 || j >= g.n_theta() || t < 0 || t >= g.n_transverse())
        throw IndexOutOfRange("shell index (" + std::to_string(j) + ", " + std::to_string(t) + ")");
    const double mp = g.m_perp(t), th = g.theta(j);
    const auto& p = g.transverse(t);
    return {mp * std::cosh(th), p.p1, p.p2, mp * std::sinh(th)};
}

ComplexFourVector shell_point_complex(const MassShellGrid& g, cplx z, int t) {
    const double mp = g.m_perp(t);
    const auto& p = g.transverse(t);
    return {mp * std::cosh(z), p.p1, p.p2, mp * std::sinh(z)};
}

ExpValue operator+(const ExpValue& x, const ExpValue& y) {
    if (x.a == cplx(0.0, 0.0)) return y;
    if (y.a == cplx(0.0, 0.0)) return x;
    const double emax = std::max(x.e.real(), y.e.real());
    const cplx a = x.a * std::exp(x.e - emax) + y.a * std::exp(y.e - emax);
    return {cplx(emax, 0.0), a};
}

WaveFunction::WaveFunction(GridPtr g, std::vector<cplx> s, FamilyPtr f)
    : grid(std::move(g)), samples(std::move(s)), family(std::move(f)) {
    if (static_cast<int>(samples.size()) != grid->size()) throw GridMismatch("sample count does not match grid");
}

WaveFunction WaveFunction::zero(GridPtr g) {
    const int n = g->size();
    return WaveFunction(std::move(g), std::vector<cplx>(n));
}

namespace {

void require_same_grid(const WaveFunction& x, const WaveFunction& y) {
    if (x.grid != y.grid && !x.grid->same_as(*y.grid)) throw GridMismatch("wave functions live on different grids");
}

}  // namespace

WaveFunction operator+(const WaveFunction& x, const WaveFunction& y) {
    require_same_grid(x, y);
    std::vector<cplx> s(x.samples.size());
    for (size_t i = 0; i < s.size(); ++i) s[i] = x.samples[i] + y.samples[i];
    FamilyPtr f = x.family && y.family ? family_sum(x.family, y.family) : nullptr;
    return WaveFunction(x.grid, std::move(s), f);
}

WaveFunction operator-(const WaveFunction& x, const WaveFunction& y) { return x + cplx(-1.0, 0.0) * y; }

WaveFunction operator*(cplx s, const WaveFunction& x) {
    std::vector<cplx> v(x.samples.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = s * x.samples[i];
    return WaveFunction(x.grid, std::move(v), x.family ? family_scale(x.family, s) : nullptr);
}

WaveFunction strip_family(const WaveFunction& x) { return WaveFunction(x.grid, x.samples); }

namespace {

ExpValue sech_value(cplx u) {
    // sech u = 2 e^{-u} / (1 + e^{-2u}) for Re u >= 0, mirrored otherwise.
    if (u.real() < 0.0) u = -u;
    return {-u + std::log(2.0), 1.0 / (1.0 + std::exp(-2.0 * u))};
}

}  // namespace

std::pair<FamilyPtr, WaveFunction> make_analytic(const FamilyParams& params, GridPtr grid) {
    auto fam = std::make_shared<AnalyticFamily>();
    const int nt = grid->n_transverse();
    std::vector<cplx> coeffs = params.transverse_coeffs;
    if (coeffs.empty()) coeffs.assign(nt, cplx(1.0, 0.0));
    if (static_cast<int>(coeffs.size()) != nt) throw ConfigError("transverse_coeffs size does not match grid");
    for (auto& c : coeffs) c *= params.amplitude;
    std::ostringstream desc;
    desc << std::setprecision(17);

    switch (params.tag) {
        case FamilyTag::gaussian: {
            if (!(params.width > 0.0)) throw ConfigError("gaussian width must be positive");
            const double c = params.center, w2 = 2.0 * params.width * params.width;
            fam->eval = [c, w2, coeffs](cplx z, int t) {
                return ExpValue{-(z - c) * (z - c) / w2, coeffs[t]};
            };
            desc << "gaussian(center=" << c << ", width=" << params.width << ")";
            break;
        }
        case FamilyTag::sech: {
            const double a = params.scale, c = params.center;
            if (!(a > 0.0)) throw ConfigError("sech scale must be positive");
            // Poles of sech(a (z - c)) sit at Im z = pi (n + 1/2) / a.
            const double nearest = M_PI / (2.0 * a);
            if (nearest <= M_PI)
                throw SingularityInStrip("sech scale " + std::to_string(a) + " puts a pole at Im z = " +
                                         std::to_string(nearest));
            fam->im_lo = -nearest;
            fam->im_hi = nearest;
            fam->eval = [a, c, coeffs](cplx z, int t) {
                ExpValue v = sech_value(a * (z - c));
                v.a *= coeffs[t];
                return v;
            };
            desc << "sech(" << a << " * (z - " << c << "))";
            break;
        }
        case FamilyTag::rational: {
            if (params.poles.empty()) throw ConfigError("rational family needs at least one pole");
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& p : params.poles) nearest = std::min(nearest, std::abs(p.imag()));
            if (nearest <= M_PI)
                throw SingularityInStrip("rational pole at |Im z| = " + std::to_string(nearest) + " <= pi");
            fam->im_lo = -nearest;
            fam->im_hi = nearest;
            const auto poles = params.poles;
            fam->eval = [poles, coeffs](cplx z, int t) {
                cplx v = coeffs[t];
                for (const auto& p : poles) v /= (z - p) * (z - std::conj(p));
                return ExpValue{0.0, v};
            };
            desc << "rational(" << poles.size() << " conjugate pole pairs)";
            break;
        }
    }
    fam->description = desc.str();
    FamilyPtr f = fam;
    return {f, sample_family(f, std::move(grid))};
}

WaveFunction sample_family(const FamilyPtr& f, GridPtr grid) {
    const int n = grid->n_theta();
    std::vector<cplx> s(grid->size());
    parallel_for(s.size(), [&](std::size_t i) {
        const int t = static_cast<int>(i) / n, j = static_cast<int>(i) % n;
        s[i] = (*f)(cplx(grid->theta(j), 0.0), t);
    });
    return WaveFunction(std::move(grid), std::move(s), f);
}

double cauchy_riemann_residual(const AnalyticFamily& f, cplx z, int t, double h) {
    const cplx dx = (f(z + h, t) - f(z - h, t)) / (2.0 * h);
    const cplx dy = (f(z + cplx(0, h), t) - f(z - cplx(0, h), t)) / (2.0 * h);
    return std::abs(dx + cplx(0, 1) * dy) / (std::abs(dx) + std::abs(f(z, t)) + 1e-300);
}

InnerProductReport inner_product(const WaveFunction& phi, const WaveFunction& psi) {
    require_same_grid(phi, psi);
    const MassShellGrid& g = *phi.grid;
    const int n = g.n_theta();
    const double d = g.dtheta();
    std::vector<cplx> fine, coarse;
    std::vector<double> mags;
    fine.reserve(g.size());
    for (int t = 0; t < g.n_transverse(); ++t) {
        const double w = g.transverse(t).weight;
        const int last_even = (n - 1) % 2 == 0 ? n - 1 : n - 2;
        for (int j = 0; j < n; ++j) {
            const cplx v = std::conj(phi.samples[g.index(j, t)]) * psi.samples[g.index(j, t)];
            const double tw = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            fine.push_back(v * (tw * d * w));
            mags.push_back(std::abs(v) * d * w);
            if (j % 2 == 0 && j <= last_even) {
                const double cw = (j == 0 || j == last_even) ? 0.5 : 1.0;
                coarse.push_back(v * (cw * 2.0 * d * w));
            }
        }
    }
    InnerProductReport r;
    r.value = detail::pairwise_sum(fine);
    const cplx c = detail::pairwise_sum(coarse);
    r.rule = "trapezoid-rapidity x transverse-weights, pairwise";
    r.error_estimate = std::abs(r.value - c) + 8.0 * 2.2e-16 * detail::pairwise_sum(mags);
    return r;
}

double norm(const WaveFunction& phi) { return std::sqrt(std::max(0.0, inner_product(phi, phi).value.real())); }

double max_abs(const WaveFunction& phi) {
    double m = 0.0;
    for (const auto& v : phi.samples) m = std::max(m, std::abs(v));
    return m;
}

double relative_distance(const WaveFunction& x, const WaveFunction& y) {
    const double ny = norm(y);
    const double d = norm(x - y);
    return ny > 0.0 ? d / ny : d;
}

double edge_magnitude(const WaveFunction& phi) {
    const MassShellGrid& g = *phi.grid;
    double m = 0.0;
    for (int t = 0; t < g.n_transverse(); ++t) {
        m = std::max(m, std::abs(phi.samples[g.index(0, t)]));
        m = std::max(m, std::abs(phi.samples[g.index(g.n_theta() - 1, t)]));
    }
    return m;
}

void check_edge_decay(const WaveFunction& phi, double threshold) {
    const double e = edge_magnitude(phi);
    if (!(e <= threshold)) {
        std::ostringstream os;
        os << "edge magnitude " << e << " exceeds " << threshold;
        throw BoundaryDecay(os.str());
    }
}

WaveFunction white_noise(GridPtr grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<cplx> s(grid->size());
    for (auto& v : s) {
        const double re = nd(rng);
        v = cplx(re, nd(rng));
    }
    return WaveFunction(std::move(grid), std::move(s));
}

void write_csv(const WaveFunction& phi, std::ostream& os) {
    const MassShellGrid& g = *phi.grid;
    os << std::setprecision(17);
    os << "# m=" << g.mass() << " dtheta=" << g.dtheta() << "\n";
    os << "# " << conventions::kBoostSign << "\n";
    os << "# " << conventions::kShellPairing << "\n";
    os << "theta,p1,p2,re,im\n";
    for (int t = 0; t < g.n_transverse(); ++t) {
        for (int j = 0; j < g.n_theta(); ++j) {
            const cplx v = phi.samples[g.index(j, t)];
            os << g.theta(j) << ',' << g.transverse(t).p1 << ',' << g.transverse(t).p2 << ',' << v.real() << ','
               << v.imag() << '\n';
        }
    }
}

ShellAction shell_action(const LorentzTransform& lambda, const MassShellGrid& grid) {
    if (!lambda.preserves_metric(1e-10)) throw UnsupportedTransform("matrix does not preserve the metric");
    const Eigen::Matrix4d m = lambda.inverse().m;
    const double tol = 1e-10;
    for (int r : {0, 3}) {
        for (int c : {1, 2}) {
            if (std::abs(m(r, c)) > tol || std::abs(m(c, r)) > tol)
                throw UnsupportedTransform("transform mixes the 0-3 plane with transverse directions");
        }
    }
    if (m(0, 0) < 1.0 - tol) throw UnsupportedTransform("transform is not orthochronous");
    const double det = m(0, 0) * m(3, 3) - m(0, 3) * m(3, 0);
    ShellAction act;
    act.orientation = det > 0.0 ? 1 : -1;
    act.shift = std::asinh(m(3, 0));
    const double o = act.orientation;
    if (std::abs(m(0, 0) - std::cosh(act.shift)) > 1e-9 * m(0, 0) ||
        std::abs(m(0, 3) - o * std::sinh(act.shift)) > 1e-9 * m(0, 0) ||
        std::abs(m(3, 3) - o * std::cosh(act.shift)) > 1e-9 * m(0, 0))
        throw UnsupportedTransform("0-3 block is not a boost composed with a reflection");
    act.perm.resize(grid.n_transverse());
    for (int t = 0; t < grid.n_transverse(); ++t) {
        const auto& p = grid.transverse(t);
        const double q1 = m(1, 1) * p.p1 + m(1, 2) * p.p2;
        const double q2 = m(2, 1) * p.p1 + m(2, 2) * p.p2;
        const int k = grid.transverse_index(q1, q2, 1e-9);
        if (k < 0) throw UnsupportedTransform("transverse grid is not invariant under the rotation");
        if (grid.transverse(k).weight != p.weight)
            throw UnsupportedTransform("rotation maps transverse points of unequal weight");
        act.perm[t] = k;
    }
    return act;
}

FamilyPtr family_translate(const FamilyPtr& f, const FourVector& a, GridPtr grid) {
    auto out = std::make_shared<AnalyticFamily>(*f);
    out->eval = [f, a, grid](cplx z, int t) {
        ExpValue v = f->eval(z, t);
        v.e += cplx(0.0, 1.0) * minkowski_inner(shell_point_complex(*grid, z, t), a);
        return v;
    };
    std::ostringstream os;
    os << "T(" << a[0] << "," << a[1] << "," << a[2] << "," << a[3] << ")[" << f->description << "]";
    out->description = os.str();
    return out;
}

FamilyPtr family_homogeneous(const FamilyPtr& f, const ShellAction& act) {
    auto out = std::make_shared<AnalyticFamily>(*f);
    const double o = act.orientation, c = act.shift;
    const auto perm = act.perm;
    out->eval = [f, o, c, perm](cplx z, int t) { return f->eval(o * z + c, perm[t]); };
    if (act.orientation < 0) {
        out->im_lo = -f->im_hi;
        out->im_hi = -f->im_lo;
    }
    std::ostringstream os;
    os << "d(o=" << act.orientation << ",c=" << act.shift << ")[" << f->description << "]";
    out->description = os.str();
    return out;
}

FamilyPtr family_shift(const FamilyPtr& f, cplx tau) {
    auto out = std::make_shared<AnalyticFamily>(*f);
    out->eval = [f, tau](cplx z, int t) { return f->eval(z + tau, t); };
    out->im_lo = f->im_lo - tau.imag();
    out->im_hi = f->im_hi - tau.imag();
    std::ostringstream os;
    os << "shift(" << tau.real() << (tau.imag() < 0 ? "" : "+") << tau.imag() << "i)[" << f->description << "]";
    out->description = os.str();
    return out;
}

FamilyPtr family_pct(const FamilyPtr& f) {
    auto out = std::make_shared<AnalyticFamily>(*f);
    out->eval = [f](cplx z, int t) {
        const ExpValue v = f->eval(std::conj(z), t);
        return ExpValue{std::conj(v.e), std::conj(v.a)};
    };
    out->im_lo = -f->im_hi;
    out->im_hi = -f->im_lo;
    out->description = "conj[" + f->description + "]";
    return out;
}

FamilyPtr family_scale(const FamilyPtr& f, cplx s) {
    auto out = std::make_shared<AnalyticFamily>(*f);
    out->eval = [f, s](cplx z, int t) {
        ExpValue v = f->eval(z, t);
        v.a *= s;
        return v;
    };
    return out;
}

FamilyPtr family_sum(const FamilyPtr& f, const FamilyPtr& g) {
    auto out = std::make_shared<AnalyticFamily>();
    out->eval = [f, g](cplx z, int t) { return f->eval(z, t) + g->eval(z, t); };
    out->im_lo = std::max(f->im_lo, g->im_lo);
    out->im_hi = std::min(f->im_hi, g->im_hi);
    out->description = "(" + f->description + " + " + g->description + ")";
    return out;
}

}  // namespace modloc
