#include "modloc/localization.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "fft.hpp"
#include "modloc/errors.hpp"

namespace modloc {
namespace {

Backend preferred_backend(const WaveFunction& phi) { return phi.family ? Backend::closed_form : Backend::spectral; }

// P_0 for the standard wedge on the Fourier pairs (t, k) <-> (ups(t), -k).
WaveFunction standard_orthogonal_projector(const WaveFunction& psi, Sign sign) {
    const MassShellGrid& g = *psi.grid;
    const int n = g.n_theta(), nt = g.n_transverse();
    const auto k = detail::angular_frequencies(n, g.dtheta());
    const double sg = sign == Sign::plus ? 1.0 : -1.0;
    std::vector<int> ups(nt);
    for (int t = 0; t < nt; ++t) {
        ups[t] = g.transverse_index(-g.transverse(t).p1, -g.transverse(t).p2);
        if (ups[t] < 0) throw UnsupportedTransform("transverse grid is not symmetric under p -> -p");
    }
    std::vector<std::vector<cplx>> c(nt);
    for (int t = 0; t < nt; ++t)
        c[t] = detail::dft(std::vector<cplx>(psi.samples.begin() + t * n, psi.samples.begin() + (t + 1) * n));
    std::vector<cplx> out(psi.samples.size());
    for (int t = 0; t < nt; ++t) {
        std::vector<cplx> nc(n);
        for (int m = 0; m < n; ++m) {
            if (n % 2 == 0 && m == n / 2) continue;
            const int mp = (n - m) % n;
            const cplx x = c[t][m], y = c[ups[t]][mp];
            const double a = sg * k[m] * M_PI;  // E = e^{a}
            if (a > 0.0) {
                const double r = std::exp(-a);
                nc[m] = (x + r * std::conj(y)) / (1.0 + r * r);
            } else {
                const double r = std::exp(a);
                nc[m] = (r * r * x + r * std::conj(y)) / (1.0 + r * r);
            }
        }
        const auto back = detail::idft(nc);
        std::copy(back.begin(), back.end(), out.begin() + t * n);
    }
    return WaveFunction(psi.grid, std::move(out));
}

int shell_index_of(const MassShellGrid& g, const FourVector& q) {
    const int t = g.transverse_index(q[1], q[2], 1e-9);
    if (t < 0) throw UnsupportedTransform("image point is off the transverse grid");
    const double th = std::asinh(q[3] / g.m_perp(t));
    const double pos = (th - g.theta_min()) / g.dtheta();
    const long j = std::lround(pos);
    if (std::abs(pos - j) > 1e-6 || j < 0 || j >= g.n_theta())
        throw UnsupportedTransform("image point is off the rapidity grid");
    return g.index(static_cast<int>(j), t);
}

double zeta_norm(const ComplexFourVector& z) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(z[i]));
    return m;
}

// U_L(tau) phi at the given shell points; closed forms are evaluated only there.
std::vector<cplx> continuation_at(const WaveFunction& phi, const PoincareElement& frame, cplx tau,
                                  const std::vector<ShellIndex>& points) {
    std::vector<cplx> out;
    out.reserve(points.size());
    const MassShellGrid& g = *phi.grid;
    if (phi.family) {
        const FamilyPtr f = continued_family(phi, frame, tau);
        for (const auto& pt : points) {
            const cplx v = (*f)(cplx(g.theta(pt.j), 0.0), pt.t);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw NotInDomain("continued value is not finite");
            out.push_back(v);
        }
        return out;
    }
    const WaveFunction u = continue_boost(phi, frame, tau, Backend::spectral).result;
    for (const auto& pt : points) out.push_back(u.at(pt.j, pt.t));
    return out;
}

ComplexFourVector zeta_of(const MassShellGrid& g, const LorentzTransform& i, cplx tau, int j, int t) {
    const ComplexLorentzTransform ic(i);
    const ComplexLorentzTransform m = ic * boost3_complex(tau).inverse() * ic.inverse();
    return m.apply(ComplexFourVector(shell_point(g, j, t), FourVector()));
}

}  // namespace

nlohmann::json WedgeFamily::to_json() const {
    nlohmann::json j;
    j["frames"] = nlohmann::json::array();
    for (size_t i = 0; i < frames.size(); ++i) {
        auto f = frame_to_json(frames[i]);
        f["vertex_group"] = group[i];
        j["frames"].push_back(f);
    }
    j["region"] = region_to_json(region);
    return j;
}

WedgeFamily make_wedge_family(const std::vector<PoincareElement>& frames) {
    if (frames.empty()) throw Error("wedge family is empty");
    WedgeFamily f;
    f.frames = frames;
    std::vector<PolyRegion> wedges;
    for (const auto& l : frames) {
        int g = -1;
        for (size_t v = 0; v < f.vertices.size(); ++v) {
            if ((f.vertices[v] - l.a).eigen().norm() <= 1e-12) g = static_cast<int>(v);
        }
        if (g < 0) {
            g = static_cast<int>(f.vertices.size());
            f.vertices.push_back(l.a);
        }
        f.group.push_back(g);
        wedges.push_back(make_wedge(l).region);
    }
    f.region = intersect_regions(wedges);
    if (f.region.vrep()) {
        for (const auto& w : wedges) {
            for (const auto& v : f.region.vrep()->vertices) {
                if (!w.contains(v, 1e-8)) throw Error("a family wedge does not contain a vertex of K");
            }
        }
    }
    return f;
}

WedgeFamily slab_family(double b) {
    return make_wedge_family({PoincareElement::identity(), PoincareElement({0, 0, 0, b}, rotation_x_pi())});
}

WaveFunction real_projector(const PoincareElement& frame, Sign sign, const WaveFunction& phi) {
    const WaveFunction s = s_op(frame, sign, phi, preferred_backend(phi));
    return cplx(0.5, 0.0) * (phi + s);
}

WaveFunction orthogonal_projector(const PoincareElement& frame, Sign sign, const WaveFunction& phi) {
    const WaveFunction psi = apply_homogeneous(frame.lambda.inverse(), apply_translation(frame.a * -1.0, strip_family(phi)),
                                               ResamplePolicy::exact_only);
    const WaveFunction q = standard_orthogonal_projector(psi, sign);
    return apply_translation(frame.a, apply_homogeneous(frame.lambda, q, ResamplePolicy::exact_only));
}

nlohmann::json LocalizationResult::to_json(const WedgeFamily& family) const {
    nlohmann::json j;
    j["family"] = family.to_json();
    j["sign"] = to_string(sign);
    j["tol"] = tol;
    j["iterations"] = iterations;
    j["residuals"] = residuals;
    j["residual_history"] = history;
    j["converged"] = converged;
    j["residual_definition"] = "||P_L phi - phi|| / ||phi_0||, P_L real-orthogonal projector onto Fix(s_L)";
    return j;
}

LocalizationResult localize(const WedgeFamily& family, Sign sign, const WaveFunction& phi, double tol,
                            int max_iter) {
    LocalizationResult res;
    res.tol = tol;
    res.sign = sign;
    res.projected = strip_family(phi);
    res.residuals.assign(family.frames.size(), 0.0);
    const double n0 = norm(phi);
    if (n0 == 0.0) {
        res.converged = true;
        return res;
    }
    for (int it = 1; it <= max_iter; ++it) {
        for (const auto& l : family.frames) res.projected = orthogonal_projector(l, sign, res.projected);
        for (size_t w = 0; w < family.frames.size(); ++w) {
            const WaveFunction p = orthogonal_projector(family.frames[w], sign, res.projected);
            res.residuals[w] = norm(p - res.projected) / n0;
        }
        res.history.push_back(res.residuals);
        res.iterations = it;
        if (*std::max_element(res.residuals.begin(), res.residuals.end()) <= tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

MembershipResult membership_test(const WedgeFamily& family, Sign sign, const WaveFunction& phi, double tol) {
    MembershipResult r;
    r.member = true;
    const double n = norm(phi);
    for (const auto& l : family.frames) {
        double res = 0.0;
        if (n > 0.0) {
            try {
                res = norm(s_op(l, sign, phi, preferred_backend(phi)) - phi) / n;
            } catch (const NotInDomain&) {
                res = std::numeric_limits<double>::infinity();
            }
        }
        r.residuals.push_back(res);
        if (!(res <= tol)) r.member = false;
    }
    return r;
}

double TubeSample::max_shell_residual() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.shell_residual);
    return m;
}

void TubeSample::write_csv(std::ostream& os) const {
    os << std::setprecision(17);
    os << "re_tau,im_tau,p_index,re_z0,im_z0,re_z1,im_z1,re_z2,im_z2,re_z3,im_z3,re_u,im_u\n";
    for (const auto& e : entries) {
        os << e.tau.real() << ',' << e.tau.imag() << ',' << e.at.t << ':' << e.at.j;
        for (int i = 0; i < 4; ++i) os << ',' << e.zeta[i].real() << ',' << e.zeta[i].imag();
        os << ',' << e.u.real() << ',' << e.u.imag() << '\n';
    }
}

TubeSample boundary_function(const WaveFunction& phi, const PoincareElement& frame, const std::vector<cplx>& taus,
                             const std::vector<ShellIndex>& points) {
    TubeSample ts;
    ts.frame = frame;
    const MassShellGrid& g = *phi.grid;
    const double m2 = g.mass() * g.mass();
    for (const auto& tau : taus) {
        const std::vector<cplx> u = continuation_at(phi, frame, tau, points);
        for (size_t k = 0; k < points.size(); ++k) {
            const ShellIndex& pt = points[k];
            TubeEntry e;
            e.tau = tau;
            e.at = pt;
            e.p = shell_point(g, pt.j, pt.t);
            e.zeta = zeta_of(g, frame.lambda, tau, pt.j, pt.t);
            e.u = u[k];
            double scale = 1.0;
            for (int i = 0; i < 4; ++i) scale += std::norm(e.zeta[i]);
            e.shell_residual = std::abs(minkowski_inner(e.zeta, e.zeta) - m2) / scale;
            ts.entries.push_back(e);
        }
    }
    return ts;
}

std::vector<cplx> r_plus(const WaveFunction& phi, const LorentzTransform& i, const std::vector<cplx>& taus,
                         const std::vector<ShellIndex>& points) {
    std::vector<cplx> out;
    const PoincareElement homogeneous(FourVector(), i);
    for (const auto& tau : taus) {
        const std::vector<cplx> r = continuation_at(phi, homogeneous, tau, points);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

double factorization_residual(const WaveFunction& phi, const PoincareElement& frame, const std::vector<cplx>& taus,
                              const std::vector<ShellIndex>& points) {
    const TubeSample ts = boundary_function(phi, frame, taus, points);
    const std::vector<cplx> r = r_plus(phi, frame.lambda, taus, points);
    double worst = 0.0;
    for (size_t k = 0; k < ts.entries.size(); ++k) {
        const auto& e = ts.entries[k];
        const cplx phase = std::exp(cplx(0.0, minkowski_inner(e.p, frame.a)) -
                                    cplx(0.0, 1.0) * minkowski_inner(e.zeta, frame.a));
        const cplx rhs = phase * r[k];
        const double scale = std::max(std::abs(e.u), std::abs(rhs));
        if (scale > 0.0) worst = std::max(worst, std::abs(e.u - rhs) / scale);
    }
    return worst;
}

BoundaryConditionReport boundary_condition_check(const WaveFunction& phi, const PoincareElement& frame, Sign sign,
                                                 const std::vector<ShellIndex>& points) {
    const MassShellGrid& g = *phi.grid;
    const WaveFunction edge = delta_half(frame, sign, phi, preferred_backend(phi));
    const LorentzTransform m(frame.lambda.m * rotation_z_pi().m * frame.lambda.inverse().m);
    BoundaryConditionReport rep;
    double scale = 0.0, worst = 0.0;
    for (const auto& pt : points) {
        const FourVector p = shell_point(g, pt.j, pt.t);
        const FourVector xi = m.apply(p);
        const cplx u_xi = phi.samples[shell_index_of(g, xi)];
        const cplx rhs =
            std::polar(1.0, minkowski_inner(p, frame.a) + minkowski_inner(xi, frame.a)) * std::conj(u_xi);
        const double r = std::abs(edge.at(pt.j, pt.t) - rhs);
        rep.residuals.push_back(r);
        worst = std::max(worst, r);
        scale = std::max(scale, std::abs(rhs));
    }
    rep.max_residual = scale > 0.0 ? worst / scale : worst;
    return rep;
}

std::vector<ShellIndex> theta_window(const MassShellGrid& grid, double extent, int t) {
    std::vector<ShellIndex> out;
    for (int j = 0; j < grid.n_theta(); ++j) {
        if (std::abs(grid.theta(j)) <= extent + 1e-12) out.push_back({j, t});
    }
    return out;
}

namespace {

struct GrowthPass {
    double c = 0.0;
    std::vector<double> at;
    std::vector<std::pair<double, double>> envelope;
    std::size_t samples = 0;
    std::size_t skipped = 0;
};

GrowthPass growth_pass(const WaveFunction& phi, const PoincareElement& frame, const PolyRegion& k, Sign sign,
                       const GrowthOptions& o, double extent, int n_theta, int n_rho) {
    const MassShellGrid& g = *phi.grid;
    const double sg = sign == Sign::plus ? 1.0 : -1.0;
    const FourVector eta = frame.lambda.apply(FourVector(0, 0, 0, sg * o.eta_scale));
    std::vector<ShellIndex> pts;
    for (int i = 0; i < n_theta; ++i) {
        const double th = -extent + 2.0 * extent * i / (n_theta - 1);
        const long j = std::lround((th - g.theta_min()) / g.dtheta());
        if (j < 0 || j >= g.n_theta()) throw IndexOutOfRange("growth probe outside the rapidity grid");
        pts.push_back({static_cast<int>(j), o.transverse});
    }
    GrowthPass out;
    out.at = {0.0, 0.0};
    for (int r = 0; r <= n_rho; ++r) {
        const cplx tau(0.0, sg * M_PI * r / n_rho);
        const std::vector<cplx> u = continuation_at(phi, frame, tau, pts);
        for (size_t q = 0; q < pts.size(); ++q) {
            const ShellIndex& pt = pts[q];
            const ComplexFourVector z = zeta_of(g, frame.lambda, tau, pt.j, pt.t);
            const FourVector y = z.imag() - eta;
            const double h = support_function_minkowski(k, y);
            if (!std::isfinite(h)) {
                ++out.skipped;
                continue;
            }
            ++out.samples;
            const double mag = std::abs(u[q]);
            const double zn = zeta_norm(z);
            const double ratio = mag * std::exp(-h) / std::pow(1.0 + zn, o.n_declared);
            if (ratio > out.c) {
                out.c = ratio;
                out.at = {g.theta(pt.j), tau.imag()};
            }
            if (mag > 0.0) out.envelope.push_back({std::log1p(zn), std::log(mag) - h});
        }
    }
    return out;
}

}  // namespace

BoundReport growth_check_u(const WaveFunction& phi, const PoincareElement& frame, const PolyRegion& k, Sign sign,
                           const GrowthOptions& opts) {
    const GrowthPass base = growth_pass(phi, frame, k, sign, opts, opts.theta_extent, opts.n_theta, opts.n_rho);
    const GrowthPass dbl =
        growth_pass(phi, frame, k, sign, opts, 2.0 * opts.theta_extent, 4 * opts.n_theta - 3, 2 * opts.n_rho);
    BoundReport rep;
    rep.check = "growth_u";
    rep.n_declared = opts.n_declared;
    rep.n_used = opts.n_declared;
    rep.n_est = upper_envelope_slope(base.envelope);
    rep.c = base.c;
    rep.c_doubled = dbl.c;
    rep.max_ratio_at = base.at;
    rep.samples = base.samples + dbl.samples;
    rep.skipped = base.skipped + dbl.skipped;
    rep.pass = bound_stable(rep.c, rep.c_doubled) || (rep.c == 0.0 && rep.c_doubled == 0.0);
    rep.grid = {{"theta_extent", opts.theta_extent},
                {"n_theta", opts.n_theta},
                {"n_rho", opts.n_rho},
                {"eta_scale", opts.eta_scale},
                {"support_pairing", "minkowski"}};
    return rep;
}

}  // namespace modloc
