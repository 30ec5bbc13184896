#include "modloc/modular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fft.hpp"
#include "modloc/conventions.hpp"
#include "modloc/errors.hpp"

namespace modloc {
namespace {

std::string format_tail(double ratio, double threshold) {
    std::ostringstream os;
    os << "amplified spectral tail ratio " << ratio << " exceeds " << threshold;
    return os.str();
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

void require_finite(const WaveFunction& w, const char* what) {
    for (const auto& v : w.samples) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NotInDomain(std::string(what) + " produced non-finite values");
    }
}

}  // namespace

FamilyPtr continued_family(const WaveFunction& phi, const PoincareElement& frame, cplx tau) {
    if (!phi.family) throw Error("closed_form backend needs a wave function with an analytic family");
    const GridPtr& g = phi.grid;
    const ShellAction to_frame = shell_action(frame.lambda.inverse(), *g);
    const ShellAction from_frame = shell_action(frame.lambda, *g);
    const FamilyPtr in_frame = family_homogeneous(family_translate(phi.family, frame.a * -1.0, g), to_frame);
    const double lo = std::min(0.0, tau.imag()), hi = std::max(0.0, tau.imag());
    if (!in_frame->holomorphic_on(lo, hi))
        throw NotInDomain("closed form is not holomorphic on the strip up to Im tau = " + std::to_string(tau.imag()));
    return family_translate(family_homogeneous(family_shift(in_frame, tau), from_frame), frame.a, g);
}

namespace {

WaveFunction closed_form_continuation(const WaveFunction& phi, const PoincareElement& frame, cplx tau) {
    WaveFunction res = sample_family(continued_family(phi, frame, tau), phi.grid);
    require_finite(res, "closed-form continuation");
    return res;
}

}  // namespace

const char* to_string(Backend b) { return b == Backend::closed_form ? "closed_form" : "spectral"; }
const char* to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

Backend backend_from_string(const std::string& s) {
    if (s == "closed_form") return Backend::closed_form;
    if (s == "spectral") return Backend::spectral;
    throw ConfigError("unknown backend '" + s + "' (expected closed_form or spectral)");
}

Sign sign_from_string(const std::string& s) {
    if (s == "+" || s == "plus") return Sign::plus;
    if (s == "-" || s == "minus") return Sign::minus;
    throw ConfigError("unknown sign '" + s + "' (expected + or -)");
}

double spectral_decay_exponent(const WaveFunction& phi, double noise_floor) {
    const MassShellGrid& g = *phi.grid;
    const int n = g.n_theta();
    const auto k = detail::angular_frequencies(n, g.dtheta());
    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < g.n_transverse(); ++t) {
        std::vector<cplx> fiber(phi.samples.begin() + t * n, phi.samples.begin() + (t + 1) * n);
        const auto c = detail::dft(fiber);
        double cmax = 0.0;
        for (const auto& v : c) cmax = std::max(cmax, std::abs(v));
        if (cmax == 0.0) continue;
        double khi = 0.0, chi = cmax;
        for (int m = 0; m < n; ++m) {
            if (std::abs(c[m]) >= noise_floor * cmax && std::abs(k[m]) > khi) {
                khi = std::abs(k[m]);
                chi = std::abs(c[m]);
            }
        }
        if (khi > 0.0) best = std::min(best, std::log(cmax / chi) / khi);
    }
    return best;
}

StripContinuation continue_boost(const WaveFunction& phi, const PoincareElement& frame, cplx tau, Backend backend,
                                 const SpectralOptions& opts) {
    if (std::abs(tau.imag()) > M_PI + 1e-12) throw NotInDomain("|Im tau| exceeds pi");
    StripContinuation sc;
    sc.backend = backend;
    sc.tau = tau;
    if (backend == Backend::closed_form) {
        sc.result = closed_form_continuation(phi, frame, tau);
        sc.decay_exponent = spectral_decay_exponent(phi, opts.noise_floor);
        return sc;
    }

    const GridPtr& g = phi.grid;
    const WaveFunction psi =
        apply_homogeneous(frame.lambda.inverse(), apply_translation(frame.a * -1.0, strip_family(phi)));
    sc.decay_exponent = spectral_decay_exponent(psi, opts.noise_floor);
    const int n = g->n_theta();
    const auto k = detail::angular_frequencies(n, g->dtheta());
    const double k_half = 0.5 * M_PI / g->dtheta();
    const bool complex_tau = tau.imag() != 0.0;
    std::vector<cplx> out(psi.samples.size());
    double tail = 0.0, total = 0.0;
    for (int t = 0; t < g->n_transverse(); ++t) {
        std::vector<cplx> fiber(psi.samples.begin() + t * n, psi.samples.begin() + (t + 1) * n);
        auto c = detail::dft(fiber);
        double cmax = 0.0;
        for (const auto& v : c) cmax = std::max(cmax, std::abs(v));
        for (int m = 0; m < n; ++m) {
            const bool nyquist = n % 2 == 0 && m == n / 2;
            if (complex_tau && std::abs(c[m]) < opts.noise_floor * cmax) {
                c[m] = 0.0;
                continue;
            }
            if (nyquist) {
                c[m] = complex_tau ? cplx(0.0, 0.0) : c[m] * std::cos(k[m] * tau.real());
            } else {
                c[m] *= std::exp(cplx(0.0, 1.0) * k[m] * tau);
            }
            const double p = std::norm(c[m]);
            total += p;
            if (std::abs(k[m]) > k_half) tail += p;
        }
        const auto back = detail::idft(c);
        std::copy(back.begin(), back.end(), out.begin() + t * n);
    }
    sc.tail_ratio = total > 0.0 ? tail / total : 0.0;
    if (!std::isfinite(sc.tail_ratio) || !std::isfinite(total))
        throw NotInDomain("spectral continuation overflowed");
    // Real shifts are unitary; only amplified tails signal a vector outside the domain.
    if (complex_tau && sc.tail_ratio > opts.tail_threshold)
        throw NotInDomain(format_tail(sc.tail_ratio, opts.tail_threshold));
    WaveFunction shifted(g, std::move(out));
    sc.result = apply_translation(frame.a, apply_homogeneous(frame.lambda, shifted));
    require_finite(sc.result, "spectral continuation");
    return sc;
}

WaveFunction delta_half(const PoincareElement& frame, Sign sign, const WaveFunction& phi, Backend backend,
                        const SpectralOptions& opts) {
    const double s = sign == Sign::plus ? 1.0 : -1.0;
    return continue_boost(phi, frame, cplx(0.0, s * M_PI), backend, opts).result;
}

WaveFunction s_op(const PoincareElement& frame, Sign sign, const WaveFunction& phi, Backend backend,
                  const SpectralOptions& opts) {
    return wedge_involution(frame, delta_half(frame, sign, phi, backend, opts));
}

double backend_agreement(const WaveFunction& phi, const PoincareElement& frame, cplx tau,
                         const SpectralOptions& opts) {
    const WaveFunction a = continue_boost(phi, frame, tau, Backend::closed_form, opts).result;
    const WaveFunction b = continue_boost(phi, frame, tau, Backend::spectral, opts).result;
    double diff = 0.0, scale = 0.0;
    for (size_t i = 0; i < a.samples.size(); ++i) {
        diff = std::max(diff, std::abs(a.samples[i] - b.samples[i]));
        scale = std::max(scale, std::abs(a.samples[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

double ModularReport::max_residual() const {
    double m = 0.0;
    for (const auto& r : relations) m = std::max(m, r.residual);
    return m;
}

nlohmann::json frame_to_json(const PoincareElement& l) {
    nlohmann::json lam = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        std::vector<double> row(4);
        for (int c = 0; c < 4; ++c) row[c] = l.lambda.m(r, c);
        lam.push_back(row);
    }
    return {{"a", std::vector<double>(l.a.x.begin(), l.a.x.end())}, {"lambda", lam}};
}

nlohmann::json ModularReport::to_json() const {
    nlohmann::json j;
    j["wedge"] = frame_to_json(wedge);
    j["sign"] = to_string(sign);
    j["backend"] = to_string(backend);
    j["relations"] = nlohmann::json::array();
    for (const auto& r : relations) j["relations"].push_back({{"name", r.name}, {"residual", finite_or_null(r.residual)}});
    j["controls"] = nlohmann::json::array();
    for (const auto& r : controls) j["controls"].push_back({{"name", r.name}, {"residual", finite_or_null(r.residual)}});
    j["domain"] = {{"decay_exponent", finite_or_null(decay_exponent)}};
    return j;
}

ModularReport tomita_check(const PoincareElement& frame, const std::vector<WaveFunction>& battery, Sign sign,
                           const TomitaOptions& opts) {
    ModularReport rep;
    rep.wedge = frame;
    rep.sign = sign;
    rep.backend = opts.backend;
    rep.decay_exponent = std::numeric_limits<double>::infinity();
    const Sign other = sign == Sign::plus ? Sign::minus : Sign::plus;
    const std::string sp = to_string(sign), so = to_string(other);
    const cplx lambda(0.6, 0.8);

    double r_j2 = 0.0, r_s2 = 0.0, r_jdj = 0.0, r_flow = 0.0, r_anti = 0.0, r_mis = 0.0;
    for (const auto& phi : battery) {
        rep.decay_exponent = std::min(rep.decay_exponent, spectral_decay_exponent(phi, opts.spectral.noise_floor));
        auto s = [&](const WaveFunction& x) { return s_op(frame, sign, x, opts.backend, opts.spectral); };
        auto j = [&](const WaveFunction& x) { return wedge_involution(frame, x); };

        r_j2 = std::max(r_j2, relative_distance(j(j(phi)), phi));
        const WaveFunction sphi = s(phi);
        r_s2 = std::max(r_s2, relative_distance(s(sphi), phi));
        const WaveFunction lhs = j(delta_half(frame, sign, j(phi), opts.backend, opts.spectral));
        r_jdj = std::max(r_jdj, relative_distance(lhs, delta_half(frame, other, phi, opts.backend, opts.spectral)));
        const double t = opts.flow_steps * phi.grid->dtheta();
        const WaveFunction flowed =
            wedge_boost_group(frame, t, s(wedge_boost_group(frame, -t, phi, ResamplePolicy::exact_only)),
                              ResamplePolicy::exact_only);
        r_flow = std::max(r_flow, relative_distance(flowed, sphi));
        r_anti = std::max(r_anti, relative_distance(s(lambda * phi), std::conj(lambda) * sphi));
        if (opts.mismatched_frame) {
            auto sm = [&](const WaveFunction& x) {
                return wedge_involution(*opts.mismatched_frame, delta_half(frame, sign, x, opts.backend, opts.spectral));
            };
            double r = std::numeric_limits<double>::infinity();
            try {
                r = relative_distance(sm(sm(phi)), phi);
            } catch (const NotInDomain&) {
            }
            if (!std::isfinite(r)) r = std::numeric_limits<double>::infinity();
            r_mis = std::max(r_mis, r);
        }
    }
    rep.relations = {
        {"j^2 = 1", r_j2},
        {"s^2 = 1", r_s2},
        {"j delta^{1/2}_" + sp + " j = delta^{1/2}_" + so, r_jdj},
        {"U_L(t) s U_L(-t) = s", r_flow},
        {"s(lambda phi) = conj(lambda) s(phi)", r_anti},
    };
    if (opts.mismatched_frame) rep.controls.push_back({"s'^2 = 1 with mismatched j", r_mis});
    return rep;
}

std::vector<WaveFunction> gaussian_battery(GridPtr grid, const PoincareElement& frame) {
    struct Member {
        double c, w;
        cplx amp;
    };
    const std::vector<Member> members{
        {0.0, 1.25, {1.0, 0.0}},   {0.25, 1.3, {0.6, 0.8}},  {-0.5, 1.25, {1.0, -0.5}},
        {0.5, 1.3, {-0.3, 1.0}},   {0.0, 1.3, {0.2, 0.0}},
    };
    std::vector<WaveFunction> out;
    for (const auto& m : members) {
        FamilyParams p;
        p.tag = FamilyTag::gaussian;
        p.center = m.c;
        p.width = m.w;
        p.amplitude = m.amp;
        auto [fam, wf] = make_analytic(p, grid);
        out.push_back(apply_poincare(frame, wf, ResamplePolicy::exact_only));
    }
    return out;
}

}  // namespace modloc
