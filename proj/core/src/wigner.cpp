#include "modloc/wigner.hpp"

#include <cmath>

#include "fft.hpp"
#include "modloc/errors.hpp"

namespace modloc {
namespace {

bool integral_steps(double t, double d, long& steps) {
    const double q = t / d;
    steps = std::lround(q);
    return std::abs(q - static_cast<double>(steps)) <= 1e-9 * std::max(1.0, std::abs(q));
}

std::vector<cplx> shift_fiber(const std::vector<cplx>& f, double t, double d, ResamplePolicy policy) {
    const int n = static_cast<int>(f.size());
    long steps = 0;
    if (integral_steps(t, d, steps)) {
        std::vector<cplx> out(n);
        for (int j = 0; j < n; ++j) {
            const long src = j + steps;
            if (src >= 0 && src < n) out[j] = f[src];
        }
        return out;
    }
    if (policy == ResamplePolicy::exact_only)
        throw OffGridBoost("rapidity " + std::to_string(t) + " is not a multiple of the grid step");
    const double edge = std::max(std::abs(f.front()), std::abs(f.back()));
    if (!(edge <= 1e-30)) throw BoundaryDecay("band-limited shift needs edge magnitude <= 1e-30");
    auto c = detail::dft(f);
    const auto k = detail::angular_frequencies(n, d);
    for (int m = 0; m < n; ++m) {
        const bool nyquist = n % 2 == 0 && m == n / 2;
        c[m] *= nyquist ? cplx(std::cos(k[m] * t), 0.0) : std::exp(cplx(0.0, k[m] * t));
    }
    return detail::idft(c);
}

}  // namespace

WaveFunction shift_rapidity(const WaveFunction& phi, double t, ResamplePolicy policy) {
    const MassShellGrid& g = *phi.grid;
    const int n = g.n_theta();
    std::vector<cplx> out(phi.samples.size());
    for (int tr = 0; tr < g.n_transverse(); ++tr) {
        std::vector<cplx> fiber(phi.samples.begin() + tr * n, phi.samples.begin() + (tr + 1) * n);
        const auto s = shift_fiber(fiber, t, g.dtheta(), policy);
        std::copy(s.begin(), s.end(), out.begin() + tr * n);
    }
    return WaveFunction(phi.grid, std::move(out), phi.family ? family_shift(phi.family, cplx(t, 0.0)) : nullptr);
}

bool exact_on_grid(const LorentzTransform& lambda, const MassShellGrid& grid) {
    try {
        const ShellAction act = shell_action(lambda, grid);
        long steps = 0;
        if (act.orientation < 0 && !grid.symmetric()) return false;
        return integral_steps(act.shift, grid.dtheta(), steps);
    } catch (const UnsupportedTransform&) {
        return false;
    }
}

WaveFunction apply_translation(const FourVector& a, const WaveFunction& phi) {
    const MassShellGrid& g = *phi.grid;
    std::vector<cplx> out(phi.samples.size());
    for (int t = 0; t < g.n_transverse(); ++t) {
        for (int j = 0; j < g.n_theta(); ++j) {
            const int i = g.index(j, t);
            const double ph = minkowski_inner(shell_point(g, j, t), a);
            out[i] = std::polar(1.0, ph) * phi.samples[i];
        }
    }
    return WaveFunction(phi.grid, std::move(out), phi.family ? family_translate(phi.family, a, phi.grid) : nullptr);
}

WaveFunction apply_homogeneous(const LorentzTransform& lambda, const WaveFunction& phi, ResamplePolicy policy) {
    const MassShellGrid& g = *phi.grid;
    const ShellAction act = shell_action(lambda, g);
    if (act.orientation < 0 && !g.symmetric())
        throw UnsupportedTransform("rapidity reflection needs a grid symmetric about 0");
    const int n = g.n_theta();
    std::vector<cplx> out(phi.samples.size());
    for (int t = 0; t < g.n_transverse(); ++t) {
        const int src = act.perm[t];
        std::vector<cplx> fiber(n);
        for (int j = 0; j < n; ++j) {
            const int jj = act.orientation > 0 ? j : n - 1 - j;
            fiber[j] = phi.samples[g.index(jj, src)];
        }
        const double shift = act.orientation > 0 ? act.shift : -act.shift;
        const auto s = shift == 0.0 ? fiber : shift_fiber(fiber, shift, g.dtheta(), policy);
        std::copy(s.begin(), s.end(), out.begin() + t * n);
    }
    return WaveFunction(phi.grid, std::move(out), phi.family ? family_homogeneous(phi.family, act) : nullptr);
}

WaveFunction apply_poincare(const PoincareElement& l, const WaveFunction& phi, ResamplePolicy policy) {
    return apply_translation(l.a, apply_homogeneous(l.lambda, phi, policy));
}

WaveFunction apply_pct(const WaveFunction& phi) {
    std::vector<cplx> out(phi.samples.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::conj(phi.samples[i]);
    return WaveFunction(phi.grid, std::move(out), phi.family ? family_pct(phi.family) : nullptr);
}

WaveFunction wedge_boost_group(const PoincareElement& frame, double t, const WaveFunction& phi,
                               ResamplePolicy policy) {
    return apply_poincare(conjugated_boost(frame, t), phi, policy);
}

WaveFunction wedge_involution(const PoincareElement& frame, const WaveFunction& phi, ResamplePolicy policy) {
    const LorentzTransform m(frame.lambda.m * rotation_z_pi().m * frame.lambda.inverse().m);
    const FourVector a = frame.a + m.apply(frame.a);
    return apply_poincare({a, m}, apply_pct(phi), policy);
}

RepOperator RepOperator::translation(const FourVector& a) {
    RepOperator op;
    op.kind_ = Kind::translation;
    op.a_ = a;
    return op;
}

RepOperator RepOperator::homogeneous(const LorentzTransform& lambda) {
    RepOperator op;
    op.kind_ = Kind::homogeneous;
    op.lambda_ = lambda;
    return op;
}

RepOperator RepOperator::pct() {
    RepOperator op;
    op.kind_ = Kind::pct;
    return op;
}

RepOperator RepOperator::composite(std::vector<RepOperator> factors) {
    RepOperator op;
    op.kind_ = Kind::composite;
    op.factors_ = std::move(factors);
    return op;
}

bool RepOperator::antiunitary() const {
    switch (kind_) {
        case Kind::pct:
            return true;
        case Kind::composite: {
            bool anti = false;
            for (const auto& f : factors_) anti = anti != f.antiunitary();
            return anti;
        }
        default:
            return false;
    }
}

bool RepOperator::exact_on(const MassShellGrid& grid) const {
    switch (kind_) {
        case Kind::homogeneous:
            return exact_on_grid(lambda_, grid);
        case Kind::composite:
            for (const auto& f : factors_) {
                if (!f.exact_on(grid)) return false;
            }
            return true;
        default:
            return true;
    }
}

WaveFunction RepOperator::apply(const WaveFunction& phi, ResamplePolicy policy) const {
    switch (kind_) {
        case Kind::translation:
            return apply_translation(a_, phi);
        case Kind::homogeneous:
            return apply_homogeneous(lambda_, phi, policy);
        case Kind::pct:
            return apply_pct(phi);
        case Kind::composite: {
            WaveFunction out = phi;
            for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) out = it->apply(out, policy);
            return out;
        }
    }
    return phi;
}

}  // namespace modloc
