#include <map>
#include <sstream>

#include "cli.hpp"
#include "modloc/conventions.hpp"
#include "modloc/errors.hpp"

namespace modloc::cli {
namespace {

struct Entry {
    const char* summary;
    const char* checks;
    const char* pairing;
};

const std::map<std::string, Entry>& entries() {
    static const std::map<std::string, Entry> e{
        {"tomita",
         {"Modular data of a wedge W_L on the discretized mass shell.\n"
          "  delta^{1/2}_{L,+-} = U_L(+-i pi), j_L = U((1+M)a, M) Theta with M = I Upsilon I^{-1},\n"
          "  s_{L,+-} = j_L delta^{1/2}_{L,+-} (antilinear).",
          "  j^2 = 1, s^2 = 1, j delta^{1/2}_+ j = delta^{1/2}_-, j U_L(t) j = U_L(t),\n"
          "  antilinearity of j and s: residuals <= relation_tol (1e-8) over the battery.\n"
          "  closed-form and spectral continuations agree at +-i pi: relative sup <= agreement_tol (1e-6).\n"
          "  seeded white noise raises NotInDomain at i pi/2.",
          "minkowski"}},
        {"localize",
         {"Alternating real-orthogonal projections onto Fix(s_L) over a finite wedge family.",
          "  per-wedge residual ||P_L phi - phi|| / ||phi_0|| <= residual_tol (1e-6) within max_cycles (200).\n"
          "  real combinations of members stay members; i times a member is rejected.",
          "minkowski"}},
        {"boundary",
         {"Boundary condition and factorization of the tube function u(zeta) = U_L(tau) phi(p).",
          "  u(-xi) = e^{i<p,a>} e^{i<xi,a>} conj u(xi) for members: relative residual <= boundary_tol (1e-6).\n"
          "  the same relation for i times a member: residual > control_threshold (1e-2).\n"
          "  u = e^{i<p,a>} e^{-i<zeta,a>} r_+ with r_+ the continuation in frame (0, I): residual <= 1e-8.",
          "minkowski"}},
        {"pws",
         {"Entire-function bound for the Fourier-Laplace transform of a compactly supported distribution:\n"
          "  |u^(zeta)| <= C (1 + |zeta|)^N exp(H_K(Im zeta)),  u^(zeta) = u_x(e^{-i<x,zeta>}),\n"
          "  N the order of u, K its support hull, H_K(eta) = sup_{x in K} <x, eta>.",
          "  worst ratio C is finite and the grid with half the spacing and twice the extent gives\n"
          "  C_doubled <= 1.2 C (tol overrides 0.2); C <= declared C when given.",
          "euclidean"}},
        {"hormander",
         {"Set Gamma_u = {eta : e^{<x,eta>} u tempered} from exponential tail rates (exact arithmetic).",
          "  interval endpoints match params.expected within endpoint_tol (1e-9), n = 1.",
          "euclidean"}},
        {"epstein",
         {"Polynomial bound |f(zeta)| <= C (1 + |zeta|)^N on R^n + iM, M compact in the cone,\n"
          "  and convergence of int f(xi + i eta) phi(xi) dxi as eta -> 0 (tempered boundary values).",
          "  C finite and stable under grid doubling, N_est <= N + 0.1, and the increments of the\n"
          "  boundary pairings decrease monotonically for e^{-xi^2}, sech xi, e^{-sqrt(1+xi^2)}.",
          "euclidean"}},
        {"support-estimate",
         {"Support function from growth: H(eta) = slope of log|u^(i r eta)| in r (fit H r + N log r + c\n"
          "  over the top half of the radii); K recovered as the intersection of half-spaces.",
          "  |H_est - H_hull| / max(1, |H_hull|) <= relative_tol (1e-2) on every probed direction.",
          "euclidean"}},
        {"cauchy",
         {"Cauchy reconstruction inside a tube strip from boundary values on Im zeta_j = lo_j, hi_j:\n"
          "  f(zeta) = prod_j (zeta_j + i)^k / (2 pi i)^n  sum_theta (+-) <f_theta, Phi_{zeta,theta}>,\n"
          "  Phi_{zeta,theta}(x) = prod_j (x_j + i theta_j - zeta_j)^{-1} (x_j + i theta_j + i)^{-k}, k = 2.",
          "  quadrature self-estimate (step h against 2h) <= 1e-4, error against direct evaluation <= 1e-4,\n"
          "  and the error at twice the sampling density is at most half (or at roundoff).",
          "euclidean"}},
    };
    return e;
}

}  // namespace

std::string describe(const std::string& mode) {
    const auto it = entries().find(mode);
    if (it == entries().end()) throw ConfigError("unknown mode '" + mode + "'");
    std::ostringstream os;
    os << "mode: " << mode << "\n\n" << it->second.summary << "\n\nchecks:\n" << it->second.checks << "\n\nconventions:\n";
    const nlohmann::json tags = conventions::tags(it->second.pairing);
    for (const auto& [k, v] : tags.items()) os << "  " << k << ": " << v.get<std::string>() << '\n';
    os << "\nexit codes: 0 all checks pass, 2 a check failed, 1 input error\n";
    return os.str();
}

}  // namespace modloc::cli
