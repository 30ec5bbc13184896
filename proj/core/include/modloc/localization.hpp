#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include <json.hpp>

#include "modloc/bound_report.hpp"
#include "modloc/modular.hpp"
#include "modloc/regions.hpp"

namespace modloc {

// Finite family of wedge frames L = (a_i, I), grouped by vertex a_i, with
// K the intersection of the closed wedges.
struct WedgeFamily {
    std::vector<PoincareElement> frames;
    std::vector<int> group;            // vertex index per frame
    std::vector<FourVector> vertices;  // distinct a_i
    PolyRegion region;

    nlohmann::json to_json() const;
};

// Throws EmptyRegion, or Error if some wedge misses a vertex of K.
WedgeFamily make_wedge_family(const std::vector<PoincareElement>& frames);

// Standard wedge and the x1-flipped wedge translated to (0,0,0,b): K is the
// diamond |x0| <= x3 <= b - |x0| times the transverse plane.
WedgeFamily slab_family(double b);

// (phi + s phi) / 2. Closed form when phi carries a family, else spectral.
WaveFunction real_projector(const PoincareElement& frame, Sign sign, const WaveFunction& phi);

// Real-orthogonal projector onto the fixed points of the discrete s_L:
// T(a) d(I) P_0 d(I)^{-1} T(-a), P_0 acting on Fourier pairs (t, k), (ups(t), -k).
WaveFunction orthogonal_projector(const PoincareElement& frame, Sign sign, const WaveFunction& phi);

struct LocalizationResult {
    WaveFunction projected;
    std::vector<double> residuals;                  // final per-wedge ||P_L phi - phi|| / ||phi_0||
    std::vector<std::vector<double>> history;       // per cycle, per wedge
    int iterations = 0;
    bool converged = false;
    double tol = 0.0;
    Sign sign = Sign::plus;

    nlohmann::json to_json(const WedgeFamily& family) const;
};

LocalizationResult localize(const WedgeFamily& family, Sign sign, const WaveFunction& phi, double tol,
                            int max_iter);

struct MembershipResult {
    std::vector<double> residuals;  // ||s_L phi - phi|| / ||phi|| per wedge
    bool member = false;
};

MembershipResult membership_test(const WedgeFamily& family, Sign sign, const WaveFunction& phi, double tol);

struct ShellIndex {
    int j = 0;
    int t = 0;
};

struct TubeEntry {
    cplx tau;
    ShellIndex at;
    FourVector p;
    ComplexFourVector zeta;  // I Lambda(tau)^{-1} I^{-1} p
    cplx u;
    double shell_residual = 0.0;  // |<zeta,zeta> - m^2| / (1 + sum |zeta_i|^2)
};

struct TubeSample {
    PoincareElement frame;
    std::vector<TubeEntry> entries;

    double max_shell_residual() const;
    void write_csv(std::ostream& os) const;
};

// u(zeta) = U_L(tau) phi(p) for every tau and shell point.
TubeSample boundary_function(const WaveFunction& phi, const PoincareElement& frame, const std::vector<cplx>& taus,
                             const std::vector<ShellIndex>& points);

// r_+(zeta) = R_I(tau) phi(p), the continuation in frame (0, I).
std::vector<cplx> r_plus(const WaveFunction& phi, const LorentzTransform& i, const std::vector<cplx>& taus,
                         const std::vector<ShellIndex>& points);

// max |u - e^{i<p,a>} e^{-i<zeta,a>} r_+| / |u| over the samples.
double factorization_residual(const WaveFunction& phi, const PoincareElement& frame, const std::vector<cplx>& taus,
                              const std::vector<ShellIndex>& points);

struct BoundaryConditionReport {
    std::vector<double> residuals;  // |u(-xi) - e^{i<p,a>} e^{i<xi,a>} conj u(xi)| per sample
    double max_residual = 0.0;      // max residual / max |rhs|
};

BoundaryConditionReport boundary_condition_check(const WaveFunction& phi, const PoincareElement& frame, Sign sign,
                                                 const std::vector<ShellIndex>& points);

struct GrowthOptions {
    double theta_extent = 4.0;
    int n_theta = 33;
    int n_rho = 9;
    double n_declared = 0.0;
    double eta_scale = 1e-3;  // eta = sign * eta_scale * I (0,0,0,1)
    int transverse = 0;
};

// |u(zeta)| <= C (1 + |zeta|)^N e^{H_K(Im zeta - eta)}, Minkowski pairing.
BoundReport growth_check_u(const WaveFunction& phi, const PoincareElement& frame, const PolyRegion& k, Sign sign,
                           const GrowthOptions& opts = {});

std::vector<ShellIndex> theta_window(const MassShellGrid& grid, double extent, int t = 0);

}  // namespace modloc
