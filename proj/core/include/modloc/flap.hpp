#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "modloc/bound_report.hpp"
#include "modloc/regions.hpp"

namespace modloc {

using cplx = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using TubeFunction = std::function<cplx(const ComplexVector&)>;

// w * d^alpha delta_x, paired as u(phi) = w (-1)^|alpha| d^alpha phi(x).
struct Atom {
    Eigen::VectorXd x;
    cplx w{1.0, 0.0};
    std::vector<int> deriv;  // empty means no derivative
};

enum class Density { constant, exponential, opaque };

// w e^{<rate, x>} on the box [lo, hi]; bounds may be infinite.
struct Cell {
    Eigen::VectorXd lo, hi;
    Density density = Density::constant;
    Eigen::VectorXd rate;  // ignored unless density == exponential
    cplx w{1.0, 0.0};
    std::string density_tag;  // original tag for opaque densities

    bool bounded() const;
};

struct SampledDistribution {
    int n = 1;
    std::vector<Atom> atoms;
    std::vector<Cell> cells;
    int order = 0;
    PolyRegion hull;

    bool compact() const;
    // Throws ConfigError when the hull misses an atom or cell, or the order is too small.
    void validate() const;
    nlohmann::json to_json() const;
};

SampledDistribution point_mass(const Eigen::VectorXd& x, cplx w = 1.0);
SampledDistribution interval_indicator(double a, double b);
SampledDistribution distribution_from_json(const nlohmann::json& j);

// u(e^{-i<x, zeta>}). An unbounded cell needs rate_j + Im zeta_j < 0 toward
// +inf and > 0 toward -inf, otherwise NotInDomain.
cplx fl_transform(const SampledDistribution& u, const ComplexVector& zeta);

enum class ZetaNorm { max, euclidean };

// Real parts on the tensor grid [-xi_max, xi_max]^n, imaginary parts r * d
// over directions d and radii r.
struct TubeGrid {
    int n = 1;
    double xi_max = 10.0;
    int n_xi = 41;
    std::vector<Eigen::VectorXd> directions;
    std::vector<double> radii;
    std::optional<Cone> cone;

    std::vector<Eigen::VectorXd> xi_points() const;
    std::vector<Eigen::VectorXd> eta_points() const;
    // Half the spacing, twice the extent in xi and in r.
    TubeGrid doubled() const;
    // Throws ConfigError if some eta lies outside the declared cone.
    void validate() const;
    nlohmann::json to_json() const;
};

// Directions +-e_j and radii {0} plus a geometric ladder up to r_max.
TubeGrid default_tube_grid(int n, double r_max = 50.0, int n_radii = 12);

struct PwsOptions {
    ZetaNorm norm = ZetaNorm::max;
    std::optional<double> c_declared;
    double stability = 0.2;
    std::optional<PolyRegion> k;  // hull to test against; default u.hull
};

// |u^(zeta)| / ((1 + |zeta|)^N e^{H_K(Im zeta)}) with N from u.
BoundReport pws_check(const SampledDistribution& u, const TubeGrid& grid, const PwsOptions& opts = {});

bool is_tempered(const SampledDistribution& u, const Eigen::VectorXd& eta);

// {eta : e^{<x, eta>} u tempered}, from the tail rates of every cell.
// Throws UnsupportedDensity on unbounded cells without an exponential tag.
PolyRegion hormander_cone_estimate(const SampledDistribution& u);

struct SupportEstimate {
    std::vector<std::pair<Eigen::VectorXd, double>> h;  // (eta, H(eta))
    std::vector<double> log_coefficient;                  // fitted power of r
    PolyRegion region;

    nlohmann::json to_json() const;
};

std::vector<double> geometric_radii(double r_min, double r_max, int count);

// Fits log|f(i r eta)| = H r + N log r + c over the top half of the radii.
SupportEstimate support_from_growth(const TubeFunction& f, const std::vector<Eigen::VectorXd>& directions,
                                    const std::vector<double>& radii);

struct EpsteinOptions {
    double n_declared = 0.0;
    std::optional<double> c_declared;
    ZetaNorm norm = ZetaNorm::max;
    double stability = 0.2;
    bool boundary_probe = true;
    int probe_steps = 10;  // eta_j = eta_0 / 2^j, j = 0..steps
    std::optional<double> probe_eta0;  // default: smallest |eta| in M
    double probe_window = 60.0;
};

struct ProbeResult {
    std::string test_function;
    std::vector<double> eta;
    std::vector<double> increments;
    bool monotone = false;  // strictly decreasing down to a roundoff floor
    bool edge_decay = true;

    nlohmann::json to_json() const;
};

// Real parts: tensor grid on [-xi_max, xi_max]^n with n_xi points per axis.
struct XiGrid {
    double xi_max = 100.0;
    int n_xi = 401;
};

// Boundary convergence of int f(xi + i eta d) phi(xi) dxi as eta -> 0, n = 1.
std::vector<ProbeResult> epstein_probe(const TubeFunction& f, double direction, const EpsteinOptions& opts = {});

// |f(zeta)| <= C (1 + |zeta|)^N on R^n + iM.
BoundReport epstein_bound_check(const TubeFunction& f, const Cone& gamma, const std::vector<Eigen::VectorXd>& m,
                                const XiGrid& xi, int n, const EpsteinOptions& opts = {});

struct CauchyOptions {
    int k = 2;
    double t_max = 10.0;   // x = sinh t, t in [-t_max, t_max]
    int n_points = 321;    // per line and axis
    double tolerance = 1e-4;
    bool throw_on_insufficient = true;
};

struct CauchyResult {
    cplx value;
    double error_estimate = 0.0;  // |I_h - I_2h|
    int n_points = 0;
};

// f(zeta) from its values on Im zeta_j = lo_j and hi_j, n in {1, 2}.
CauchyResult cauchy_tube_reconstruct(const TubeFunction& f, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                     const ComplexVector& zeta, const CauchyOptions& opts = {});

}  // namespace modloc
