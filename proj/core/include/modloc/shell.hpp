#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "modloc/geometry.hpp"

namespace modloc {

struct TransversePoint {
    double p1 = 0.0;
    double p2 = 0.0;
    double weight = 1.0;
};

// Rapidity grid theta_j = theta_min + j * dtheta, j = 0..n_theta-1, endpoints
// included, times a finite transverse grid. Flat index is t * n_theta + j.
class MassShellGrid {
public:
    MassShellGrid(double mass, double theta_min, double theta_max, int n_theta,
                  std::vector<TransversePoint> transverse = {TransversePoint{}});

    static MassShellGrid default_1p1(double mass = 1.0) { return {mass, -16.0, 16.0, 1024}; }

    double mass() const { return mass_; }
    double theta_min() const { return theta_min_; }
    double theta_max() const { return theta_max_; }
    int n_theta() const { return n_theta_; }
    int n_transverse() const { return static_cast<int>(transverse_.size()); }
    int size() const { return n_theta_ * n_transverse(); }
    double dtheta() const { return (theta_max_ - theta_min_) / (n_theta_ - 1); }
    double theta(int j) const { return theta_min_ + j * dtheta(); }
    int index(int j, int t) const { return t * n_theta_ + j; }
    const TransversePoint& transverse(int t) const { return transverse_[t]; }
    const std::vector<TransversePoint>& transverse_points() const { return transverse_; }
    double m_perp(int t) const;

    bool symmetric(double tol = 1e-12) const;
    // Index of the transverse point (p1, p2), or -1.
    int transverse_index(double p1, double p2, double tol = 1e-10) const;
    bool same_as(const MassShellGrid& o) const;

private:
    double mass_;
    double theta_min_;
    double theta_max_;
    int n_theta_;
    std::vector<TransversePoint> transverse_;
};

using GridPtr = std::shared_ptr<const MassShellGrid>;

FourVector shell_point(const MassShellGrid& g, int j, int t);
ComplexFourVector shell_point_complex(const MassShellGrid& g, cplx z, int t);

// Value a * exp(e); keeps huge or tiny analytic continuations representable
// until the exponents of products have been combined.
struct ExpValue {
    cplx e{0.0, 0.0};
    cplx a{0.0, 0.0};

    cplx value() const { return a == cplx(0.0, 0.0) ? cplx(0.0, 0.0) : a * std::exp(e); }
};

ExpValue operator+(const ExpValue& x, const ExpValue& y);

// Closed-form wave function holomorphic in z = theta + i rho for
// im_lo < rho < im_hi, indexed by transverse point.
struct AnalyticFamily {
    std::string description;
    std::function<ExpValue(cplx, int)> eval;
    double im_lo = -std::numeric_limits<double>::infinity();
    double im_hi = std::numeric_limits<double>::infinity();

    cplx operator()(cplx z, int t) const { return eval(z, t).value(); }
    bool holomorphic_on(double rho_lo, double rho_hi) const { return im_lo < rho_lo && rho_hi < im_hi; }
};

using FamilyPtr = std::shared_ptr<const AnalyticFamily>;

struct WaveFunction {
    GridPtr grid;
    std::vector<cplx> samples;
    FamilyPtr family;  // optional closed form linked to the samples

    WaveFunction() = default;
    WaveFunction(GridPtr g, std::vector<cplx> s, FamilyPtr f = nullptr);
    static WaveFunction zero(GridPtr g);

    int size() const { return static_cast<int>(samples.size()); }
    cplx at(int j, int t = 0) const { return samples[grid->index(j, t)]; }
};

WaveFunction operator+(const WaveFunction& x, const WaveFunction& y);
WaveFunction operator-(const WaveFunction& x, const WaveFunction& y);
WaveFunction operator*(cplx s, const WaveFunction& x);
// Same samples with the closed form dropped.
WaveFunction strip_family(const WaveFunction& x);

enum class FamilyTag { gaussian, sech, rational };

struct FamilyParams {
    FamilyTag tag = FamilyTag::gaussian;
    double center = 0.0;
    double width = 1.0;           // gaussian: exp(-(z - c)^2 / (2 w^2))
    double scale = 0.25;          // sech: sech(scale * (z - c))
    std::vector<cplx> poles;      // rational: prod 1 / ((z - z_k)(z - conj z_k))
    cplx amplitude{1.0, 0.0};
    std::vector<cplx> transverse_coeffs;  // per transverse point, default all 1
};

// Throws SingularityInStrip if a singularity lies in |Im z| <= pi.
std::pair<FamilyPtr, WaveFunction> make_analytic(const FamilyParams& params, GridPtr grid);
WaveFunction sample_family(const FamilyPtr& f, GridPtr grid);

// |df/dx + i df/dy| / (|f'| + |f| + tiny) by central differences.
double cauchy_riemann_residual(const AnalyticFamily& f, cplx z, int t, double h = 1e-4);

struct InnerProductReport {
    cplx value;
    std::string rule;
    double error_estimate = 0.0;
};

// Trapezoid in theta times transverse weights, pairwise summation.
// Throws GridMismatch.
InnerProductReport inner_product(const WaveFunction& phi, const WaveFunction& psi);
double norm(const WaveFunction& phi);
double max_abs(const WaveFunction& phi);
// ||x - y|| / ||y||, or ||x|| when y vanishes.
double relative_distance(const WaveFunction& x, const WaveFunction& y);

// Largest |phi| on the first and last rapidity samples; throws BoundaryDecay
// above the threshold.
double edge_magnitude(const WaveFunction& phi);
void check_edge_decay(const WaveFunction& phi, double threshold = 1e-30);

WaveFunction white_noise(GridPtr grid, std::uint64_t seed);

void write_csv(const WaveFunction& phi, std::ostream& os);

// Action of a homogeneous transform on shell coordinates:
// (d(Lambda) phi)(theta, t) = phi(orientation * theta + shift, perm[t]).
struct ShellAction {
    int orientation = 1;
    double shift = 0.0;
    std::vector<int> perm;
};

// Throws UnsupportedTransform outside the x3-boost / transverse-rotation /
// pi-flip subgroup or when the transverse grid is not mapped onto itself.
ShellAction shell_action(const LorentzTransform& lambda, const MassShellGrid& grid);

// Algebra of closed forms, mirroring the operators on samples.
FamilyPtr family_translate(const FamilyPtr& f, const FourVector& a, GridPtr grid);   // e^{i<p(z),a>} f
FamilyPtr family_homogeneous(const FamilyPtr& f, const ShellAction& act);           // f(o z + c, perm t)
FamilyPtr family_shift(const FamilyPtr& f, cplx tau);                               // f(z + tau)
FamilyPtr family_pct(const FamilyPtr& f);                                           // conj f(conj z)
FamilyPtr family_scale(const FamilyPtr& f, cplx s);
FamilyPtr family_sum(const FamilyPtr& f, const FamilyPtr& g);

}  // namespace modloc
