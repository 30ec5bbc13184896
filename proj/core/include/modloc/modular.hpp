#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "modloc/geometry.hpp"
#include "modloc/shell.hpp"
#include "modloc/wigner.hpp"

namespace modloc {

enum class Backend { closed_form, spectral };
enum class Sign { plus = 1, minus = -1 };

const char* to_string(Backend b);
const char* to_string(Sign s);
Backend backend_from_string(const std::string& s);
Sign sign_from_string(const std::string& s);

struct SpectralOptions {
    double noise_floor = 1e-13;      // modes below floor * max|c| are zeroed before amplification
    double tail_threshold = 1e-10;   // amplified tail mass ratio above this means NotInDomain
};

struct StripContinuation {
    Backend backend = Backend::closed_form;
    cplx tau;
    WaveFunction result;
    double decay_exponent = 0.0;  // effective exponential decay rate of the source spectrum
    double tail_ratio = 0.0;      // amplified mass beyond half the Nyquist frequency, spectral only
};

// Effective decay rate ln(max|c| / |c(k_hi)|) / k_hi of the rapidity
// spectrum, k_hi the highest mode above the noise floor (min over fibers).
double spectral_decay_exponent(const WaveFunction& phi, double noise_floor = 1e-13);

// Closed form of U_L(tau) phi. Throws NotInDomain when the family is not
// holomorphic on the strip between 0 and Im tau.
FamilyPtr continued_family(const WaveFunction& phi, const PoincareElement& frame, cplx tau);

// U_L(tau) phi for |Im tau| <= pi, computed as T(a) d(I) U(tau) d(I)^{-1} T(-a).
// Throws NotInDomain.
StripContinuation continue_boost(const WaveFunction& phi, const PoincareElement& frame, cplx tau,
                                 Backend backend = Backend::closed_form, const SpectralOptions& opts = {});

WaveFunction delta_half(const PoincareElement& frame, Sign sign, const WaveFunction& phi,
                        Backend backend = Backend::closed_form, const SpectralOptions& opts = {});

// s_{L,+-} = j_L delta^{1/2}_{L,+-}; antilinear.
WaveFunction s_op(const PoincareElement& frame, Sign sign, const WaveFunction& phi,
                  Backend backend = Backend::closed_form, const SpectralOptions& opts = {});

// Relative sup error max|a - b| / max|b| of the two backends at tau.
double backend_agreement(const WaveFunction& phi, const PoincareElement& frame, cplx tau,
                         const SpectralOptions& opts = {});

struct Relation {
    std::string name;
    double residual = 0.0;
};

struct ModularReport {
    PoincareElement wedge;
    Sign sign = Sign::plus;
    Backend backend = Backend::closed_form;
    std::vector<Relation> relations;
    std::vector<Relation> controls;  // reported, never asserted
    double decay_exponent = 0.0;

    double max_residual() const;
    nlohmann::json to_json() const;
};

struct TomitaOptions {
    Backend backend = Backend::closed_form;
    int flow_steps = 3;  // U_L(t) probe at t = flow_steps * dtheta
    std::optional<PoincareElement> mismatched_frame;
    SpectralOptions spectral;
};

ModularReport tomita_check(const PoincareElement& frame, const std::vector<WaveFunction>& battery, Sign sign,
                           const TomitaOptions& opts = {});

// Five gaussians with widths 1.25..1.3 and centers |c| <= 0.5, transported
// into the frame as T(a) d(I) g.
std::vector<WaveFunction> gaussian_battery(GridPtr grid, const PoincareElement& frame = PoincareElement::identity());

nlohmann::json frame_to_json(const PoincareElement& l);

}  // namespace modloc
