#pragma once

// Scalar massive representation on the discretized shell:
//   U(a, Lambda) phi(p) = e^{i<p,a>} phi(Lambda^{-1} p),   Theta phi = conj(phi).

#include <memory>
#include <vector>

#include "modloc/geometry.hpp"
#include "modloc/shell.hpp"

namespace modloc {

enum class ResamplePolicy { exact_only, band_limited };

// phi(theta + t) per transverse fiber, zero beyond the grid. Off-grid shifts
// use a discrete Fourier phase (band-limited) after validating edge decay.
WaveFunction shift_rapidity(const WaveFunction& phi, double t, ResamplePolicy policy = ResamplePolicy::band_limited);

bool exact_on_grid(const LorentzTransform& lambda, const MassShellGrid& grid);

WaveFunction apply_translation(const FourVector& a, const WaveFunction& phi);
WaveFunction apply_homogeneous(const LorentzTransform& lambda, const WaveFunction& phi,
                               ResamplePolicy policy = ResamplePolicy::band_limited);
WaveFunction apply_poincare(const PoincareElement& l, const WaveFunction& phi,
                            ResamplePolicy policy = ResamplePolicy::band_limited);
WaveFunction apply_pct(const WaveFunction& phi);

// U_L(t) = U(conjugated_boost(L, t)).
WaveFunction wedge_boost_group(const PoincareElement& frame, double t, const WaveFunction& phi,
                               ResamplePolicy policy = ResamplePolicy::band_limited);

// j_L = U((1 + M) a, M) Theta with M = I Upsilon I^{-1}.
WaveFunction wedge_involution(const PoincareElement& frame, const WaveFunction& phi,
                              ResamplePolicy policy = ResamplePolicy::band_limited);

class RepOperator {
public:
    enum class Kind { translation, homogeneous, pct, composite };

    static RepOperator translation(const FourVector& a);
    static RepOperator homogeneous(const LorentzTransform& lambda);
    static RepOperator pct();
    // Applied right to left: composite({A, B}) phi = A(B(phi)).
    static RepOperator composite(std::vector<RepOperator> factors);

    Kind kind() const { return kind_; }
    bool antiunitary() const;
    bool exact_on(const MassShellGrid& grid) const;
    WaveFunction apply(const WaveFunction& phi, ResamplePolicy policy = ResamplePolicy::band_limited) const;

private:
    Kind kind_ = Kind::pct;
    FourVector a_;
    LorentzTransform lambda_;
    std::vector<RepOperator> factors_;
};

}  // namespace modloc
