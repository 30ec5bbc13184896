#include <gtest/gtest.h>

#include "modloc/errors.hpp"
#include "modloc/modular.hpp"
#include "oracles.hpp"

using namespace modloc;

namespace {

GridPtr default_grid() { return std::make_shared<const MassShellGrid>(MassShellGrid::default_1p1()); }

WaveFunction gaussian(GridPtr g, double c, double w, cplx amp = 1.0) {
    FamilyParams p;
    p.center = c;
    p.width = w;
    p.amplitude = amp;
    return make_analytic(p, g).second;
}

double rel_sup(const WaveFunction& a, const WaveFunction& b) {
    double d = 0.0, s = 0.0;
    for (size_t i = 0; i < a.samples.size(); ++i) {
        d = std::max(d, std::abs(a.samples[i] - b.samples[i]));
        s = std::max(s, std::abs(b.samples[i]));
    }
    return d / s;
}

}  // namespace

TEST(Modular, DeltaHalfIsContinuationToUpperEdge) {
    // delta^{1/2}_+ g(theta) = g(theta + i pi) for the standard wedge.
    const auto g = default_grid();
    const WaveFunction phi = gaussian(g, 0.25, 1.3, cplx(0.6, 0.8));
    const WaveFunction out = delta_half(PoincareElement::identity(), Sign::plus, phi);
    const WaveFunction minus = delta_half(PoincareElement::identity(), Sign::minus, phi);
    for (int j = 0; j < g->n_theta(); j += 17) {
        const cplx up = oracle::gaussian(cplx(g->theta(j), oracle::pi), 0.25, 1.3, cplx(0.6, 0.8));
        const cplx down = oracle::gaussian(cplx(g->theta(j), -oracle::pi), 0.25, 1.3, cplx(0.6, 0.8));
        EXPECT_LT(std::abs(out.at(j) - up), 1e-12 * std::abs(up) + 1e-300);
        EXPECT_LT(std::abs(minus.at(j) - down), 1e-12 * std::abs(down) + 1e-300);
    }
}

TEST(Modular, TranslatedFrameAddsDoublePhase) {
    // p(theta + i pi) = -p(theta) on the (0,0) fiber, so the frame phases combine to e^{2i<p,a>}.
    const auto g = default_grid();
    const WaveFunction base = gaussian(g, 0.0, 1.25);
    const FourVector a(0.3, 0.0, 0.0, 0.8);
    const PoincareElement frame = PoincareElement::translation(a);
    const WaveFunction out = delta_half(frame, Sign::plus, base);
    for (int j = 300; j < 724; j += 13) {
        const auto p = oracle::shell(1.0, g->theta(j), 0, 0);
        const cplx phase = oracle::translation_phase(p, {a[0], a[1], a[2], a[3]});
        const cplx expect = phase * phase * oracle::gaussian(cplx(g->theta(j), oracle::pi), 0.0, 1.25);
        EXPECT_LT(std::abs(out.at(j) - expect), 1e-10 * std::abs(expect));
    }
}

TEST(Modular, SquaresToIdentityAndAntilinear) {
    const auto g = default_grid();
    for (const auto& frame : {PoincareElement::identity(), PoincareElement({0.0, 0.0, 0.0, 1.0}, rotation_z(0.4))}) {
        for (const auto& phi : gaussian_battery(g, frame)) {
            for (Sign s : {Sign::plus, Sign::minus}) {
                const WaveFunction sphi = s_op(frame, s, phi);
                EXPECT_LT(relative_distance(s_op(frame, s, sphi), phi), 1e-8);
                const cplx lam(-0.3, 1.7);
                EXPECT_LT(relative_distance(s_op(frame, s, lam * phi), std::conj(lam) * sphi), 1e-12);
            }
        }
    }
}

TEST(Modular, RelationReportOnBattery) {
    const auto g = default_grid();
    const PoincareElement frame = PoincareElement::identity();
    const ModularReport rep = tomita_check(frame, gaussian_battery(g, frame), Sign::plus);
    EXPECT_EQ(rep.relations.size(), 5u);
    EXPECT_LE(rep.max_residual(), 1e-8);
    const auto j = rep.to_json();
    EXPECT_TRUE(j.contains("relations"));
}

TEST(Modular, MismatchedFrameIsReportedNotAsserted) {
    const auto g = default_grid();
    TomitaOptions opts;
    opts.mismatched_frame = PoincareElement::translation(FourVector(0, 0, 0, -1));
    const ModularReport rep = tomita_check(PoincareElement::identity(), gaussian_battery(g), Sign::plus, opts);
    ASSERT_EQ(rep.controls.size(), 1u);
    EXPECT_GT(rep.controls[0].residual, 1e-3);
    EXPECT_LE(rep.max_residual(), 1e-8);
}

TEST(Modular, StripEdgeContinuity) {
    const auto g = default_grid();
    const WaveFunction phi = gaussian(g, -0.5, 1.25, cplx(1.0, -0.5));
    const PoincareElement frame = PoincareElement::identity();
    const WaveFunction edge = continue_boost(phi, frame, cplx(0.0, oracle::pi)).result;
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const WaveFunction inner = continue_boost(phi, frame, cplx(0.0, oracle::pi - eps)).result;
        const double d = rel_sup(inner, edge);
        EXPECT_LT(d, prev);
        EXPECT_LT(d, 50.0 * eps);
        prev = d;
    }
}

TEST(Modular, BackendsAgreeOnStripGrid) {
    const auto g = default_grid();
    const WaveFunction phi = gaussian(g, 0.0, 1.25);
    for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0})
        for (double y : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            const cplx tau(x, y * oracle::pi);
            EXPECT_LE(backend_agreement(phi, PoincareElement::identity(), tau), 1e-6) << tau;
        }
}

TEST(Modular, SpectralBackendMatchesOracleAtEdge) {
    const auto g = default_grid();
    const WaveFunction phi = strip_family(gaussian(g, 0.0, 1.3));
    const StripContinuation sc =
        continue_boost(phi, PoincareElement::identity(), cplx(0.0, oracle::pi), Backend::spectral);
    double err = 0.0, scale = 0.0;
    for (int j = 0; j < g->n_theta(); ++j) {
        const cplx e = oracle::gaussian(cplx(g->theta(j), oracle::pi), 0.0, 1.3);
        err = std::max(err, std::abs(sc.result.at(j) - e));
        scale = std::max(scale, std::abs(e));
    }
    EXPECT_LE(err / scale, 1e-6);
    EXPECT_LE(sc.tail_ratio, 1e-10);
}

TEST(Modular, DomainFailures) {
    const auto g = default_grid();
    const WaveFunction noise = white_noise(g, 3);
    EXPECT_THROW(continue_boost(noise, PoincareElement::identity(), cplx(0.0, oracle::pi), Backend::spectral),
                 NotInDomain);
    const WaveFunction phi = gaussian(g, 0.0, 1.25);
    EXPECT_THROW(continue_boost(phi, PoincareElement::identity(), cplx(0.0, 3.5)), NotInDomain);
    EXPECT_THROW(continue_boost(noise, PoincareElement::identity(), cplx(0.0, 1.0), Backend::closed_form), Error);
    // Real shifts are always in the domain.
    EXPECT_NO_THROW(continue_boost(noise, PoincareElement::identity(), cplx(0.3, 0.0), Backend::spectral));
}

TEST(Modular, NarrowStripFamilyNotInDomain) {
    const auto g = default_grid();
    FamilyParams p;
    p.tag = FamilyTag::rational;
    p.poles = {cplx(0.0, 3.5)};
    auto [f, phi] = make_analytic(p, g);
    // Holomorphic for |Im z| < 3.5: shifting by i pi keeps it, but the closed form of
    // a second shift leaves the strip.
    const FamilyPtr once = continued_family(phi, PoincareElement::identity(), cplx(0.0, oracle::pi));
    EXPECT_FALSE(once->holomorphic_on(0.0, oracle::pi));
    EXPECT_TRUE(once->holomorphic_on(-oracle::pi, 0.0));
}

TEST(Modular, StringConversions) {
    EXPECT_EQ(sign_from_string("+"), Sign::plus);
    EXPECT_EQ(sign_from_string("minus"), Sign::minus);
    EXPECT_EQ(backend_from_string("spectral"), Backend::spectral);
    EXPECT_THROW(backend_from_string("fast"), ConfigError);
    EXPECT_THROW(sign_from_string("0"), ConfigError);
}
