#include <gtest/gtest.h>

#include <sstream>

#include "modloc/errors.hpp"
#include "modloc/localization.hpp"
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

}  // namespace

TEST(Localization, SingleWedgeIsOneOrthogonalProjection) {
    const auto g = default_grid();
    const WaveFunction phi = gaussian(g, 0.3, 1.0, cplx(0.2, 1.0));
    const WedgeFamily fam = make_wedge_family({PoincareElement::identity()});
    const LocalizationResult r = localize(fam, Sign::plus, phi, 1e-10, 50);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 1);
    const WaveFunction direct = orthogonal_projector(PoincareElement::identity(), Sign::plus, phi);
    EXPECT_LT(relative_distance(r.projected, direct), 1e-14);
    EXPECT_TRUE(membership_test(fam, Sign::plus, r.projected, 1e-6).member);
}

TEST(Localization, OrthogonalProjectorProperties) {
    const auto g = default_grid();
    const PoincareElement frame({0.0, 0.0, 0.0, 1.0}, rotation_x_pi());
    const WaveFunction a = gaussian(g, 0.2, 1.1, cplx(1.0, -0.4));
    const WaveFunction b = gaussian(g, -0.6, 0.9, cplx(0.3, 0.8));
    const WaveFunction pa = orthogonal_projector(frame, Sign::plus, a);
    EXPECT_LT(relative_distance(orthogonal_projector(frame, Sign::plus, pa), pa), 1e-12);
    // Real-orthogonal: Re <Pa, b - Pb> = 0 and Pa is at most as long as a. The projector is
    // orthogonal for the plain sum over samples; trapezoid end weights leave a small gap.
    const WaveFunction pb = orthogonal_projector(frame, Sign::plus, b);
    EXPECT_LT(std::abs(inner_product(pa, b - pb).value.real()), 1e-8 * norm(a) * norm(b));
    EXPECT_LE(norm(pa), norm(a) * (1 + 1e-14));
    // Real linear but not complex linear.
    const WaveFunction sum = orthogonal_projector(frame, Sign::plus, a + cplx(2.0, 0.0) * b);
    EXPECT_LT(relative_distance(sum, pa + cplx(2.0, 0.0) * pb), 1e-12);
}

TEST(Localization, OrthogonalAndObliqueProjectorsShareFixedPoints) {
    const auto g = default_grid();
    const PoincareElement frame = PoincareElement::identity();
    const WaveFunction phi = gaussian(g, 0.0, 1.25, cplx(0.5, 0.5));
    const WaveFunction fixed = real_projector(frame, Sign::plus, phi);
    EXPECT_LT(relative_distance(s_op(frame, Sign::plus, fixed), fixed), 1e-8);
    EXPECT_LT(relative_distance(orthogonal_projector(frame, Sign::plus, fixed), fixed), 1e-8);
}

TEST(Localization, DuplicateWedgesMatchSingle) {
    const auto g = default_grid();
    const WaveFunction phi = gaussian(g, -0.2, 1.2, cplx(1.0, 0.5));
    const auto one = localize(make_wedge_family({PoincareElement::identity()}), Sign::plus, phi, 1e-10, 5);
    const auto two = localize(make_wedge_family({PoincareElement::identity(), PoincareElement::identity()}),
                              Sign::plus, phi, 1e-10, 5);
    EXPECT_LT(relative_distance(two.projected, one.projected), 1e-13);
    EXPECT_TRUE(two.converged);
}

TEST(Localization, SlabHistoryIsMonotone) {
    const auto g = default_grid();
    const WaveFunction phi = gaussian(g, 0.0, 1.25, cplx(1.0, 0.3));
    const WedgeFamily fam = slab_family(1.0);
    const LocalizationResult r = localize(fam, Sign::plus, phi, 1e-12, 25);
    ASSERT_EQ(r.history.size(), 25u);
    for (size_t w = 0; w < 2; ++w)
        for (size_t it = 1; it < r.history.size(); ++it)
            EXPECT_LE(r.history[it][w], r.history[it - 1][w] * (1 + 1e-9));
    const auto j = r.to_json(fam);
    EXPECT_EQ(j["residual_history"].size(), 25u);
}

TEST(Localization, ZeroFunctionIsTriviallyLocalized) {
    const auto g = default_grid();
    const LocalizationResult r = localize(slab_family(1.0), Sign::plus, WaveFunction::zero(g), 1e-6, 10);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(norm(r.projected), 0.0);
}

TEST(Localization, MembershipSeparatesRealFromImaginary) {
    const auto g = default_grid();
    const WedgeFamily fam = make_wedge_family({PoincareElement::identity()});
    const WaveFunction member = real_projector(PoincareElement::identity(), Sign::plus, gaussian(g, 0.1, 1.3));
    EXPECT_TRUE(membership_test(fam, Sign::plus, member, 1e-8).member);
    EXPECT_TRUE(membership_test(fam, Sign::plus, cplx(-2.5, 0.0) * member, 1e-8).member);
    const MembershipResult im = membership_test(fam, Sign::plus, cplx(0.0, 1.0) * member, 1e-8);
    EXPECT_FALSE(im.member);
    EXPECT_NEAR(im.residuals[0], 2.0, 1e-6);
}

TEST(Localization, SlabFamilyGeometry) {
    const WedgeFamily fam = slab_family(2.0);
    EXPECT_EQ(fam.vertices.size(), 2u);
    EXPECT_TRUE(fam.region.contains(FourVector(0.0, 5.0, -3.0, 1.0)));
    EXPECT_TRUE(fam.region.contains(FourVector(0.9, 0.0, 0.0, 1.0)));
    EXPECT_FALSE(fam.region.contains(FourVector(1.1, 0.0, 0.0, 1.0)));
    EXPECT_FALSE(fam.region.contains(FourVector(0.0, 0.0, 0.0, 2.5)));
    EXPECT_THROW(make_wedge_family({PoincareElement::identity(),
                                    PoincareElement({0, 0, 0, -1.0}, rotation_x_pi())}),
                 EmptyRegion);
}

TEST(Localization, BoundaryValuesSolveShellEquation) {
    const auto g = default_grid();
    const WaveFunction phi = gaussian(g, 0.0, 1.25);
    const PoincareElement frame({0.2, 0.0, 0.0, 1.0}, rotation_z(0.0));
    const std::vector<cplx> taus{cplx(0, 0.5), cplx(0.3, 1.5), cplx(0, oracle::pi)};
    const TubeSample ts = boundary_function(phi, frame, taus, theta_window(*g, 3.0));
    EXPECT_LE(ts.max_shell_residual(), 1e-12);
    std::ostringstream os;
    ts.write_csv(os);
    EXPECT_NE(os.str().find("re_tau"), std::string::npos);
    EXPECT_LE(factorization_residual(phi, frame, taus, theta_window(*g, 3.0)), 1e-12);
}

TEST(Localization, BoundaryConditionOnStandardWedge) {
    const auto g = default_grid();
    const PoincareElement frame = PoincareElement::identity();
    const WaveFunction member = real_projector(frame, Sign::plus, gaussian(g, 0.2, 1.25, cplx(0.4, 0.9)));
    const auto pts = theta_window(*g, 4.0);
    EXPECT_LE(boundary_condition_check(member, frame, Sign::plus, pts).max_residual, 1e-8);
    EXPECT_GT(boundary_condition_check(cplx(0, 1) * member, frame, Sign::plus, pts).max_residual, 1.0);
}

TEST(Localization, GrowthBoundForWedgeMember) {
    const auto g = default_grid();
    const PoincareElement frame = PoincareElement::identity();
    const WaveFunction phi = real_projector(frame, Sign::plus, gaussian(g, 0.0, 1.25));
    // The constant grows as eta -> 0; a fixed offset keeps the samples off the real boundary.
    GrowthOptions o;
    o.eta_scale = 0.2;
    const BoundReport rep = growth_check_u(phi, frame, make_wedge(frame).region, Sign::plus, o);
    EXPECT_TRUE(rep.pass) << rep.to_json().dump();
    o.eta_scale = 1e-3;
    EXPECT_GT(growth_check_u(phi, frame, make_wedge(frame).region, Sign::plus, o).c_doubled, rep.c);
    EXPECT_GT(rep.samples, 0u);
}
