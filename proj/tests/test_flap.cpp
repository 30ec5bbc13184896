#include <gtest/gtest.h>

#include "modloc/errors.hpp"
#include "modloc/flap.hpp"
#include "oracles.hpp"

using namespace modloc;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (double e : v) x(i++) = e;
    return x;
}

ComplexVector cvec(std::initializer_list<cplx> v) {
    ComplexVector x(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (cplx e : v) x(i++) = e;
    return x;
}

SampledDistribution one_sided_exponential() {
    return distribution_from_json(nlohmann::json::parse(
        R"({"n": 1, "cells": [{"lo": [0], "hi": ["inf"], "density": "exp", "rate": [-1]}]})"));
}

}  // namespace

TEST(Flap, PointMassTransform) {
    const auto u = point_mass(vec({0.7}), cplx(2.0, -1.0));
    for (cplx z : {cplx(0.0, 0.0), cplx(1.3, 0.4), cplx(-2.0, -3.0)}) {
        const cplx expect = cplx(2.0, -1.0) * std::exp(cplx(0, -1) * 0.7 * z);
        EXPECT_LT(std::abs(fl_transform(u, cvec({z})) - expect), 1e-14 * std::abs(expect));
    }
}

TEST(Flap, IntervalTransformMatchesHandIntegral) {
    const auto u = interval_indicator(-1.0, 1.0);
    EXPECT_NEAR(std::abs(fl_transform(u, cvec({0.0})) - 2.0), 0.0, 1e-15);
    for (cplx z : {cplx(1e-7, 0.0), cplx(0.5, 0.0), cplx(3.0, 2.0), cplx(0.0, -5.0), cplx(-8.0, 0.1)}) {
        const cplx expect = oracle::interval_transform(z, -1.0, 1.0);
        EXPECT_LT(std::abs(fl_transform(u, cvec({z})) - expect), 1e-12 * (1 + std::abs(expect))) << z;
    }
}

TEST(Flap, DerivativeAtom) {
    // u = d/dx delta_0 gives u^(zeta) = i zeta.
    auto j = nlohmann::json::parse(R"({"n": 1, "atoms": [{"x": [0], "deriv": [1]}], "order": 1})");
    const auto u = distribution_from_json(j);
    EXPECT_LT(std::abs(fl_transform(u, cvec({cplx(2.0, 1.0)})) - cplx(0, 1) * cplx(2.0, 1.0)), 1e-15);
    j["order"] = 0;
    EXPECT_THROW(distribution_from_json(j), ConfigError);
}

TEST(Flap, OneSidedExponential) {
    const auto u = one_sided_exponential();
    EXPECT_FALSE(u.compact());
    for (cplx z : {cplx(0.0, 0.0), cplx(2.0, 0.5), cplx(-1.0, -4.0)})
        EXPECT_LT(std::abs(fl_transform(u, cvec({z})) - oracle::one_sided_exponential_transform(z)), 1e-13);
    EXPECT_THROW(fl_transform(u, cvec({cplx(0.0, 1.5)})), NotInDomain);
}

TEST(Flap, TwoDimensionalProductCell) {
    const auto u = distribution_from_json(nlohmann::json::parse(
        R"({"n": 2, "cells": [{"lo": [-1, 0], "hi": [1, 2], "w": [0, 1]}]})"));
    const ComplexVector z = cvec({cplx(0.3, 0.2), cplx(-1.1, 0.4)});
    const cplx expect = cplx(0, 1) * oracle::interval_transform(z(0), -1, 1) * oracle::interval_transform(z(1), 0, 2);
    EXPECT_LT(std::abs(fl_transform(u, z) - expect), 1e-13);
}

TEST(Flap, DistributionValidation) {
    EXPECT_THROW(distribution_from_json(nlohmann::json::parse(R"({"n": 3})")), ConfigError);
    EXPECT_THROW(distribution_from_json(nlohmann::json::parse(
                     R"({"n": 1, "cells": [{"lo": [2], "hi": [1]}]})")),
                 ConfigError);
    EXPECT_THROW(distribution_from_json(nlohmann::json::parse(
                     R"({"n": 1, "atoms": [{"x": [3]}], "hull": {"dim": 1, "halfspaces": [{"n": [1], "c": 1}]}})")),
                 ConfigError);
    const auto u = interval_indicator(-1, 2);
    const auto back = distribution_from_json(u.to_json());
    EXPECT_LT(std::abs(fl_transform(back, cvec({cplx(0.4, -0.7)})) - fl_transform(u, cvec({cplx(0.4, -0.7)}))), 1e-15);
}

TEST(Flap, PwsPassesForCompactSupport) {
    const BoundReport point = pws_check(point_mass(vec({0.7})), default_tube_grid(1));
    EXPECT_TRUE(point.pass);
    EXPECT_NEAR(point.c, 1.0, 1e-12);
    const BoundReport interval = pws_check(interval_indicator(-1, 1), default_tube_grid(1));
    EXPECT_TRUE(interval.pass) << interval.to_json().dump();
    EXPECT_NEAR(interval.c, 2.0, 1e-9);
    const BoundReport plane = pws_check(point_mass(vec({0.3, -0.4})), default_tube_grid(2));
    EXPECT_TRUE(plane.pass);
}

TEST(Flap, PwsFailsForTooSmallHull) {
    PwsOptions o;
    o.k = box_region(vec({-0.5}), vec({0.5}));
    EXPECT_FALSE(pws_check(interval_indicator(-1, 1), default_tube_grid(1), o).pass);
}

TEST(Flap, HormanderRegion) {
    const PolyRegion r = hormander_cone_estimate(one_sided_exponential());
    EXPECT_TRUE(r.contains(vec({1.0}), 0.0));
    EXPECT_TRUE(r.contains(vec({-30.0}), 0.0));
    EXPECT_FALSE(r.contains(vec({1.01}), 0.0));
    EXPECT_TRUE(is_tempered(one_sided_exponential(), vec({0.5})));

    const auto two_sided = distribution_from_json(nlohmann::json::parse(
        R"({"n": 1, "cells": [{"lo": [0], "hi": ["inf"], "density": "exp", "rate": [-1]},
                              {"lo": ["-inf"], "hi": [0], "density": "exp", "rate": [2]}]})"));
    const PolyRegion r2 = hormander_cone_estimate(two_sided);
    EXPECT_TRUE(r2.contains(vec({-2.0}), 0.0));
    EXPECT_FALSE(r2.contains(vec({-2.1}), 0.0));
    EXPECT_EQ(hormander_cone_estimate(interval_indicator(0, 1)).halfspaces().size(), 0u);

    const auto opaque = distribution_from_json(nlohmann::json::parse(
        R"({"n": 1, "cells": [{"lo": [0], "hi": ["inf"], "density": "gauss"}]})"));
    EXPECT_THROW(hormander_cone_estimate(opaque), UnsupportedDensity);
}

TEST(Flap, SupportFromGrowthRecoversInterval) {
    const auto u = interval_indicator(-0.4, 1.3);
    const TubeFunction f = [&](const ComplexVector& z) { return fl_transform(u, z); };
    const SupportEstimate est = support_from_growth(f, {vec({1.0}), vec({-1.0})}, geometric_radii(2, 50, 12));
    ASSERT_EQ(est.h.size(), 2u);
    EXPECT_NEAR(est.h[0].second, oracle::interval_support(-0.4, 1.3, 1.0), 1e-2 * 1.3);
    EXPECT_NEAR(est.h[1].second, oracle::interval_support(-0.4, 1.3, -1.0), 1e-2 * 0.4);
    EXPECT_TRUE(est.region.contains(vec({1.25})));
    EXPECT_FALSE(est.region.contains(vec({1.4})));
    const TubeFunction zero = [](const ComplexVector&) { return cplx(0.0, 0.0); };
    EXPECT_THROW(support_from_growth(zero, {vec({1.0})}, geometric_radii(2, 50, 12)), ZeroFunction);
}

TEST(Flap, EpsteinInverseAndControl) {
    Cone upper = nonnegative_orthant(1);
    const std::vector<Eigen::VectorXd> m{vec({0.5}), vec({1.0}), vec({2.0})};
    const TubeFunction inv = [](const ComplexVector& z) { return 1.0 / z(0); };
    const BoundReport ok = epstein_bound_check(inv, upper, m, XiGrid{}, 1);
    EXPECT_TRUE(ok.pass) << ok.to_json().dump();
    EXPECT_NEAR(ok.c, 2.0, 1e-9);

    const TubeFunction bad = [](const ComplexVector& z) { return std::exp(cplx(0, 1) * z(0) * z(0)); };
    EXPECT_FALSE(epstein_bound_check(bad, upper, m, XiGrid{}, 1).pass);

    EXPECT_THROW(epstein_bound_check(inv, upper, {vec({-1.0})}, XiGrid{}, 1), ConfigError);
}

TEST(Flap, EpsteinProbeIncrementsShrink) {
    const TubeFunction inv = [](const ComplexVector& z) { return 1.0 / (z(0) + cplx(0, 1)); };
    EpsteinOptions o;
    o.probe_eta0 = 1.0;
    const auto probes = epstein_probe(inv, 1.0, o);
    ASSERT_EQ(probes.size(), 3u);
    for (const auto& p : probes) {
        EXPECT_TRUE(p.monotone) << p.to_json().dump();
        EXPECT_EQ(p.eta.size(), 11u);
    }
}

TEST(Flap, CauchyReconstructionOneDimension) {
    const TubeFunction f = [](const ComplexVector& z) { return oracle::shifted_inverse(z(0), cplx(0, 2)); };
    const ComplexVector target = cvec({cplx(0.3, 1.0)});
    const CauchyResult r = cauchy_tube_reconstruct(f, vec({0.5}), vec({1.5}), target);
    const cplx expect = oracle::shifted_inverse(target(0), cplx(0, 2));
    EXPECT_LT(std::abs(r.value - expect), 1e-10);
    EXPECT_LE(r.error_estimate, 1e-4);

    CauchyOptions coarse;
    coarse.n_points = 21;
    EXPECT_THROW(cauchy_tube_reconstruct(f, vec({0.5}), vec({1.5}), target, coarse), InsufficientSampling);
    EXPECT_THROW(cauchy_tube_reconstruct(f, vec({0.5}), vec({1.5}), cvec({cplx(0.0, 2.0)})), Error);
}

TEST(Flap, CauchyReconstructionTwoDimensions) {
    const TubeFunction f = [](const ComplexVector& z) {
        return oracle::shifted_inverse(z(0), cplx(0, 2)) * oracle::shifted_inverse(z(1), cplx(0.5, 3));
    };
    CauchyOptions o;
    o.n_points = 161;
    const ComplexVector target = cvec({cplx(0.3, 1.0), cplx(-0.2, 0.8)});
    const CauchyResult r = cauchy_tube_reconstruct(f, vec({0.5, 0.5}), vec({1.5, 1.5}), target, o);
    EXPECT_LT(std::abs(r.value - f(target)), 1e-6);
}

TEST(Flap, TubeGridDoubling) {
    const TubeGrid g = default_tube_grid(1);
    const TubeGrid d = g.doubled();
    EXPECT_DOUBLE_EQ(d.xi_max, 2 * g.xi_max);
    EXPECT_EQ(d.n_xi, 4 * g.n_xi - 3);
    EXPECT_GT(d.radii.back(), g.radii.back());
    EXPECT_EQ(g.xi_points().size(), static_cast<size_t>(g.n_xi));
    TubeGrid coned = g;
    coned.cone = nonnegative_orthant(1);
    EXPECT_THROW(coned.validate(), ConfigError);
}
