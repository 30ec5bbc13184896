#pragma once

#include <json.hpp>

namespace modloc::conventions {

inline constexpr const char* kBoostSign =
    "boost3(t) has (0,3)=(3,0)=-sinh t acting actively; U(t)phi(theta) = phi(theta + t)";
inline constexpr const char* kContinuation =
    "delta^{1/2}_+ continues to theta + i*pi (0 <= Im tau <= pi); delta^{1/2}_- to theta - i*pi";
inline constexpr const char* kLightCone = "eta+ = eta0 + eta3, eta- = eta0 - eta3";
inline constexpr const char* kShellPairing = "<p,a> = p0 a0 - p1 a1 - p2 a2 - p3 a3";
inline constexpr const char* kInnerProduct = "conjugate-linear in the first argument, measure dtheta dp1 dp2";
inline constexpr const char* kZetaNorm = "|zeta| = max_j |zeta_j|";

inline nlohmann::json tags(const char* support_pairing = "euclidean") {
    return {
        {"boost_sign", kBoostSign},
        {"continuation", kContinuation},
        {"light_cone", kLightCone},
        {"shell_pairing", kShellPairing},
        {"inner_product", kInnerProduct},
        {"zeta_norm", kZetaNorm},
        {"support_pairing", support_pairing},
    };
}

}  // namespace modloc::conventions
