#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "modloc/geometry.hpp"

namespace modloc {

// {x : <n, x>_E <= c}
struct HalfSpace {
    Eigen::VectorXd n;
    double c = 0.0;

    bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const { return n.dot(x) <= c + tol; }
};

struct VRep {
    std::vector<Eigen::VectorXd> vertices;
    std::vector<Eigen::VectorXd> rays;  // includes both signs of every lineality direction
};

class PolyRegion {
public:
    PolyRegion() = default;
    PolyRegion(int dim, std::vector<HalfSpace> hs);

    int dim() const { return dim_; }
    const std::vector<HalfSpace>& halfspaces() const { return hs_; }
    const std::optional<VRep>& vrep() const { return vrep_; }
    void set_vrep(VRep v) { vrep_ = std::move(v); }

    bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
    bool contains(const FourVector& x, double tol = 1e-9) const { return contains(Eigen::VectorXd(x.eigen()), tol); }

    Eigen::MatrixXd a() const;
    Eigen::VectorXd b() const;

private:
    int dim_ = 4;
    std::vector<HalfSpace> hs_;
    std::optional<VRep> vrep_;
};

struct Wedge {
    PoincareElement frame;
    PolyRegion region;  // closed wedge

    bool contains(const FourVector& x, double tol = 1e-9) const { return region.contains(x, tol); }
};

Wedge standard_wedge();
Wedge make_wedge(const PoincareElement& frame);

PolyRegion box_region(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
PolyRegion point_region(const Eigen::VectorXd& a);
PolyRegion whole_space(int dim);

PolyRegion transform_region(const PoincareElement& l, const PolyRegion& r);

// Concatenate, prune redundant half-spaces by LP, enumerate vertices and rays
// when there are at most 64 half-spaces. Throws EmptyRegion.
PolyRegion intersect_regions(const std::vector<PolyRegion>& regions);

// Vertices and extreme rays of a nonempty polyhedron; lineality handled
// explicitly. Throws EmptyRegion.
VRep enumerate_vrep(const PolyRegion& r, double tol = 1e-9);

bool is_empty(const PolyRegion& r);

// sup_{x in R} <x, xi>_E, or +infinity. Throws EmptyRegion.
double support_function(const PolyRegion& r, const Eigen::VectorXd& xi);
// sup_{x in R} <x, xi> with the Minkowski pairing (dimension 4 only).
double support_function_minkowski(const PolyRegion& r, const FourVector& xi);

// Region {x : <x, xi_k>_E <= h_k} from sampled support values.
PolyRegion reconstruct_from_support(const std::vector<std::pair<Eigen::VectorXd, double>>& samples);

// Convex cone given by <n_i, eta> (< or <=) 0 and <e_j, eta> = 0.
struct Cone {
    int dim = 4;
    std::vector<Eigen::VectorXd> normals;
    std::vector<Eigen::VectorXd> equalities;
    bool open = false;
};

// Gamma+ = {eta : eta- < 0, eta+ > 0, eta1 = eta2 = 0} with eta+- = eta0 +- eta3.
Cone gamma_plus();
Cone nonnegative_orthant(int dim);
Cone transform_cone(const LorentzTransform& l, const Cone& c);  // image {L eta}
bool cone_contains(const Cone& c, const Eigen::VectorXd& eta, double tol = 1e-12);
bool cone_contains(const Cone& c, const FourVector& eta, double tol = 1e-12);
std::vector<Eigen::VectorXd> cone_generators(const Cone& c);  // of the closure
Cone dual_cone(const Cone& c);  // closed {y : <y, x>_E >= 0 for x in c}

nlohmann::json region_to_json(const PolyRegion& r);
PolyRegion region_from_json(const nlohmann::json& j);

}  // namespace modloc
