#pragma once

// Minkowski geometry with metric g = diag(1, -1, -1, -1).
//
// Lorentz matrices act actively on coordinate columns. boost3(t) is
//
//     [ cosh t   0  0  -sinh t ]
//     [   0      1  0     0    ]
//     [   0      0  1     0    ]
//     [ -sinh t  0  0   cosh t ]
//
// and Lambda^{-1} = g Lambda^T g.

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace modloc {

using cplx = std::complex<double>;

struct FourVector {
    std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};

    FourVector() = default;
    FourVector(double x0, double x1, double x2, double x3) : x{x0, x1, x2, x3} {}
    explicit FourVector(const Eigen::Vector4d& v) : x{v(0), v(1), v(2), v(3)} {}

    double& operator[](int i) { return x[i]; }
    double operator[](int i) const { return x[i]; }
    Eigen::Vector4d eigen() const { return {x[0], x[1], x[2], x[3]}; }

    FourVector operator+(const FourVector& o) const;
    FourVector operator-(const FourVector& o) const;
    FourVector operator*(double s) const;
    bool operator==(const FourVector& o) const = default;
};

struct ComplexFourVector {
    std::array<cplx, 4> z{};

    ComplexFourVector() = default;
    ComplexFourVector(cplx z0, cplx z1, cplx z2, cplx z3) : z{z0, z1, z2, z3} {}
    ComplexFourVector(const FourVector& xi, const FourVector& eta);
    explicit ComplexFourVector(const Eigen::Vector4cd& v) : z{v(0), v(1), v(2), v(3)} {}

    cplx& operator[](int i) { return z[i]; }
    cplx operator[](int i) const { return z[i]; }
    Eigen::Vector4cd eigen() const { return {z[0], z[1], z[2], z[3]}; }

    FourVector real() const;  // xi
    FourVector imag() const;  // eta
};

const Eigen::Matrix4d& metric();

struct LorentzTransform {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();

    LorentzTransform() = default;
    explicit LorentzTransform(const Eigen::Matrix4d& mat) : m(mat) {}

    static LorentzTransform identity() { return LorentzTransform(); }

    bool preserves_metric(double tol = 1e-12) const;
    bool is_proper_orthochronous(double tol = 1e-12) const;
    LorentzTransform inverse() const;  // g m^T g
    FourVector apply(const FourVector& v) const;
    LorentzTransform operator*(const LorentzTransform& o) const { return LorentzTransform(m * o.m); }
};

struct ComplexLorentzTransform {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();

    ComplexLorentzTransform() = default;
    explicit ComplexLorentzTransform(const Eigen::Matrix4cd& mat) : m(mat) {}
    explicit ComplexLorentzTransform(const LorentzTransform& real) : m(real.m.cast<cplx>()) {}

    bool preserves_metric(double tol = 1e-12) const;  // complex bilinear, no conjugation
    ComplexLorentzTransform inverse() const;
    ComplexFourVector apply(const ComplexFourVector& v) const;
    ComplexLorentzTransform operator*(const ComplexLorentzTransform& o) const {
        return ComplexLorentzTransform(m * o.m);
    }
};

struct PoincareElement {
    FourVector a;
    LorentzTransform lambda;

    PoincareElement() = default;
    PoincareElement(const FourVector& a_, const LorentzTransform& l) : a(a_), lambda(l) {}

    static PoincareElement identity() { return {}; }
    static PoincareElement translation(const FourVector& a_) { return {a_, LorentzTransform()}; }
};

double minkowski_inner(const FourVector& x, const FourVector& y);
cplx minkowski_inner(const ComplexFourVector& x, const ComplexFourVector& y);
cplx minkowski_inner(const ComplexFourVector& x, const FourVector& y);
double euclidean_inner(const FourVector& x, const FourVector& y);

LorentzTransform boost3(double t);
ComplexLorentzTransform boost3_complex(cplx tau);
LorentzTransform rotation_z(double alpha);  // about the x3 axis
LorentzTransform rotation_z_pi();           // Upsilon = diag(1, -1, -1, 1)
LorentzTransform rotation_x_pi();           // diag(1, 1, -1, -1)
LorentzTransform rotation_y_pi();           // diag(1, -1, 1, -1)

PoincareElement poincare_compose(const PoincareElement& l1, const PoincareElement& l2);
FourVector poincare_apply(const PoincareElement& l, const FourVector& x);
PoincareElement poincare_inverse(const PoincareElement& l);

// ((1 - I Lambda(t) I^{-1}) a, I Lambda(t) I^{-1}) for L = (a, I).
PoincareElement conjugated_boost(const PoincareElement& frame, double t);

double max_abs_diff(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b);
double max_abs_diff(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b);

}  // namespace modloc
