#include "modloc/geometry.hpp"

#include <cmath>

namespace modloc {

FourVector FourVector::operator+(const FourVector& o) const {
    return {x[0] + o.x[0], x[1] + o.x[1], x[2] + o.x[2], x[3] + o.x[3]};
}

FourVector FourVector::operator-(const FourVector& o) const {
    return {x[0] - o.x[0], x[1] - o.x[1], x[2] - o.x[2], x[3] - o.x[3]};
}

FourVector FourVector::operator*(double s) const {
    return {x[0] * s, x[1] * s, x[2] * s, x[3] * s};
}

ComplexFourVector::ComplexFourVector(const FourVector& xi, const FourVector& eta) {
    for (int i = 0; i < 4; ++i) z[i] = cplx(xi[i], eta[i]);
}

FourVector ComplexFourVector::real() const {
    return {z[0].real(), z[1].real(), z[2].real(), z[3].real()};
}

FourVector ComplexFourVector::imag() const {
    return {z[0].imag(), z[1].imag(), z[2].imag(), z[3].imag()};
}

const Eigen::Matrix4d& metric() {
    static const Eigen::Matrix4d g = Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal();
    return g;
}

bool LorentzTransform::preserves_metric(double tol) const {
    return max_abs_diff(m.transpose() * metric() * m, metric()) <= tol;
}

bool LorentzTransform::is_proper_orthochronous(double tol) const {
    return preserves_metric(tol) && std::abs(m.determinant() - 1.0) <= tol && m(0, 0) >= 1.0 - tol;
}

LorentzTransform LorentzTransform::inverse() const {
    return LorentzTransform(metric() * m.transpose() * metric());
}

FourVector LorentzTransform::apply(const FourVector& v) const {
    return FourVector(Eigen::Vector4d(m * v.eigen()));
}

bool ComplexLorentzTransform::preserves_metric(double tol) const {
    const Eigen::Matrix4cd g = metric().cast<cplx>();
    return max_abs_diff(m.transpose() * g * m, g) <= tol;
}

ComplexLorentzTransform ComplexLorentzTransform::inverse() const {
    const Eigen::Matrix4cd g = metric().cast<cplx>();
    return ComplexLorentzTransform(g * m.transpose() * g);
}

ComplexFourVector ComplexLorentzTransform::apply(const ComplexFourVector& v) const {
    return ComplexFourVector(Eigen::Vector4cd(m * v.eigen()));
}

double minkowski_inner(const FourVector& x, const FourVector& y) {
    return x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3];
}

cplx minkowski_inner(const ComplexFourVector& x, const ComplexFourVector& y) {
    return x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3];
}

cplx minkowski_inner(const ComplexFourVector& x, const FourVector& y) {
    return x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3];
}

double euclidean_inner(const FourVector& x, const FourVector& y) {
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
}

LorentzTransform boost3(double t) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    const double c = std::cosh(t), s = std::sinh(t);
    m(0, 0) = c;
    m(3, 3) = c;
    m(0, 3) = -s;
    m(3, 0) = -s;
    return LorentzTransform(m);
}

ComplexLorentzTransform boost3_complex(cplx tau) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    const cplx c = std::cosh(tau), s = std::sinh(tau);
    m(0, 0) = c;
    m(3, 3) = c;
    m(0, 3) = -s;
    m(3, 0) = -s;
    return ComplexLorentzTransform(m);
}

LorentzTransform rotation_z(double alpha) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    const double c = std::cos(alpha), s = std::sin(alpha);
    m(1, 1) = c;
    m(1, 2) = -s;
    m(2, 1) = s;
    m(2, 2) = c;
    return LorentzTransform(m);
}

LorentzTransform rotation_z_pi() {
    return LorentzTransform(Eigen::Matrix4d(Eigen::Vector4d(1.0, -1.0, -1.0, 1.0).asDiagonal()));
}

LorentzTransform rotation_x_pi() {
    return LorentzTransform(Eigen::Matrix4d(Eigen::Vector4d(1.0, 1.0, -1.0, -1.0).asDiagonal()));
}

LorentzTransform rotation_y_pi() {
    return LorentzTransform(Eigen::Matrix4d(Eigen::Vector4d(1.0, -1.0, 1.0, -1.0).asDiagonal()));
}

PoincareElement poincare_compose(const PoincareElement& l1, const PoincareElement& l2) {
    return {l1.a + l1.lambda.apply(l2.a), l1.lambda * l2.lambda};
}

FourVector poincare_apply(const PoincareElement& l, const FourVector& x) {
    return l.lambda.apply(x) + l.a;
}

PoincareElement poincare_inverse(const PoincareElement& l) {
    const LorentzTransform inv = l.lambda.inverse();
    return {inv.apply(l.a) * -1.0, inv};
}

PoincareElement conjugated_boost(const PoincareElement& frame, double t) {
    const Eigen::Matrix4d& i = frame.lambda.m;
    const Eigen::Matrix4d conj = i * boost3(t).m * frame.lambda.inverse().m;
    const Eigen::Vector4d shift = (Eigen::Matrix4d::Identity() - conj) * frame.a.eigen();
    return {FourVector(shift), LorentzTransform(conj)};
}

double max_abs_diff(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

double max_abs_diff(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace modloc
