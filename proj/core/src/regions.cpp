#include "modloc/regions.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "modloc/errors.hpp"
#include "modloc/lp.hpp"

namespace modloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd v4(const FourVector& v) { return Eigen::VectorXd(v.eigen()); }

HalfSpace hs(const Eigen::VectorXd& n, double c) { return {n, c}; }

// Calls fn(subset) for every k-subset of {0..m-1} in lexicographic order.
void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
    if (k > m) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

void push_unique(std::vector<Eigen::VectorXd>& out, const Eigen::VectorXd& v, double tol) {
    for (const auto& w : out) {
        if ((w - v).norm() <= tol * (1.0 + v.norm())) return;
    }
    out.push_back(v);
}

}  // namespace

PolyRegion::PolyRegion(int dim, std::vector<HalfSpace> hs) : dim_(dim), hs_(std::move(hs)) {}

bool PolyRegion::contains(const Eigen::VectorXd& x, double tol) const {
    for (const auto& h : hs_) {
        if (!h.contains(x, tol)) return false;
    }
    return true;
}

Eigen::MatrixXd PolyRegion::a() const {
    Eigen::MatrixXd m(static_cast<int>(hs_.size()), dim_);
    for (size_t i = 0; i < hs_.size(); ++i) m.row(static_cast<int>(i)) = hs_[i].n.transpose();
    return m;
}

Eigen::VectorXd PolyRegion::b() const {
    Eigen::VectorXd v(static_cast<int>(hs_.size()));
    for (size_t i = 0; i < hs_.size(); ++i) v(static_cast<int>(i)) = hs_[i].c;
    return v;
}

Wedge standard_wedge() {
    std::vector<HalfSpace> h{hs(v4({1, 0, 0, -1}), 0.0), hs(v4({-1, 0, 0, -1}), 0.0)};
    PolyRegion r(4, std::move(h));
    r.set_vrep(enumerate_vrep(r));
    return {PoincareElement::identity(), r};
}

Wedge make_wedge(const PoincareElement& frame) {
    return {frame, transform_region(frame, standard_wedge().region)};
}

PolyRegion box_region(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    const int d = static_cast<int>(lo.size());
    std::vector<HalfSpace> h;
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
        e(i) = 1.0;
        h.push_back(hs(e, hi(i)));
        h.push_back(hs(-e, -lo(i)));
    }
    return PolyRegion(d, std::move(h));
}

PolyRegion point_region(const Eigen::VectorXd& a) { return box_region(a, a); }

PolyRegion whole_space(int dim) { return PolyRegion(dim, {}); }

PolyRegion transform_region(const PoincareElement& l, const PolyRegion& r) {
    const Eigen::Matrix4d inv_t = l.lambda.inverse().m.transpose();
    const Eigen::Vector4d a = l.a.eigen();
    std::vector<HalfSpace> out;
    for (const auto& h : r.halfspaces()) {
        const Eigen::VectorXd n = inv_t * h.n;
        out.push_back(hs(n, h.c + n.dot(a)));
    }
    PolyRegion res(4, std::move(out));
    if (r.vrep()) {
        VRep v;
        for (const auto& x : r.vrep()->vertices) v.vertices.push_back(l.lambda.m * x + a);
        for (const auto& x : r.vrep()->rays) v.rays.push_back(l.lambda.m * x);
        res.set_vrep(std::move(v));
    }
    return res;
}

bool is_empty(const PolyRegion& r) { return !lp_feasible(r.a(), r.b()); }

PolyRegion intersect_regions(const std::vector<PolyRegion>& regions) {
    if (regions.empty()) throw EmptyRegion("intersection of an empty list");
    const int d = regions.front().dim();
    std::vector<HalfSpace> all;
    for (const auto& r : regions) {
        for (const auto& h : r.halfspaces()) {
            const double s = h.n.norm();
            if (s == 0.0) {
                if (h.c < 0.0) throw EmptyRegion("degenerate half-space with negative offset");
                continue;
            }
            HalfSpace u = hs(h.n / s, h.c / s);
            bool dup = false;
            for (auto& w : all) {
                if ((w.n - u.n).norm() <= 1e-12) {
                    w.c = std::min(w.c, u.c);
                    dup = true;
                    break;
                }
            }
            if (!dup) all.push_back(u);
        }
    }
    PolyRegion joined(d, all);
    if (is_empty(joined)) throw EmptyRegion("intersection has no feasible point");

    // Drop every half-space implied by the ones still kept.
    std::vector<bool> keep(all.size(), true);
    for (size_t i = 0; i < all.size(); ++i) {
        std::vector<int> rows;
        for (size_t j = 0; j < all.size(); ++j) {
            if (j != i && keep[j]) rows.push_back(static_cast<int>(j));
        }
        if (rows.empty()) continue;
        Eigen::MatrixXd a(static_cast<int>(rows.size()), d);
        Eigen::VectorXd b(static_cast<int>(rows.size()));
        for (size_t k = 0; k < rows.size(); ++k) {
            a.row(static_cast<int>(k)) = all[rows[k]].n.transpose();
            b(static_cast<int>(k)) = all[rows[k]].c;
        }
        const LpResult res = lp_maximize(a, b, all[i].n);
        if (res.status == LpStatus::Optimal && res.value <= all[i].c + 1e-9) keep[i] = false;
    }
    std::vector<HalfSpace> kept;
    for (size_t i = 0; i < all.size(); ++i) {
        if (keep[i]) kept.push_back(all[i]);
    }
    PolyRegion out(d, std::move(kept));
    if (out.halfspaces().size() <= 64) out.set_vrep(enumerate_vrep(out));
    return out;
}

VRep enumerate_vrep(const PolyRegion& r, double tol) {
    const int d = r.dim();
    const Eigen::MatrixXd a = r.a();
    const Eigen::VectorXd b = r.b();
    const int m = static_cast<int>(a.rows());
    VRep out;
    if (m > 0 && is_empty(r)) throw EmptyRegion("vertex enumeration of an empty region");

    // Split R^d into the lineality space null(A) and its orthogonal complement.
    Eigen::MatrixXd lin(d, 0);
    if (m > 0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        lu.setThreshold(1e-12);
        if (lu.rank() < d) lin = lu.kernel();
    } else {
        lin = Eigen::MatrixXd::Identity(d, d);
    }
    const int l = static_cast<int>(lin.cols());
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(d, d);
    if (l > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(lin);
        q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    }
    const Eigen::MatrixXd lbasis = q.leftCols(l);
    const Eigen::MatrixXd perp = q.rightCols(d - l);
    const int rdim = d - l;

    for (int i = 0; i < l; ++i) {
        out.rays.push_back(lbasis.col(i));
        out.rays.push_back(-lbasis.col(i));
    }
    if (rdim == 0) {
        out.vertices.push_back(Eigen::VectorXd::Zero(d));
        return out;
    }
    const Eigen::MatrixXd ab = a * perp;
    auto feasible = [&](const Eigen::VectorXd& y, double rhs_scale) {
        const Eigen::VectorXd lhs = ab * y;
        for (int i = 0; i < m; ++i) {
            if (lhs(i) > rhs_scale * b(i) + tol * (1.0 + std::abs(b(i)))) return false;
        }
        return true;
    };

    for_each_subset(m, rdim, [&](const std::vector<int>& s) {
        Eigen::MatrixXd ms(rdim, rdim);
        Eigen::VectorXd bs(rdim);
        for (int k = 0; k < rdim; ++k) {
            ms.row(k) = ab.row(s[k]);
            bs(k) = b(s[k]);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(ms);
        lu.setThreshold(1e-12);
        if (lu.rank() < rdim) return;
        const Eigen::VectorXd y = lu.solve(bs);
        if (feasible(y, 1.0)) push_unique(out.vertices, perp * y, 1e-9);
    });

    auto try_ray = [&](const Eigen::VectorXd& dy) {
        for (double sgn : {1.0, -1.0}) {
            const Eigen::VectorXd y = sgn * dy / dy.norm();
            if (feasible(y, 0.0)) {
                const Eigen::VectorXd x = perp * y;
                push_unique(out.rays, x / x.norm(), 1e-9);
            }
        }
    };
    if (rdim == 1) {
        try_ray(Eigen::VectorXd::Ones(1));
    } else {
        for_each_subset(m, rdim - 1, [&](const std::vector<int>& s) {
            Eigen::MatrixXd ms(rdim - 1, rdim);
            for (int k = 0; k < rdim - 1; ++k) ms.row(k) = ab.row(s[k]);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(ms);
            lu.setThreshold(1e-12);
            if (lu.rank() < rdim - 1) return;
            const Eigen::MatrixXd ker = lu.kernel();
            if (ker.cols() != 1) return;
            try_ray(ker.col(0));
        });
    }
    return out;
}

double support_function(const PolyRegion& r, const Eigen::VectorXd& xi) {
    const int d = r.dim();
    const Eigen::MatrixXd a = r.a();
    const Eigen::VectorXd b = r.b();
    const LpResult main = lp_maximize(a, b, xi);
    if (main.status == LpStatus::Infeasible) throw EmptyRegion("support function of an empty region");

    // Recession cone {A d <= 0} clipped to the unit box.
    const int m = static_cast<int>(a.rows());
    Eigen::MatrixXd ar(m + 2 * d, d);
    Eigen::VectorXd br = Eigen::VectorXd::Zero(m + 2 * d);
    ar.topRows(m) = a;
    ar.middleRows(m, d) = Eigen::MatrixXd::Identity(d, d);
    ar.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
    br.tail(2 * d).setOnes();
    const LpResult rec = lp_maximize(ar, br, xi);
    if (rec.status != LpStatus::Optimal || rec.value > 1e-9 * (1.0 + xi.norm())) return kInf;
    return main.status == LpStatus::Optimal ? main.value : kInf;
}

double support_function_minkowski(const PolyRegion& r, const FourVector& xi) {
    return support_function(r, Eigen::VectorXd(metric() * xi.eigen()));
}

PolyRegion reconstruct_from_support(const std::vector<std::pair<Eigen::VectorXd, double>>& samples) {
    if (samples.empty()) return whole_space(4);
    const int d = static_cast<int>(samples.front().first.size());
    std::vector<HalfSpace> h;
    for (const auto& [xi, val] : samples) {
        if (!std::isfinite(val)) continue;
        h.push_back(hs(xi, val));
    }
    return PolyRegion(d, std::move(h));
}

Cone gamma_plus() {
    Cone c;
    c.dim = 4;
    c.open = true;
    c.normals = {v4({1, 0, 0, -1}), v4({-1, 0, 0, -1})};
    c.equalities = {v4({0, 1, 0, 0}), v4({0, 0, 1, 0})};
    return c;
}

Cone nonnegative_orthant(int dim) {
    Cone c;
    c.dim = dim;
    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
        e(i) = -1.0;
        c.normals.push_back(e);
    }
    return c;
}

Cone transform_cone(const LorentzTransform& l, const Cone& c) {
    const Eigen::Matrix4d inv_t = l.inverse().m.transpose();
    Cone out = c;
    for (auto& n : out.normals) n = inv_t * n;
    for (auto& e : out.equalities) e = inv_t * e;
    return out;
}

bool cone_contains(const Cone& c, const Eigen::VectorXd& eta, double tol) {
    const double scale = 1.0 + eta.norm();
    for (const auto& e : c.equalities) {
        if (std::abs(e.dot(eta)) > tol * scale) return false;
    }
    for (const auto& n : c.normals) {
        const double v = n.dot(eta);
        if (c.open ? !(v < -tol * scale) : v > tol * scale) return false;
    }
    if (c.open && c.normals.empty()) return eta.norm() > tol;
    return true;
}

bool cone_contains(const Cone& c, const FourVector& eta, double tol) {
    return cone_contains(c, Eigen::VectorXd(eta.eigen()), tol);
}

std::vector<Eigen::VectorXd> cone_generators(const Cone& c) {
    std::vector<HalfSpace> h;
    for (const auto& n : c.normals) h.push_back(hs(n, 0.0));
    for (const auto& e : c.equalities) {
        h.push_back(hs(e, 0.0));
        h.push_back(hs(-e, 0.0));
    }
    return enumerate_vrep(PolyRegion(c.dim, std::move(h))).rays;
}

Cone dual_cone(const Cone& c) {
    Cone out;
    out.dim = c.dim;
    out.open = false;
    for (const auto& g : cone_generators(c)) out.normals.push_back(-g);
    return out;
}

nlohmann::json region_to_json(const PolyRegion& r) {
    nlohmann::json j;
    j["dim"] = r.dim();
    j["halfspaces"] = nlohmann::json::array();
    for (const auto& h : r.halfspaces()) {
        j["halfspaces"].push_back({{"n", std::vector<double>(h.n.data(), h.n.data() + h.n.size())}, {"c", h.c}});
    }
    auto pack = [](const std::vector<Eigen::VectorXd>& vs) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : vs) arr.push_back(std::vector<double>(v.data(), v.data() + v.size()));
        return arr;
    };
    if (r.vrep()) {
        j["vertices"] = pack(r.vrep()->vertices);
        j["rays"] = pack(r.vrep()->rays);
    }
    return j;
}

PolyRegion region_from_json(const nlohmann::json& j) {
    auto vec = [](const nlohmann::json& arr) {
        const auto v = arr.get<std::vector<double>>();
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<int>(v.size())));
    };
    std::vector<HalfSpace> h;
    int dim = j.value("dim", 0);
    for (const auto& e : j.at("halfspaces")) {
        h.push_back(hs(vec(e.at("n")), e.at("c").get<double>()));
        if (dim == 0) dim = static_cast<int>(h.back().n.size());
    }
    if (dim == 0) dim = 4;
    for (const auto& x : h) {
        if (x.n.size() != dim) throw ConfigError("half-space normal has wrong dimension");
        if (x.n.norm() == 0.0) throw ConfigError("half-space normal must be nonzero");
    }
    PolyRegion r(dim, std::move(h));
    if (j.contains("vertices")) {
        VRep v;
        for (const auto& e : j.at("vertices")) v.vertices.push_back(vec(e));
        if (j.contains("rays")) {
            for (const auto& e : j.at("rays")) v.rays.push_back(vec(e));
        }
        r.set_vrep(std::move(v));
    }
    return r;
}

}  // namespace modloc
