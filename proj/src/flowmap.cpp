#include "rotorct/flowmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "rotorct/errors.hpp"

namespace rotorct {

Mat2 rot_exp(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, s, -s, c};
}

FlowMapState flow_map(const Vec2& alpha, const Vec2& U0, double k, double t) {
    const Mat2 J = Mat2::rot90();
    const Mat2 R = rot_exp(2.0 * k * t);
    // X = (1/2k) J^{-1} e^{2kJt} U0 + alpha - (1/2k) J^{-1} U0, J^{-1} = -J
    const Vec2 rotated = R.apply(U0);
    const Vec2 shift = J.apply(U0 - rotated);  // J^{-1}(R - I)U0 = -J(R - I)U0
    FlowMapState st;
    st.X = alpha + (1.0 / (2.0 * k)) * shift;
    st.Xdot = rotated;
    st.jac = Mat2::identity();  // caller combines with jacobian() for a gradient field
    st.det_scaled = 1.0;
    return st;
}

OrbitDescriptor orbit_descriptor(const Vec2& alpha, const Vec2& U0, double k) {
    const Mat2 J = Mat2::rot90();
    OrbitDescriptor od;
    od.center = alpha + (1.0 / (2.0 * k)) * J.apply(U0);
    od.radius = norm(U0) / (2.0 * k);
    od.period = M_PI / k;
    return od;
}

Mat2 jacobian(const Mat2& grad0, double k, double t) {
    const Mat2 J = Mat2::rot90();
    const Mat2 R = rot_exp(2.0 * k * t);
    const Mat2 ImR = Mat2::identity() - R;
    return Mat2::identity() + (1.0 / (2.0 * k)) * (J * ImR * grad0);
}

double jacobian_det(double omega0, double d0, double det0, double k, double t) {
    const double A = 4.0 * k * k - 2.0 * k * omega0 + 2.0 * det0;
    const double B = 2.0 * k * omega0 - 2.0 * det0;
    const double C = 2.0 * k * d0;
    return A + B * std::cos(2.0 * k * t) + C * std::sin(2.0 * k * t);
}

std::optional<double> first_singularity(double omega0, double d0, double det0, double k) {
    const double A = 4.0 * k * k - 2.0 * k * omega0 + 2.0 * det0;
    const double B = 2.0 * k * omega0 - 2.0 * det0;
    const double C = 2.0 * k * d0;
    const double R = std::hypot(B, C);
    if (A > R) return std::nullopt;  // determinant stays positive: condition (5.1)

    // A + R cos(2kt - psi) = 0; the value at t = 0 is 4k^2 > 0, so A >= -R.
    const double psi = std::atan2(C, B);
    const double gamma = std::acos(std::clamp(-A / std::max(R, 1e-300), -1.0, 1.0));
    double best = std::numeric_limits<double>::infinity();
    for (const double g : {gamma, -gamma}) {
        for (int n = -1; n <= 1; ++n) {
            const double theta = psi + g + 2.0 * M_PI * n;
            const double t = theta / (2.0 * k);
            if (t > 1e-14 / k && t < best) best = t;
        }
    }
    // one Newton polish step; skipped at tangency where the derivative vanishes
    const double f = jacobian_det(omega0, d0, det0, k, best);
    const double fp = 2.0 * k * (-B * std::sin(2.0 * k * best) + C * std::cos(2.0 * k * best));
    if (std::fabs(fp) > 1e-9 * (1.0 + R) * k) best -= f / fp;
    return best;
}

Mat2 eulerian_gradient(const Mat2& grad0, double k, double t) {
    const Mat2 J = Mat2::rot90();
    const Mat2 jac = jacobian(grad0, k, t);
    const double dj = jac.det();
    if (std::fabs(dj) < 1e-12 * (1.0 + jac.frob_norm() * jac.frob_norm()))
        throw SingularJacobian("flow-map Jacobian is singular; gradient undefined");
    const Mat2 B = grad0 + (2.0 * k) * (J * (jac - Mat2::identity()));
    return B * jac.inverse();
}

Vec2 invert_flow_map(const Vec2& x, double t, const FieldSpec& spec, double k,
                     const Lattice& seed_grid) {
    // rank seeds by forward-map distance, then run Newton from the best ones
    const int n = seed_grid.size();
    std::vector<std::pair<double, int>> ranked(n);
    for (int i = 0; i < n; ++i) {
        const Vec2 a = seed_grid.point(i);
        const FieldSample fs = sample_field(spec, a);
        const Vec2 err = flow_map(a, fs.U0, k, t).X - x;
        ranked[i] = {dot(err, err), i};
    }
    std::sort(ranked.begin(), ranked.end());

    const double scale = 1.0 + norm(x);
    const double tol = 1e-10 * scale;
    bool singular_seen = false;
    for (int s = 0; s < std::min(n, 8); ++s) {
        Vec2 a = seed_grid.point(ranked[s].second);
        for (int it = 0; it < 50; ++it) {
            FieldSample fs;
            try {
                fs = sample_field(spec, a);
            } catch (const OutOfDomain&) {
                break;
            }
            const Vec2 F = flow_map(a, fs.U0, k, t).X - x;
            if (norm(F) <= tol) return a;
            const Mat2 jac = jacobian(fs.grad, k, t);
            if (std::fabs(jac.det()) < 1e-12 * (1.0 + jac.frob_norm() * jac.frob_norm())) {
                singular_seen = true;
                break;
            }
            const Vec2 step = jac.inverse().apply(F);
            a = a - step;
        }
    }
    if (singular_seen)
        throw SingularJacobian("flow-map inversion hit a singular Jacobian");
    throw NoConvergence("flow-map inversion did not converge from any seed");
}

} // namespace rotorct
