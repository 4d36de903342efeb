#include "rotorct/period.hpp"

#include <cmath>

#include "rotorct/errors.hpp"
#include "rotorct/quadrature.hpp"

namespace rotorct {

OrbitGeometry orbit_geometry(double C0, double D0, double k) {
    if (C0 <= 0.0)
        throw SupercriticalData("bounded orbits require C0 > 0");
    OrbitGeometry geo;
    const double root_c = std::sqrt(C0);
    geo.center_phi = 2.0 * k / root_c;
    geo.ellipse_rhs_coeff = D0 - 4.0 * k * root_c;
    // turning points: roots of C0 phi^2 - D0 phi + 4k^2 = 0
    const double disc = std::max(D0 * D0 - 16.0 * k * k * C0, 0.0);
    const double sq = std::sqrt(disc);
    geo.phi_minus = (D0 - sq) / (2.0 * C0);
    geo.phi_plus = (D0 + sq) / (2.0 * C0);
    geo.theta0 = geo.phi_minus / geo.center_phi;
    return geo;
}

double period_integrand(double theta, double theta0) {
    const double A = theta0 + 1.0 / theta0;
    const double B = 1.0 / theta0 - theta0;
    return 1.0 / (A + B * std::sin(theta));
}

PeriodResult period_quadrature(double theta0, double k, double tol) {
    const auto [val, err] = quad_adaptive(
        [theta0](double th) { return period_integrand(th, theta0); }, -M_PI / 2, M_PI / 2, tol);
    return {2.0 / k * val, 2.0 / k * err, theta0};
}

PeriodResult period_from_phi_integral(double C0, double D0, double k, double tol) {
    if (C0 <= 0.0)
        throw SupercriticalData("bounded orbits require C0 > 0");
    if (D0 - 4.0 * k * std::sqrt(C0) <= 0.0)
        throw DegenerateOrbit("point orbit: the ellipse degenerates to the center");
    const OrbitGeometry geo = orbit_geometry(C0, D0, k);
    const double mid = 0.5 * (geo.phi_minus + geo.phi_plus);
    const double half = 0.5 * (geo.phi_plus - geo.phi_minus);
    if (half <= 0.0)
        throw DegenerateOrbit("turning points coincide");
    // s = mid + half sin(theta) removes the inverse-square-root endpoint singularity
    const auto [val, err] = quad_adaptive(
        [mid, half](double th) { return 1.0 / (mid + half * std::sin(th)); }, -M_PI / 2, M_PI / 2,
        tol);
    const double scale = 2.0 / std::sqrt(C0);
    return {scale * val, scale * err, geo.theta0};
}

double physical_period(double T_bar, double L_bar_m, double U_bar_mps) {
    return T_bar * L_bar_m / U_bar_mps;
}

} // namespace rotorct
