#pragma once

namespace rotorct {

/// Phase-plane geometry of a bounded (phi, d) orbit.
struct OrbitGeometry {
    double center_phi = 0;        // 2k/sqrt(C0) on the right half plane
    double phi_minus = 0;         // turning points, roots of C0 phi^2 - D0 phi + 4k^2
    double phi_plus = 0;
    double ellipse_rhs_coeff = 0; // D0 - 4k sqrt(C0)
    double theta0 = 0;            // phi_minus / center_phi
};

OrbitGeometry orbit_geometry(double C0, double D0, double k);

/// 1/((theta0 + 1/theta0) + (1/theta0 - theta0) sin theta); smooth since A > |B|.
double period_integrand(double theta, double theta0);

struct PeriodResult {
    double T_bar = 0;
    double quadrature_error_estimate = 0;
    double theta0 = 0;
};

/// T_bar = (2/k) * integral of period_integrand over [-pi/2, pi/2].
PeriodResult period_quadrature(double theta0, double k, double tol = 1e-12);

/// Independent route through the phi-integral between the turning points,
/// with the sin substitution applied analytically before quadrature.
PeriodResult period_from_phi_integral(double C0, double D0, double k, double tol = 1e-12);

/// T = T_bar * L_bar / U_bar (seconds).
double physical_period(double T_bar, double L_bar_m, double U_bar_mps);

} // namespace rotorct
