#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rotorct/fields.hpp"

namespace rotorct {

enum class Verdict { Subcritical, Supercritical, Marginal };

const char* to_string(Verdict v);

inline double default_margin_tol(double k) { return 1e-10 * (1.0 + 4.0 * k * k); }

/// Initial-data threshold parameters. C0/D0 require phi0 != 0 and p0/theta0
/// require i0 > 0; absent otherwise.
struct ThresholdReport {
    double i0 = 0;
    std::optional<double> C0, D0, p0, theta0;
    Verdict verdict = Verdict::Marginal;
    double margin_tol = 0;
};

struct Threshold1DReport {
    double B0 = 0;
    std::optional<double> theta0_1d;
    Verdict verdict = Verdict::Marginal;
};

/// i0 = 4k(k - omega0) - Gamma0.
double threshold_indicator(const GradientState& g);

struct MaterialConstants {
    double C0 = 0;
    double D0 = 0;
};

/// C0 = (2 phi0 - Gamma0 - 4k^2)/phi0^2, D0 = (d0^2 + 4k^2 + C0 phi0^2)/phi0.
/// Throws PhiZero when phi0 = 0.
MaterialConstants material_constants(const GradientState& g);

struct ThetaParams {
    double p0 = 0;
    double theta0 = 0;
};

/// p0 = sqrt(i0)/(d0^2 + (sqrt(i0) - 2k)^2), theta0 from the 8k*p0 formula.
/// Throws SupercriticalData when i0 <= 0.
ThetaParams theta0_params(const GradientState& g);

ThresholdReport threshold_report(const GradientState& g,
                                 double margin_tol = std::numeric_limits<double>::quiet_NaN());

/// 1D reduction with (omega, d) := (-v0', u0'); B0 = (2k - omega)^2/(d^2 + omega^2).
Threshold1DReport threshold_1d(double u0p, double v0p, double k, double margin_tol = 1e-10);

/// Breakdown structure of free transport from one initial eigenvalue.
struct FreeTransportResult {
    double forward_breakdown = std::numeric_limits<double>::infinity();
    double backward_breakdown = -std::numeric_limits<double>::infinity();
    bool eigenvalue_real = false;  // real eigenvalues break in at least one direction
};

FreeTransportResult free_transport_breakdown(Cplx lambda0);

struct PointReport {
    Vec2 alpha;
    GradientState grad;
    ThresholdReport report;
};

struct FieldClassification {
    std::vector<PointReport> points;  // ordered by lattice index
    double min_i0 = std::numeric_limits<double>::infinity();
    Verdict global = Verdict::Subcritical;
};

FieldClassification classify_field(const FieldSpec& spec, double k, const Lattice& grid);

/// CSV row: alpha_x, alpha_y, omega0, d0, gap2_0, i0, C0, D0, p0, theta0, verdict.
std::string threshold_csv_header();
std::string threshold_csv_row(const PointReport& p);

} // namespace rotorct
