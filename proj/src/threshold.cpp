#include "rotorct/threshold.hpp"

#include <cmath>

#include "rotorct/csv.hpp"
#include "rotorct/errors.hpp"
#include "rotorct/parallel.hpp"

namespace rotorct {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Subcritical: return "subcritical";
        case Verdict::Supercritical: return "supercritical";
        default: return "marginal";
    }
}

double threshold_indicator(const GradientState& g) {
    return 4.0 * g.k * (g.k - g.omega) - g.gap2;
}

MaterialConstants material_constants(const GradientState& g) {
    if (g.phi == 0.0)
        throw PhiZero("material constants undefined on the invariant set phi = 0");
    const double k2 = 4.0 * g.k * g.k;
    MaterialConstants mc;
    mc.C0 = (2.0 * g.phi - g.gap2 - k2) / (g.phi * g.phi);
    mc.D0 = (g.d * g.d + k2 + mc.C0 * g.phi * g.phi) / g.phi;
    return mc;
}

ThetaParams theta0_params(const GradientState& g) {
    const double i0 = threshold_indicator(g);
    if (i0 <= 0.0)
        throw SupercriticalData("theta0 requires subcritical data (i0 > 0)");
    const double root = std::sqrt(i0);
    ThetaParams tp;
    tp.p0 = root / (g.d * g.d + (root - 2.0 * g.k) * (root - 2.0 * g.k));
    const double q = std::sqrt(1.0 + 8.0 * g.k * tp.p0);
    tp.theta0 = (q - 1.0) / (q + 1.0);
    return tp;
}

static Verdict classify_i0(double i0, double tol) {
    if (i0 > tol) return Verdict::Subcritical;
    if (i0 < -tol) return Verdict::Supercritical;
    return Verdict::Marginal;
}

ThresholdReport threshold_report(const GradientState& g, double margin_tol) {
    ThresholdReport rep;
    rep.margin_tol = std::isnan(margin_tol) ? default_margin_tol(g.k) : margin_tol;
    rep.i0 = threshold_indicator(g);
    rep.verdict = classify_i0(rep.i0, rep.margin_tol);
    if (g.phi != 0.0) {
        const MaterialConstants mc = material_constants(g);
        rep.C0 = mc.C0;
        rep.D0 = mc.D0;
    }
    if (rep.i0 > 0.0) {
        const ThetaParams tp = theta0_params(g);
        rep.p0 = tp.p0;
        rep.theta0 = tp.theta0;
    }
    return rep;
}

Threshold1DReport threshold_1d(double u0p, double v0p, double k, double margin_tol) {
    const double omega = -v0p;
    const double d = u0p;
    const double num = (2.0 * k - omega) * (2.0 * k - omega);
    const double den = d * d + omega * omega;
    Threshold1DReport rep;
    if (den == 0.0) {
        // zero 1D gradient: trivially bounded, B0 formally infinite
        rep.B0 = std::numeric_limits<double>::infinity();
        rep.verdict = Verdict::Subcritical;
        rep.theta0_1d = 1.0;
        return rep;
    }
    rep.B0 = num / den;
    if (rep.B0 > 1.0 + margin_tol)
        rep.verdict = Verdict::Subcritical;
    else if (rep.B0 < 1.0 - margin_tol)
        rep.verdict = Verdict::Supercritical;
    else
        rep.verdict = Verdict::Marginal;
    if (rep.B0 > 1.0) {
        const double rootb = std::sqrt(rep.B0);
        rep.theta0_1d = (rootb - 1.0) / (rootb + 1.0);
    }
    return rep;
}

FreeTransportResult free_transport_breakdown(Cplx lambda0) {
    FreeTransportResult res;
    res.eigenvalue_real = lambda0.imag() == 0.0;
    if (!res.eigenvalue_real) return res;  // lambda not real: smooth in both directions
    const double l = lambda0.real();
    if (l < 0.0)
        res.forward_breakdown = -1.0 / l;
    else if (l > 0.0)
        res.backward_breakdown = -1.0 / l;
    // l == 0: never breaks, but still a real eigenvalue
    return res;
}

FieldClassification classify_field(const FieldSpec& spec, double k, const Lattice& grid) {
    FieldClassification fc;
    fc.points.resize(grid.size());
    parallel_for(grid.size(), [&](int idx) {
        PointReport& pr = fc.points[idx];
        pr.alpha = grid.point(idx);
        pr.grad = grad_analysis(sample_field(spec, pr.alpha).grad, k);
        pr.report = threshold_report(pr.grad);
    });
    bool any_marginal = false, any_super = false;
    for (const PointReport& pr : fc.points) {
        fc.min_i0 = std::min(fc.min_i0, pr.report.i0);
        if (pr.report.verdict == Verdict::Marginal) any_marginal = true;
        if (pr.report.verdict == Verdict::Supercritical) any_super = true;
    }
    fc.global = any_super ? Verdict::Supercritical
                          : (any_marginal ? Verdict::Marginal : Verdict::Subcritical);
    return fc;
}

std::string threshold_csv_header() {
    return "alpha_x,alpha_y,omega0,d0,gap2_0,i0,C0,D0,p0,theta0,verdict";
}

std::string threshold_csv_row(const PointReport& p) {
    std::string row;
    row += fmt_double(p.alpha[0]) + ',' + fmt_double(p.alpha[1]) + ',';
    row += fmt_double(p.grad.omega) + ',' + fmt_double(p.grad.d) + ',' + fmt_double(p.grad.gap2) + ',';
    row += fmt_double(p.report.i0) + ',';
    row += fmt_opt(p.report.C0) + ',' + fmt_opt(p.report.D0) + ',';
    row += fmt_opt(p.report.p0) + ',' + fmt_opt(p.report.theta0) + ',';
    row += to_string(p.report.verdict);
    return row;
}

} // namespace rotorct
