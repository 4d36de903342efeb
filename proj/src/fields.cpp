#include "rotorct/fields.hpp"

#include <cmath>
#include <random>

#include "rotorct/errors.hpp"

namespace rotorct {

namespace {

// Right/left null vector of (m - lambda I), picking the better-conditioned column.
CVec2 right_vector(const Mat2& m, Cplx lambda) {
    const CVec2 c1{Cplx(m.a12), lambda - m.a11};
    const CVec2 c2{lambda - m.a22, Cplx(m.a21)};
    const double n1 = std::abs(c1[0]) + std::abs(c1[1]);
    const double n2 = std::abs(c2[0]) + std::abs(c2[1]);
    return n1 >= n2 ? c1 : c2;
}

CVec2 left_vector(const Mat2& m, Cplx lambda) {
    const CVec2 c1{Cplx(m.a21), lambda - m.a11};
    const CVec2 c2{lambda - m.a22, Cplx(m.a12)};
    const double n1 = std::abs(c1[0]) + std::abs(c1[1]);
    const double n2 = std::abs(c2[0]) + std::abs(c2[1]);
    return n1 >= n2 ? c1 : c2;
}

// Unit Euclidean norm with the first nonzero component rotated real-positive.
CVec2 normalize_fixed(CVec2 v) {
    const double nrm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    v = {v[0] / nrm, v[1] / nrm};
    const Cplx lead = std::abs(v[0]) > 1e-14 ? v[0] : v[1];
    const Cplx phase = std::abs(lead) / lead;
    return {v[0] * phase, v[1] * phase};
}

} // namespace

EigenDecomp eigen2(const Mat2& m) {
    const double tr = m.trace();
    const double disc = tr * tr - 4.0 * m.det();
    const Cplx eta = std::sqrt(Cplx(disc));
    const Cplx lambda1 = (tr - eta) / 2.0;
    const Cplx lambda2 = (tr + eta) / 2.0;

    const double degen_tol = 1e-9 * (1.0 + m.frob_norm());
    if (std::abs(eta) <= degen_tol) {
        // Repeated eigenvalue: only the (near) scalar case has a full eigenbasis.
        if (std::abs(m.a12) <= degen_tol && std::abs(m.a21) <= degen_tol) {
            EigenDecomp e;
            e.lambda1 = m.a11;
            e.lambda2 = m.a22;
            e.l1 = e.r1 = {1.0, 0.0};
            e.l2 = e.r2 = {0.0, 1.0};
            return e;
        }
        throw DegenerateEigenvectors("repeated eigenvalue of a non-diagonal matrix (Jordan block)");
    }

    EigenDecomp e;
    e.lambda1 = lambda1;
    e.lambda2 = lambda2;
    e.r1 = normalize_fixed(right_vector(m, lambda1));
    e.r2 = normalize_fixed(right_vector(m, lambda2));
    CVec2 l1 = left_vector(m, lambda1);
    CVec2 l2 = left_vector(m, lambda2);
    const Cplx p1 = pair(l1, e.r1);
    const Cplx p2 = pair(l2, e.r2);
    if (std::abs(p1) < 1e-300 || std::abs(p2) < 1e-300)
        throw DegenerateEigenvectors("left/right pairing vanished");
    e.l1 = {l1[0] / p1, l1[1] / p1};
    e.l2 = {l2[0] / p2, l2[1] / p2};
    return e;
}

Cplx spectral_pairing_ratio(const Mat2& m) {
    const EigenDecomp e = eigen2(m);
    if (std::abs(e.lambda2 - e.lambda1) <= 1e-9 * (1.0 + m.frob_norm()))
        throw DegenerateEigenvectors("spectral gap too small for the pairing ratio");
    const CVec2 jr1{e.r1[1], -e.r1[0]};
    return pair(e.r2, jr1) * pair(e.l1, e.l2);
}

GradientState grad_analysis(const Mat2& m, double k) {
    GradientState g;
    g.omega = m.a12 - m.a21;
    g.d = m.trace();
    g.det = m.det();
    g.gap2 = g.d * g.d - 4.0 * g.det;
    g.phi = 4.0 * k * k - 2.0 * k * g.omega;
    g.r = m.a21 + m.a12;
    g.s = m.a11 - m.a22;
    g.k = k;
    return g;
}

FieldSample sample_field(const FieldSpec& spec, const Vec2& alpha) {
    if (!spec.domain.contains(alpha))
        throw OutOfDomain("sample point outside the field domain");

    FieldSample out;
    if (const auto* aff = std::get_if<AffineField>(&spec.kind)) {
        out.U0 = aff->A.apply(alpha) + aff->b;
        out.grad = aff->A;
        return out;
    }
    const auto& tp = std::get<TrigPolyField>(spec.kind);
    out.U0 = {0, 0};
    out.grad = Mat2{};
    for (const TrigTerm& t : tp.terms) {
        const double cx = std::cos(t.kx * alpha[0] + t.phase_x);
        const double sx = std::sin(t.kx * alpha[0] + t.phase_x);
        const double cy = std::cos(t.ky * alpha[1] + t.phase_y);
        const double sy = std::sin(t.ky * alpha[1] + t.phase_y);
        const double val = t.amp * cx * cy;
        const double dvx = -t.amp * t.kx * sx * cy;
        const double dvy = -t.amp * t.ky * cx * sy;
        if (t.target == 0) {
            out.U0[0] += val;
            out.grad.a11 += dvx;
            out.grad.a12 += dvy;
        } else {
            out.U0[1] += val;
            out.grad.a21 += dvx;
            out.grad.a22 += dvy;
        }
    }
    return out;
}

namespace {
// Uniform double in [0,1) from a raw 64-bit draw; stable across platforms.
double unit_double(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }
} // namespace

FieldSpec random_trig_field(int cutoff, std::uint64_t seed, double amplitude) {
    std::mt19937_64 rng(seed);
    TrigPolyField tp;
    tp.cutoff = cutoff;
    tp.seed = seed;
    const int nterms = 2 * std::max(cutoff, 1);
    for (int i = 0; i < nterms; ++i) {
        TrigTerm t;
        t.target = i % 2;
        t.amp = amplitude * (2.0 * unit_double(rng) - 1.0) / nterms;
        t.kx = double(1 + int(rng() % std::uint64_t(std::max(cutoff, 1))));
        t.ky = double(int(rng() % std::uint64_t(cutoff + 1)));
        t.phase_x = 2.0 * M_PI * unit_double(rng);
        t.phase_y = 2.0 * M_PI * unit_double(rng);
        tp.terms.push_back(t);
    }
    FieldSpec spec;
    spec.kind = tp;
    spec.domain.periodic = true;
    return spec;
}

} // namespace rotorct
