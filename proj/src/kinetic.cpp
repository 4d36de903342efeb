#include "rotorct/kinetic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rotorct/errors.hpp"
#include "rotorct/parallel.hpp"

#include <nlohmann/json.hpp>

namespace rotorct {

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double maxwellian(double rho, const Vec2& U, double temperature, const Vec2& xi) {
    if (rho == 0.0) return 0.0;
    const double dx = xi[0] - U[0], dy = xi[1] - U[1];
    return rho / (M_PI * temperature) * std::exp(-(dx * dx + dy * dy) / temperature);
}

namespace {

double boundary_mass(const std::vector<double>& f, const VelocityGrid& g) {
    double s = 0;
    const int n = g.n;
    for (int i = 0; i < n; ++i) {
        s += f[g.index(i, 0)] + f[g.index(i, n - 1)];
        if (i > 0 && i < n - 1) s += f[g.index(0, i)] + f[g.index(n - 1, i)];
    }
    return s * g.weight();
}

} // namespace

MomentSet moments(const std::vector<double>& f, const VelocityGrid& grid) {
    MomentSet ms;
    const int n = grid.n;
    std::vector<double> row_rho(n), row_mx(n), row_my(n), row_e(n);
    std::vector<double> acc_rho(n), acc_mx(n), acc_my(n), acc_e(n);
    for (int i = 0; i < n; ++i) {
        const double x1 = grid.coord(i, 0);
        for (int j = 0; j < n; ++j) {
            const double x2 = grid.coord(j, 1);
            const double v = f[grid.index(i, j)];
            row_rho[j] = v;
            row_mx[j] = x1 * v;
            row_my[j] = x2 * v;
            row_e[j] = 0.5 * (x1 * x1 + x2 * x2) * v;
        }
        acc_rho[i] = pairwise_sum(row_rho.data(), n);
        acc_mx[i] = pairwise_sum(row_mx.data(), n);
        acc_my[i] = pairwise_sum(row_my.data(), n);
        acc_e[i] = pairwise_sum(row_e.data(), n);
    }
    const double w = grid.weight();
    ms.rho = w * pairwise_sum(acc_rho.data(), n);
    ms.m = {w * pairwise_sum(acc_mx.data(), n), w * pairwise_sum(acc_my.data(), n)};
    ms.E = w * pairwise_sum(acc_e.data(), n);
    if (ms.rho > 0 && boundary_mass(f, grid) > 1e-8 * ms.rho)
        throw TailMassExceeded("velocity grid does not cover the support of f");
    return ms;
}

ForcingMoments forcing_moments(const std::vector<double>& f, const VelocityGrid& grid, double k) {
    const int n = grid.n;
    const double h = grid.h();
    auto at = [&](int i, int j) -> double {
        if (i < 0 || i >= n || j < 0 || j >= n) return 0.0;
        return f[grid.index(i, j)];
    };
    // fourth-order central differences of f in xi
    ForcingMoments fm;
    std::vector<double> rm(n), rpx(n), rpy(n), re(n);
    std::vector<double> am(n), apx(n), apy(n), ae(n);
    for (int i = 0; i < n; ++i) {
        const double x1 = grid.coord(i, 0);
        for (int j = 0; j < n; ++j) {
            const double x2 = grid.coord(j, 1);
            const double fx = (-at(i + 2, j) + 8 * at(i + 1, j) - 8 * at(i - 1, j) + at(i - 2, j)) /
                              (12 * h);
            const double fy = (-at(i, j + 2) + 8 * at(i, j + 1) - 8 * at(i, j - 1) + at(i, j - 2)) /
                              (12 * h);
            // (J xi) . grad f = xi2 f_xi1 - xi1 f_xi2
            const double adv = 2.0 * k * (x2 * fx - x1 * fy);
            rm[j] = adv;
            rpx[j] = x1 * adv;
            rpy[j] = x2 * adv;
            re[j] = 0.5 * (x1 * x1 + x2 * x2) * adv;
        }
        am[i] = pairwise_sum(rm.data(), n);
        apx[i] = pairwise_sum(rpx.data(), n);
        apy[i] = pairwise_sum(rpy.data(), n);
        ae[i] = pairwise_sum(re.data(), n);
    }
    const double w = grid.weight();
    fm.mass = w * pairwise_sum(am.data(), n);
    fm.momentum = {w * pairwise_sum(apx.data(), n), w * pairwise_sum(apy.data(), n)};
    fm.energy = w * pairwise_sum(ae.data(), n);
    return fm;
}

ClosureFluxes closure_fluxes(double rho, const Vec2& U, double temperature) {
    ClosureFluxes cf;
    const double p = 0.5 * rho * temperature;  // Gaussian covariance is (T/2) I
    cf.F_rho = rho * U;
    cf.F_m = Mat2{rho * U[0] * U[0] + p, rho * U[0] * U[1], rho * U[0] * U[1],
                  rho * U[1] * U[1] + p};
    const double e_kin = 0.5 * rho * (U[0] * U[0] + U[1] * U[1]);
    cf.F_E = (e_kin + rho * temperature) * U;
    cf.dev_F_m = Mat2{p, 0, 0, p};
    cf.dev_F_E = (rho * temperature) * U;
    return cf;
}

void transport_x(KineticGrid& grid, double dt) {
    const int nx = grid.nx;
    const int nv = grid.vgrid.size();
    const double hx = grid.hx();
    std::vector<double> slice(std::size_t(nx) * nx);
    std::vector<double> out(std::size_t(nx) * nx);

    const int n = grid.vgrid.n;
    for (int vi = 0; vi < n; ++vi) {
        for (int vj = 0; vj < n; ++vj) {
            const int vidx = grid.vgrid.index(vi, vj);
            const Vec2 xi = grid.vgrid.point(vi, vj);
            // constant fractional shift for this velocity
            const double sx = xi[0] * dt / hx;
            const double sy = xi[1] * dt / hx;
            const double fax = std::floor(sx), fay = std::floor(sy);
            const double wx = sx - fax, wy = sy - fay;
            const int ox = int(fax), oy = int(fay);

            for (int ix = 0; ix < nx; ++ix)
                for (int iy = 0; iy < nx; ++iy)
                    slice[ix * nx + iy] = grid.cell_data(ix, iy)[vidx];

            auto wrap = [nx](int i) { return ((i % nx) + nx) % nx; };
            for (int ix = 0; ix < nx; ++ix) {
                const int i0 = wrap(ix - ox - 1), i1 = wrap(ix - ox);
                for (int iy = 0; iy < nx; ++iy) {
                    const int j0 = wrap(iy - oy - 1), j1 = wrap(iy - oy);
                    out[ix * nx + iy] = (1 - wx) * ((1 - wy) * slice[i1 * nx + j1] +
                                                    wy * slice[i1 * nx + j0]) +
                                        wx * ((1 - wy) * slice[i0 * nx + j1] +
                                              wy * slice[i0 * nx + j0]);
                }
            }
            for (int ix = 0; ix < nx; ++ix)
                for (int iy = 0; iy < nx; ++iy)
                    grid.cell_data(ix, iy)[vidx] = out[ix * nx + iy];
        }
    }
    (void)nv;
}

namespace {

// Catmull-Rom weights for fractional offset u in [0,1)
inline void cr_weights(double u, double w[4]) {
    const double u2 = u * u, u3 = u2 * u;
    w[0] = -0.5 * u3 + u2 - 0.5 * u;
    w[1] = 1.5 * u3 - 2.5 * u2 + 1.0;
    w[2] = -1.5 * u3 + 2.0 * u2 + 0.5 * u;
    w[3] = 0.5 * u3 - 0.5 * u2;
}

} // namespace

void rotate_xi(KineticGrid& grid, double angle) {
    const int nx = grid.nx;
    const int n = grid.vgrid.n;
    const double h = grid.vgrid.h();
    const double c = std::cos(angle), s = std::sin(angle);
    const Vec2 lo{grid.vgrid.center[0] - grid.vgrid.extent,
                  grid.vgrid.center[1] - grid.vgrid.extent};

    // source coordinates and stencils are the same for every x-cell
    struct Tap {
        int i0, j0;
        double wx[4], wy[4];
        bool inside;
    };
    std::vector<Tap> taps(std::size_t(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec2 xi = grid.vgrid.point(i, j);
            // e^{-angle J} xi with e^{-aJ} = [[cos a, -sin a], [sin a, cos a]]
            const double sx1 = c * xi[0] - s * xi[1];
            const double sx2 = s * xi[0] + c * xi[1];
            const double gi = (sx1 - lo[0]) / h - 0.5;
            const double gj = (sx2 - lo[1]) / h - 0.5;
            Tap& tp = taps[std::size_t(i) * n + j];
            const double fi = std::floor(gi), fj = std::floor(gj);
            tp.i0 = int(fi) - 1;
            tp.j0 = int(fj) - 1;
            cr_weights(gi - fi, tp.wx);
            cr_weights(gj - fj, tp.wy);
            tp.inside = tp.i0 + 3 >= 0 && tp.i0 < n && tp.j0 + 3 >= 0 && tp.j0 < n;
        }
    }

    parallel_for(nx * nx, [&](int cidx) {
        double* cell = grid.f.data() + std::size_t(cidx) * grid.vgrid.size();
        std::vector<double> src(cell, cell + grid.vgrid.size());
        const double pre_mass = pairwise_sum(src.data(), src.size());
        auto at = [&](int i, int j) -> double {
            if (i < 0 || i >= n || j < 0 || j >= n) return 0.0;
            return src[std::size_t(i) * n + j];
        };
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const Tap& tp = taps[std::size_t(i) * n + j];
                double v = 0;
                if (tp.inside) {
                    for (int a = 0; a < 4; ++a)
                        for (int b = 0; b < 4; ++b)
                            v += tp.wx[a] * tp.wy[b] * at(tp.i0 + a, tp.j0 + b);
                }
                cell[std::size_t(i) * n + j] = v;
            }
        }
        // conservative fix-up: restore the exact pre-rotation cell mass
        const double post_mass = pairwise_sum(cell, grid.vgrid.size());
        if (post_mass > 0 && pre_mass > 0 && post_mass > 0.5 * pre_mass &&
            post_mass < 2.0 * pre_mass) {
            const double scale = pre_mass / post_mass;
            for (std::size_t q = 0; q < std::size_t(n) * n; ++q) cell[q] *= scale;
        }
    });
}

void relax(KineticGrid& grid, double dt) {
    const int nx = grid.nx;
    const int n = grid.vgrid.n;
    const double decay = std::exp(-dt / grid.tau_relax);
    const double w = grid.vgrid.weight();

    parallel_for(nx * nx, [&](int cidx) {
        double* cell = grid.f.data() + std::size_t(cidx) * grid.vgrid.size();
        // local moments (rho, m)
        std::vector<double> r0(n), r1(n), r2(n), a0(n), a1(n), a2(n);
        for (int i = 0; i < n; ++i) {
            const double x1 = grid.vgrid.coord(i, 0);
            for (int j = 0; j < n; ++j) {
                const double x2 = grid.vgrid.coord(j, 1);
                const double v = cell[std::size_t(i) * n + j];
                r0[j] = v;
                r1[j] = x1 * v;
                r2[j] = x2 * v;
            }
            a0[i] = pairwise_sum(r0.data(), n);
            a1[i] = pairwise_sum(r1.data(), n);
            a2[i] = pairwise_sum(r2.data(), n);
        }
        const double rho = w * pairwise_sum(a0.data(), n);
        if (rho <= 0) return;
        const Vec2 m{w * pairwise_sum(a1.data(), n), w * pairwise_sum(a2.data(), n)};
        const Vec2 U{m[0] / rho, m[1] / rho};

        // discrete Maxwellian, then an affine correction (c0 + c1 xi1 + c2 xi2) M
        // solving for exact discrete (rho, m) so the relaxation conserves them.
        std::vector<double> M(std::size_t(n) * n);
        double A[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        for (int i = 0; i < n; ++i) {
            const double x1 = grid.vgrid.coord(i, 0);
            for (int j = 0; j < n; ++j) {
                const double x2 = grid.vgrid.coord(j, 1);
                const double mv = maxwellian(rho, U, grid.temperature, {x1, x2});
                M[std::size_t(i) * n + j] = mv;
                const double b[3] = {mv, x1 * mv, x2 * mv};
                for (int p = 0; p < 3; ++p) {
                    A[0][p] += b[p];
                    A[1][p] += x1 * b[p];
                    A[2][p] += x2 * b[p];
                }
            }
        }
        for (auto& row : A)
            for (double& v : row) v *= w;
        const double rhs[3] = {rho, m[0], m[1]};
        // Cramer solve of the 3x3 moment-matching system
        auto det3 = [](const double a[3][3]) {
            return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                   a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                   a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        };
        const double den = det3(A);
        double coef[3] = {1, 0, 0};
        if (std::fabs(den) > 1e-300) {
            double Ai[3][3];
            for (int col = 0; col < 3; ++col) {
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q) Ai[p][q] = A[p][q];
                for (int p = 0; p < 3; ++p) Ai[p][col] = rhs[p];
                coef[col] = det3(Ai) / den;
            }
        }
        for (int i = 0; i < n; ++i) {
            const double x1 = grid.vgrid.coord(i, 0);
            for (int j = 0; j < n; ++j) {
                const double x2 = grid.vgrid.coord(j, 1);
                const std::size_t q = std::size_t(i) * n + j;
                const double Mtil = (coef[0] + coef[1] * x1 + coef[2] * x2) * M[q];
                cell[q] = decay * cell[q] + (1.0 - decay) * Mtil;
            }
        }
    });
}

void bgk_step(KineticGrid& grid) {
    const double vmax = std::max(std::fabs(grid.vgrid.center[0]) + grid.vgrid.extent,
                                 std::fabs(grid.vgrid.center[1]) + grid.vgrid.extent);
    if (grid.dt * vmax > grid.hx() + 1e-12)
        throw CFLViolation("transport substep CFL exceeds 1");
    transport_x(grid, 0.5 * grid.dt);
    rotate_xi(grid, grid.k * grid.dt);
    relax(grid, grid.dt);
    rotate_xi(grid, grid.k * grid.dt);
    transport_x(grid, 0.5 * grid.dt);
}

KineticGrid make_grid(const BgkConfig& cfg) {
    KineticGrid g;
    g.nx = cfg.nx;
    g.L = cfg.L;
    g.tau_relax = cfg.tau;
    g.temperature = cfg.temperature;
    g.k = cfg.k;
    const double umax = std::max(std::fabs(cfg.U0[0]), std::fabs(cfg.U0[1]));
    g.vgrid.center = {0, 0};
    g.vgrid.extent = cfg.xi_extent > 0 ? cfg.xi_extent
                                       : norm(cfg.U0) + 6.0 * std::sqrt(cfg.temperature);
    g.vgrid.n = cfg.nxi;
    const double vmax = g.vgrid.extent;
    g.dt = cfg.cfl * g.hx() / vmax;
    (void)umax;

    g.f.assign(std::size_t(g.nx) * g.nx * g.vgrid.size(), 0.0);
    for (int ix = 0; ix < g.nx; ++ix) {
        const double x = (ix + 0.5) * g.hx();
        for (int iy = 0; iy < g.nx; ++iy) {
            const double y = (iy + 0.5) * g.hx();
            const double rho = cfg.rho_base + cfg.rho_pert * std::sin(2 * M_PI * x / cfg.L) *
                                                  std::sin(2 * M_PI * y / cfg.L);
            double* cell = g.cell_data(ix, iy);
            for (int i = 0; i < g.vgrid.n; ++i)
                for (int j = 0; j < g.vgrid.n; ++j)
                    cell[g.vgrid.index(i, j)] =
                        maxwellian(rho, cfg.U0, cfg.temperature, g.vgrid.point(i, j));
        }
    }
    return g;
}

MomentFields moment_fields(const KineticGrid& grid) {
    MomentFields mf;
    mf.nx = grid.nx;
    const int ncell = grid.nx * grid.nx;
    mf.rho.resize(ncell);
    mf.mx.resize(ncell);
    mf.my.resize(ncell);
    mf.E.resize(ncell);
    const int n = grid.vgrid.n;
    const double w = grid.vgrid.weight();
    for (int cidx = 0; cidx < ncell; ++cidx) {
        const double* cell = grid.f.data() + std::size_t(cidx) * grid.vgrid.size();
        double sr = 0, sx = 0, sy = 0, se = 0;
        for (int i = 0; i < n; ++i) {
            const double x1 = grid.vgrid.coord(i, 0);
            for (int j = 0; j < n; ++j) {
                const double x2 = grid.vgrid.coord(j, 1);
                const double v = cell[std::size_t(i) * n + j];
                sr += v;
                sx += x1 * v;
                sy += x2 * v;
                se += 0.5 * (x1 * x1 + x2 * x2) * v;
            }
        }
        mf.rho[cidx] = w * sr;
        mf.mx[cidx] = w * sx;
        mf.my[cidx] = w * sy;
        mf.E[cidx] = w * se;
    }
    return mf;
}

namespace {

struct FluxFields {
    std::vector<double> p11, p12, p22, qx, qy;  // int xi_a xi_b f, int xi |xi|^2/2 f
};

FluxFields flux_fields(const KineticGrid& grid) {
    FluxFields ff;
    const int ncell = grid.nx * grid.nx;
    ff.p11.resize(ncell);
    ff.p12.resize(ncell);
    ff.p22.resize(ncell);
    ff.qx.resize(ncell);
    ff.qy.resize(ncell);
    const int n = grid.vgrid.n;
    const double w = grid.vgrid.weight();
    for (int cidx = 0; cidx < ncell; ++cidx) {
        const double* cell = grid.f.data() + std::size_t(cidx) * grid.vgrid.size();
        double p11 = 0, p12 = 0, p22 = 0, qx = 0, qy = 0;
        for (int i = 0; i < n; ++i) {
            const double x1 = grid.vgrid.coord(i, 0);
            for (int j = 0; j < n; ++j) {
                const double x2 = grid.vgrid.coord(j, 1);
                const double v = cell[std::size_t(i) * n + j];
                const double e = 0.5 * (x1 * x1 + x2 * x2);
                p11 += x1 * x1 * v;
                p12 += x1 * x2 * v;
                p22 += x2 * x2 * v;
                qx += x1 * e * v;
                qy += x2 * e * v;
            }
        }
        ff.p11[cidx] = w * p11;
        ff.p12[cidx] = w * p12;
        ff.p22[cidx] = w * p22;
        ff.qx[cidx] = w * qx;
        ff.qy[cidx] = w * qy;
    }
    return ff;
}

} // namespace

BgkDiagnostics bgk_run(const BgkConfig& cfg, KineticGrid* final_grid) {
    KineticGrid grid = make_grid(cfg);
    const int nsteps = std::max(1, int(std::ceil(cfg.t_end / grid.dt)));
    grid.dt = cfg.t_end / nsteps;

    BgkDiagnostics diag;
    std::vector<MomentFields> mhist;
    std::vector<FluxFields> fhist;

    auto record = [&](double t) {
        mhist.push_back(moment_fields(grid));
        fhist.push_back(flux_fields(grid));
        const MomentFields& mf = mhist.back();
        diag.t.push_back(t);
        diag.mass.push_back(pairwise_sum(mf.rho.data(), mf.rho.size()) * grid.hx() * grid.hx());
        diag.mom_x.push_back(pairwise_sum(mf.mx.data(), mf.mx.size()) * grid.hx() * grid.hx());
        diag.mom_y.push_back(pairwise_sum(mf.my.data(), mf.my.size()) * grid.hx() * grid.hx());
        diag.energy.push_back(pairwise_sum(mf.E.data(), mf.E.size()) * grid.hx() * grid.hx());
        diag.max_balance_residual.push_back(0.0);
    };

    record(0.0);
    for (int step = 0; step < nsteps; ++step) {
        bgk_step(grid);
        record((step + 1) * grid.dt);
    }

    // moment-system balance residual by centered finite differences
    const int nx = grid.nx;
    const double hx = grid.hx();
    auto wrap = [nx](int i) { return ((i % nx) + nx) % nx; };
    auto ddx = [&](const std::vector<double>& v, int ix, int iy) {
        return (v[wrap(ix + 1) * nx + iy] - v[wrap(ix - 1) * nx + iy]) / (2 * hx);
    };
    auto ddy = [&](const std::vector<double>& v, int ix, int iy) {
        return (v[ix * nx + wrap(iy + 1)] - v[ix * nx + wrap(iy - 1)]) / (2 * hx);
    };
    for (std::size_t ti = 1; ti + 1 < mhist.size(); ++ti) {
        const double dt2 = diag.t[ti + 1] - diag.t[ti - 1];
        double maxres = 0;
        for (int ix = 0; ix < nx; ++ix) {
            for (int iy = 0; iy < nx; ++iy) {
                const int c = ix * nx + iy;
                const double drho = (mhist[ti + 1].rho[c] - mhist[ti - 1].rho[c]) / dt2;
                const double dmx = (mhist[ti + 1].mx[c] - mhist[ti - 1].mx[c]) / dt2;
                const double dmy = (mhist[ti + 1].my[c] - mhist[ti - 1].my[c]) / dt2;
                const double dE = (mhist[ti + 1].E[c] - mhist[ti - 1].E[c]) / dt2;
                const FluxFields& ff = fhist[ti];
                const MomentFields& mf = mhist[ti];
                const double rmass = drho + ddx(mf.mx, ix, iy) + ddy(mf.my, ix, iy);
                const double rmx = dmx + ddx(ff.p11, ix, iy) + ddy(ff.p12, ix, iy) -
                                   2 * grid.k * mf.my[c];
                const double rmy = dmy + ddx(ff.p12, ix, iy) + ddy(ff.p22, ix, iy) +
                                   2 * grid.k * mf.mx[c];
                const double rE = dE + ddx(ff.qx, ix, iy) + ddy(ff.qy, ix, iy);
                maxres = std::max({maxres, std::fabs(rmass), std::fabs(rmx), std::fabs(rmy),
                                   std::fabs(rE)});
            }
        }
        diag.max_balance_residual[ti] = maxres;
    }

    if (final_grid) *final_grid = std::move(grid);
    return diag;
}

void write_snapshot(const KineticGrid& grid, const std::string& path) {
    const MomentFields mf = moment_fields(grid);
    nlohmann::json header = {
        {"shape", {grid.nx, grid.nx}},
        {"fields", {"rho", "mx", "my", "E"}},
        {"dt", grid.dt},
        {"k", grid.k},
        {"tau", grid.tau_relax},
        {"T", grid.temperature},
        {"endianness", "little"},
        {"dtype", "float64"},
    };
    std::ofstream out(path, std::ios::binary);
    out << header.dump() << '\n';
    auto dump = [&](const std::vector<double>& v) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  std::streamsize(v.size() * sizeof(double)));
    };
    dump(mf.rho);
    dump(mf.mx);
    dump(mf.my);
    dump(mf.E);
}

} // namespace rotorct
