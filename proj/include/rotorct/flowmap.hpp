#pragma once

#include <optional>

#include "rotorct/fields.hpp"

namespace rotorct {

struct FlowMapState {
    Vec2 X{};          // position
    Vec2 Xdot{};       // velocity along the path, e^{2kJt} U0
    Mat2 jac;              // dX/dalpha
    double det_scaled = 1; // det(2k jac)/(4k^2); 1 at t = 0
};

struct OrbitDescriptor {
    Vec2 center{};     // alpha + (1/2k) J U0
    double radius = 0; // |U0|/(2k)
    double period = 0; // pi/k
};

/// Planar rotation e^{theta J} = [[cos, sin], [-sin, cos]].
Mat2 rot_exp(double theta);

FlowMapState flow_map(const Vec2& alpha, const Vec2& U0, double k, double t);

OrbitDescriptor orbit_descriptor(const Vec2& alpha, const Vec2& U0, double k);

/// dX/dalpha = I + (1/2k) J (I - e^{2kJt}) grad0.
Mat2 jacobian(const Mat2& grad0, double k, double t);

/// Closed-form det(2k jac) = 4k^2 - 2k w0 + 2 det0 + (2k w0 - 2 det0) cos 2kt + 2k d0 sin 2kt.
double jacobian_det(double omega0, double d0, double det0, double k, double t);

/// First positive zero of the Jacobian determinant, or none when the data is
/// strictly subcritical. A tangency (marginal data) still reports the touch time.
std::optional<double> first_singularity(double omega0, double d0, double det0, double k);

/// Eulerian velocity gradient along the path: (grad0 + 2kJ(jac - I)) jac^{-1}.
Mat2 eulerian_gradient(const Mat2& grad0, double k, double t);

/// Newton inversion of the flow map seeded from the closest coarse-grid preimage.
Vec2 invert_flow_map(const Vec2& x, double t, const FieldSpec& spec, double k,
                     const Lattice& seed_grid);

} // namespace rotorct
