#pragma once

#include "mocap/geometry.hpp"

namespace mocap {

// Rotation of theta radians about unit axis v. theta stays in [0, pi]:
// larger swings between consecutive frames are unobservable from a pair of
// bone vectors, so they never arise here.
struct AxisAngle {
    Vec3 v{1, 0, 0};
    double theta = 0.0;
};

// Decomposition r = Rz(z) * Rx(x) * Ry(y), angles in degrees. This is the
// channel order the BVH writer emits.
struct EulerZXY {
    double z = 0.0;
    double x = 0.0;
    double y = 0.0;
};

// Axis-angle rotation matrix. Throws NonUnitAxis if the axis norm deviates
// from 1 by more than 1e-6.
Mat3 rodrigues(const AxisAngle& aa);

// The rotation taking direction a to direction b: axis = normalized cross
// product, theta = atan2(|a x b|, a . b). Parallel and anti-parallel inputs
// get a deterministic fallback axis perpendicular to a. Throws ZeroVector if
// either input has norm <= 1e-12.
AxisAngle axis_angle_between(const Vec3& a, const Vec3& b);

// World-frame pre-multiplication: the increment applies on top of the
// rotation accumulated so far. Re-orthonormalized every call to keep drift
// out of long streams.
Mat3 accumulate(const Mat3& prev, const Mat3& delta);

// Nearest rotation by Gram-Schmidt on rows. Throws SingularMatrix when
// det <= 1e-9.
Mat3 orthonormalize(const Mat3& r);

EulerZXY rotation_to_euler(const Mat3& r);

Mat3 euler_to_rotation(const EulerZXY& e);

// Orthonormality and determinant check used by invariants and tests.
bool is_rotation(const Mat3& r, double tol = 1e-9);

}  // namespace mocap
