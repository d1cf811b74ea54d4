#include "mocap/rotation.hpp"

#include <cmath>

#include "mocap/errors.hpp"

namespace mocap {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegPerRad = 180.0 / kPi;
constexpr double kRadPerDeg = kPi / 180.0;

// Deterministic unit vector perpendicular to a: cross a with the standard
// basis vector having the smallest |component| in a, lowest index on ties.
Vec3 fallback_perpendicular(const Vec3& a) {
    const double ax = std::abs(a.x), ay = std::abs(a.y), az = std::abs(a.z);
    Vec3 e{1, 0, 0};
    if (ay < ax) e = (az < ay) ? Vec3{0, 0, 1} : Vec3{0, 1, 0};
    else if (az < ax) e = Vec3{0, 0, 1};
    return a.cross(e).normalized();
}

}  // namespace

Mat3 rodrigues(const AxisAngle& aa) {
    if (std::abs(aa.v.norm() - 1.0) > 1e-6) {
        throw Error(ErrorCode::NonUnitAxis, "axis norm deviates from 1");
    }
    const double x = aa.v.x, y = aa.v.y, z = aa.v.z;
    const double c = std::cos(aa.theta);
    const double s = std::sin(aa.theta);
    const double k = 1.0 - c;
    return Mat3{{c + k * x * x,     k * x * y - s * z, k * x * z + s * y,
                 k * y * x + s * z, c + k * y * y,     k * y * z - s * x,
                 k * z * x - s * y, k * z * y + s * x, c + k * z * z}};
}

AxisAngle axis_angle_between(const Vec3& a, const Vec3& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na <= 1e-12 || nb <= 1e-12) {
        throw Error(ErrorCode::ZeroVector, "zero-length input vector");
    }
    const Vec3 ua = a / na;
    const Vec3 ub = b / nb;
    const Vec3 cr = ua.cross(ub);
    const double sin_theta = cr.norm();
    const double cos_theta = ua.dot(ub);
    AxisAngle aa;
    aa.theta = std::atan2(sin_theta, cos_theta);
    if (sin_theta <= 1e-12) {
        aa.v = fallback_perpendicular(ua);
        aa.theta = cos_theta >= 0.0 ? 0.0 : kPi;
    } else {
        aa.v = cr / sin_theta;
    }
    return aa;
}

Mat3 orthonormalize(const Mat3& r) {
    if (r.det() <= 1e-9) {
        throw Error(ErrorCode::SingularMatrix, "determinant <= 1e-9");
    }
    Vec3 r0 = r.row(0).normalized();
    Vec3 r1 = r.row(1) - r0 * r.row(1).dot(r0);
    r1 = r1.normalized();
    const Vec3 r2 = r0.cross(r1);
    return Mat3::from_rows(r0, r1, r2);
}

Mat3 accumulate(const Mat3& prev, const Mat3& delta) {
    return orthonormalize(delta * prev);
}

EulerZXY rotation_to_euler(const Mat3& r) {
    // r = Rz(z)*Rx(x)*Ry(y) puts sin(x) at entry (2,1); z and y come from the
    // cos(x)-scaled entries. atan2 on those stays exact down to tiny cos(x),
    // so the fold-into-z branch triggers only when (0,1) and (1,1) carry no
    // signal at all.
    EulerZXY e;
    const double sx = std::clamp(r(2, 1), -1.0, 1.0);
    e.x = std::asin(sx) * kDegPerRad;
    if (std::hypot(r(0, 1), r(1, 1)) < 1e-9) {
        e.y = 0.0;
        e.z = std::atan2(r(1, 0), r(0, 0)) * kDegPerRad;
    } else {
        e.z = std::atan2(-r(0, 1), r(1, 1)) * kDegPerRad;
        e.y = std::atan2(-r(2, 0), r(2, 2)) * kDegPerRad;
    }
    return e;
}

Mat3 euler_to_rotation(const EulerZXY& e) {
    const double cz = std::cos(e.z * kRadPerDeg), sz = std::sin(e.z * kRadPerDeg);
    const double cx = std::cos(e.x * kRadPerDeg), sx = std::sin(e.x * kRadPerDeg);
    const double cy = std::cos(e.y * kRadPerDeg), sy = std::sin(e.y * kRadPerDeg);
    const Mat3 rz{{cz, -sz, 0, sz, cz, 0, 0, 0, 1}};
    const Mat3 rx{{1, 0, 0, 0, cx, -sx, 0, sx, cx}};
    const Mat3 ry{{cy, 0, sy, 0, 1, 0, -sy, 0, cy}};
    return rz * rx * ry;
}

bool is_rotation(const Mat3& r, double tol) {
    const Mat3 rtr = r.transposed() * r;
    if (rtr.max_abs_diff(Mat3::identity()) > tol) return false;
    return std::abs(r.det() - 1.0) <= tol;
}

}  // namespace mocap
