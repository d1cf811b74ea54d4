#include "mocap/synth.hpp"

#include <cmath>
#include <random>

#include "mocap/errors.hpp"

namespace mocap {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBaseStature = 1.75;

// Deterministic across platforms: mt19937_64 output mapped by hand, Gaussian
// via Box-Muller (std distributions are implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    Vec3 unit_vector() {
        // uniform on the sphere via z and azimuth
        const double z = uniform(-1.0, 1.0);
        const double a = uniform(0.0, 2.0 * kPi);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(a), r * std::sin(a), z};
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

double smoothstep(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

// half-cosine ease: 0 -> 1 with zero end velocities
double half_cos(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return 0.5 - 0.5 * std::cos(kPi * u);
}

struct SidedIndices {
    int hip, knee, ankle, foot, shoulder, elbow, wrist, hand;
};

SidedIndices sided(Side side) {
    if (side == Side::Left) {
        return {joint_index(JointId::HipLeft),      joint_index(JointId::KneeLeft),
                joint_index(JointId::AnkleLeft),    joint_index(JointId::FootLeft),
                joint_index(JointId::ShoulderLeft), joint_index(JointId::ElbowLeft),
                joint_index(JointId::WristLeft),    joint_index(JointId::HandLeft)};
    }
    return {joint_index(JointId::HipRight),      joint_index(JointId::KneeRight),
            joint_index(JointId::AnkleRight),    joint_index(JointId::FootRight),
            joint_index(JointId::ShoulderRight), joint_index(JointId::ElbowRight),
            joint_index(JointId::WristRight),    joint_index(JointId::HandRight)};
}

void validate_spec(const MotionSpec& spec) {
    const bool ok =
        spec.duration_s > 0 && spec.duration_s <= 600 && spec.fps > 0 &&
        spec.fps <= 1000 && spec.stature_m >= 0.5 && spec.stature_m <= 3.0 &&
        spec.jump_rise_m > 0 && spec.jump_rise_m <= 2.0 &&
        spec.noise_sigma_m >= 0 && spec.noise_sigma_m <= 0.02 &&
        std::abs(spec.trace_degrees) <= 360.0;
    if (!ok) throw Error(ErrorCode::InvalidSpec, "motion spec out of range");
}

long frame_count(const MotionSpec& spec) {
    const long n = std::llround(spec.duration_s * spec.fps);
    if (n < 1) throw Error(ErrorCode::InvalidSpec, "clip would be empty");
    return n;
}

// ------------------------------------------------------------- rest skeleton

std::array<Vec3, kJointCount> rest_offsets(double stature_m) {
    const double s = stature_m / kBaseStature;
    std::array<Vec3, kJointCount> o{};
    auto set = [&](JointId id, double x, double y, double z) {
        o[joint_index(id)] = Vec3{x, y, z} * s;
    };
    set(JointId::HipCenter, 0, 0.98, 0);  // world rest position of the root
    set(JointId::Spine, 0, 0.24, 0);
    set(JointId::ShoulderCenter, 0, 0.22, 0);
    set(JointId::Head, 0, 0.20, 0);
    set(JointId::ShoulderLeft, 0.19, -0.03, 0);
    set(JointId::ElbowLeft, 0.02, -0.28, 0);
    set(JointId::WristLeft, 0.01, -0.26, 0);
    set(JointId::HandLeft, 0, -0.09, 0);
    set(JointId::ShoulderRight, -0.19, -0.03, 0);
    set(JointId::ElbowRight, -0.02, -0.28, 0);
    set(JointId::WristRight, -0.01, -0.26, 0);
    set(JointId::HandRight, 0, -0.09, 0);
    set(JointId::HipLeft, 0.10, -0.09, 0);
    set(JointId::KneeLeft, 0, -0.41, 0);
    set(JointId::AnkleLeft, 0, -0.41, 0);
    set(JointId::FootLeft, 0, -0.06, -0.14);
    set(JointId::HipRight, -0.10, -0.09, 0);
    set(JointId::KneeRight, 0, -0.41, 0);
    set(JointId::AnkleRight, 0, -0.41, 0);
    set(JointId::FootRight, 0, -0.06, -0.14);
    return o;
}

std::array<Vec3, kJointCount> rest_world(double stature_m) {
    const auto offsets = rest_offsets(stature_m);
    const SkeletonTopology& topo = kinect20_topology();
    std::array<Vec3, kJointCount> pos{};
    pos[joint_index(JointId::HipCenter)] = offsets[joint_index(JointId::HipCenter)];
    for (const Bone& bone : topo.bones) {
        pos[joint_index(bone.child)] =
            pos[joint_index(bone.parent)] + offsets[joint_index(bone.child)];
    }
    return pos;
}

// ---------------------------------------------------------- rotation traces

// Bones leaving a multi-child joint share one trace so the motion stays
// representable as a joint hierarchy.
int trace_group(JointId child) {
    switch (child) {
        case JointId::Spine:
        case JointId::HipLeft:
        case JointId::HipRight: return 0;  // out of HipCenter
        case JointId::Head:
        case JointId::ShoulderLeft:
        case JointId::ShoulderRight: return 1;  // out of ShoulderCenter
        default: return 2 + joint_index(child);
    }
}

struct TraceParams {
    Vec3 axis{0, 0, 1};
    double amplitude_rad = 0.0;
    double frequency_hz = 0.0;
};

SynthClip generate_rotation_trace(const MotionSpec& spec) {
    const long n = frame_count(spec);
    Rng rng(spec.seed);
    const RigDefinition rig = default_rig(spec.stature_m);

    std::array<TraceParams, 2 + kJointCount> groups{};
    for (size_t g = 0; g < groups.size(); ++g) {
        // Shared group traces (bones leaving HipCenter / ShoulderCenter)
        // rotate about +z, which is perpendicular to all their rest
        // directions: the minimal per-step rotation then equals the true
        // one, so sibling bones accumulate identical matrices and the clip
        // stays exactly representable as a joint hierarchy.
        groups[g].axis = g < 2 ? Vec3{0, 0, 1} : rng.unit_vector();
        groups[g].amplitude_rad = rng.uniform(0.17, 0.60);  // ~10..35 degrees
        groups[g].frequency_hz = rng.uniform(0.3, 0.9);
    }

    SynthClip clip;
    clip.spec = spec;
    clip.frames.reserve(n);
    clip.truth.rotations.reserve(n);

    const SkeletonTopology& topo = kinect20_topology();
    const Vec3 rest_hip = rest_offsets(spec.stature_m)[joint_index(JointId::HipCenter)];
    for (long i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / spec.fps;
        RigPose pose;
        pose.t = t;
        pose.root_translation = rest_hip;
        pose.rotations.fill(Mat3::identity());
        for (const Bone& bone : topo.bones) {
            Mat3 r = Mat3::identity();
            if (spec.trace_bone) {
                if (bone.child == *spec.trace_bone) {
                    const double theta = spec.trace_degrees * (kPi / 180.0) *
                                         (n > 1 ? static_cast<double>(i) /
                                                      static_cast<double>(n - 1)
                                                : 0.0);
                    r = rodrigues({Vec3{0, 0, 1}, std::abs(theta)});
                    if (theta < 0) r = r.transposed();
                }
            } else {
                const TraceParams& g = groups[trace_group(bone.child)];
                const double theta =
                    g.amplitude_rad * std::sin(2.0 * kPi * g.frequency_hz * t);
                r = rodrigues({g.axis, std::abs(theta)});
                if (theta < 0) r = r.transposed();
            }
            pose.rotations[joint_index(bone.child)] = r;
        }
        clip.truth.rotations.push_back(pose.rotations);
        const auto positions = forward_kinematics(rig, pose);
        Frame frame;
        frame.t = t;
        frame.positions = positions;
        clip.frames.push_back(frame);
    }
    return clip;
}

// ------------------------------------------------------------ gesture clips

struct ClipBuilder {
    const MotionSpec& spec;
    std::array<Vec3, kJointCount> rest;
    double scale;  // stature scale relative to the base skeleton

    double leg_upper() const { return 0.41 * scale; }
    double leg_lower() const { return 0.41 * scale; }
    double arm_upper() const { return std::hypot(0.02, 0.28) * scale; }
    double arm_lower() const { return std::hypot(0.01, 0.26) * scale; }
    double hand_len() const { return 0.09 * scale; }
};

using PoseFn = void (*)(const ClipBuilder&, double t, double duration,
                        std::array<Vec3, kJointCount>& pos);

void pose_standing(const ClipBuilder&, double, double,
                   std::array<Vec3, kJointCount>&) {}

void pose_sprint(const ClipBuilder& b, double t, double duration,
                 std::array<Vec3, kJointCount>& pos) {
    const double ratio = 1.2;  // hip speed in heights per second
    const double height = 0.66 * b.scale;
    const double v = ratio * height;
    const double ramp = 0.15 * duration;
    // eased trapezoid speed profile integrated in closed form
    auto travel = [&](double tt) {
        if (tt <= ramp) return 0.5 * v * tt * tt / ramp;
        const double plateau_end = duration - ramp;
        const double base = 0.5 * v * ramp;
        if (tt <= plateau_end) return base + v * (tt - ramp);
        const double u = tt - plateau_end;
        return base + v * (plateau_end - ramp) + v * u - 0.5 * v * u * u / ramp;
    };
    const Vec3 shift{travel(t), 0, 0};
    for (auto& p : pos) p += shift;

    // gait: anti-phase thigh swings in the plane of travel
    const double stride_hz = 1.4;
    const double beta_max = 0.9;
    auto swing_leg = [&](Side side, double phase) {
        const SidedIndices s = sided(side);
        const double beta =
            beta_max * (0.5 - 0.5 * std::cos(2.0 * kPi * stride_hz * t + phase));
        const double bend = 0.5 * beta;
        const Vec3 hip = pos[s.hip];
        const Vec3 foot_offset = pos[s.foot] - pos[s.ankle];
        pos[s.knee] = hip + Vec3{std::sin(beta), -std::cos(beta), 0} * b.leg_upper();
        pos[s.ankle] = pos[s.knee] + Vec3{std::sin(beta - bend),
                                          -std::cos(beta - bend), 0} *
                                         b.leg_lower();
        pos[s.foot] = pos[s.ankle] + foot_offset;
    };
    swing_leg(Side::Left, 0.0);
    swing_leg(Side::Right, kPi);
}

void pose_jump(const ClipBuilder& b, double t, double duration,
               std::array<Vec3, kJointCount>& pos) {
    const double start = duration / 3.0;
    const double air = 0.2 * duration;
    const double tau = (t - start) / air;
    if (tau <= 0.0 || tau >= 1.0) return;
    const double rise = b.spec.jump_rise_m * 4.0 * tau * (1.0 - tau);
    for (auto& p : pos) p += Vec3{0, rise, 0};
}

// Raised-arm wave: forearm oscillates about vertical while the wrist stays
// above the elbow. All motion in the xy-plane.
void wave_arm(const ClipBuilder& b, Side side, double t, double duration,
              std::array<Vec3, kJointCount>& pos) {
    const SidedIndices s = sided(side);
    const double sig = side == Side::Left ? 1.0 : -1.0;
    const double raise_start = 0.1 * duration;
    const double raise_end = 0.2 * duration;
    const double lower_start = 0.9 * duration;
    if (t <= raise_start) return;

    const Vec3 shoulder = pos[s.shoulder];
    const Vec3 up_elbow = shoulder + Vec3{sig * 0.86, 0.5, 0}.normalized() * b.arm_upper();
    auto osc_wrist = [&](double alpha) {
        return up_elbow + Vec3{std::sin(alpha), std::cos(alpha), 0} * b.arm_lower();
    };

    const double wave_hz = 1.2;
    const double amp = 0.45;
    double u;  // blend rest -> raised
    double alpha = 0.0;
    if (t < raise_end) {
        u = smoothstep((t - raise_start) / (raise_end - raise_start));
    } else if (t < lower_start) {
        u = 1.0;
        alpha = amp * std::sin(2.0 * kPi * wave_hz * (t - raise_end));
    } else {
        u = 1.0 - smoothstep((t - lower_start) / (duration - lower_start));
    }
    const Vec3 elbow = pos[s.elbow] * (1.0 - u) + up_elbow * u;
    const Vec3 wrist = pos[s.wrist] * (1.0 - u) + osc_wrist(alpha) * u;
    const Vec3 dir = (wrist - elbow).normalized();
    pos[s.elbow] = elbow;
    pos[s.wrist] = wrist;
    pos[s.hand] = wrist + dir * b.hand_len();
}

void pose_wave_one(const ClipBuilder& b, double t, double duration,
                   std::array<Vec3, kJointCount>& pos) {
    wave_arm(b, b.spec.side, t, duration, pos);
}

void pose_wave_two(const ClipBuilder& b, double t, double duration,
                   std::array<Vec3, kJointCount>& pos) {
    wave_arm(b, Side::Left, t, duration, pos);
    wave_arm(b, Side::Right, t, duration, pos);
}

void pose_throw(const ClipBuilder& b, double t, double duration,
                std::array<Vec3, kJointCount>& pos) {
    const SidedIndices s = sided(b.spec.side);
    const double sig = b.spec.side == Side::Left ? 1.0 : -1.0;
    const double scale = b.scale;

    const double windup_start = 0.25 * duration;
    const double windup_end = 0.45 * duration;
    const double swing_start = 0.5 * duration;
    const double swing_len = 0.25;  // seconds; sets the speed peak
    // recover slowly enough to stay under the throw speed threshold
    const double recover_end = std::min(duration, swing_start + swing_len + 1.0);
    if (t <= 0.1 * duration) return;

    const Vec3 shoulder = pos[s.shoulder];
    const double z_rest = 0.10 * scale;
    const double z_back = 0.30 * scale;
    const double z_front = -0.35 * scale;

    double z;
    if (t < windup_start) {
        z = z_rest * smoothstep((t - 0.1 * duration) / (windup_start - 0.1 * duration));
    } else if (t < windup_end) {
        z = z_rest + (z_back - z_rest) * smoothstep((t - windup_start) /
                                                    (windup_end - windup_start));
    } else if (t < swing_start) {
        z = z_back;
    } else if (t < swing_start + swing_len) {
        z = z_back + (z_front - z_back) * half_cos((t - swing_start) / swing_len);
    } else if (t < recover_end) {
        z = z_front + (z_rest - z_front) *
                          smoothstep((t - swing_start - swing_len) /
                                     (recover_end - swing_start - swing_len));
    } else {
        z = z_rest;
    }

    const Vec3 carry_wrist = shoulder + Vec3{sig * 0.10 * scale, 0.05 * scale, z};
    const Vec3 carry_elbow =
        shoulder + (carry_wrist - shoulder) * 0.55 + Vec3{0, 0.04 * scale, 0};
    // blend out of the rest pose so the raise is continuous
    const double u = smoothstep((t - 0.1 * duration) /
                                (windup_start - 0.1 * duration));
    const Vec3 wrist = pos[s.wrist] * (1.0 - u) + carry_wrist * u;
    const Vec3 elbow = pos[s.elbow] * (1.0 - u) + carry_elbow * u;
    pos[s.elbow] = elbow;
    pos[s.wrist] = wrist;
    pos[s.hand] = wrist + (wrist - elbow).normalized() * b.hand_len();
}

void pose_heading(const ClipBuilder& b, double t, double duration,
                  std::array<Vec3, kJointCount>& pos) {
    const double start = duration / 3.0;
    const double end = 0.6 * duration;
    if (t <= start || t >= end) return;
    const double u = (t - start) / (end - start);
    const double hump = std::sin(kPi * u) * std::sin(kPi * u);
    pos[joint_index(JointId::Head)].z -= 0.10 * b.scale * hump;
    pos[joint_index(JointId::ShoulderCenter)].z -= 0.02 * b.scale * hump;
    pos[joint_index(JointId::ShoulderLeft)].z -= 0.02 * b.scale * hump;
    pos[joint_index(JointId::ShoulderRight)].z -= 0.02 * b.scale * hump;
}

// Cock the knee slowly, hold, then strike with the knee extending through
// the fast phase, and retract. The strike is the only fast stretch during
// which the knee opens, so it alone reads as a kick.
void pose_kick(const ClipBuilder& b, double t, double duration,
               std::array<Vec3, kJointCount>& pos) {
    const SidedIndices s = sided(b.spec.side);
    const double start = 0.3 * duration;
    const double cock = 0.30, hold = 0.10, strike = 0.35, retract = 0.45;
    const double u = t - start;
    if (u <= 0.0 || u >= cock + hold + strike + retract) return;

    double phi = 0.0;   // thigh swing toward the camera
    double bend = 0.0;  // knee flexion
    if (u < cock) {
        bend = smoothstep(u / cock);
    } else if (u < cock + hold) {
        bend = 1.0;
    } else if (u < cock + hold + strike) {
        const double p = half_cos((u - cock - hold) / strike);
        phi = 1.1 * p;
        bend = 1.0 + (0.05 - 1.0) * p;
    } else {
        const double p = half_cos((u - cock - hold - strike) / retract);
        phi = 1.1 * (1.0 - p);
        bend = 0.05 * (1.0 - p);
    }

    const Vec3 hip = pos[s.hip];
    const Vec3 foot_offset = pos[s.foot] - pos[s.ankle];
    pos[s.knee] = hip + Vec3{0, -std::cos(phi), -std::sin(phi)} * b.leg_upper();
    const double shank = phi - bend;
    pos[s.ankle] = pos[s.knee] +
                   Vec3{0, -std::cos(shank), -std::sin(shank)} * b.leg_lower();
    pos[s.foot] = pos[s.ankle] + foot_offset;
}

GestureEvent make_label(GestureClass cls, Side side, double start_t, double end_t,
                        std::vector<JointId> joints,
                        std::map<std::string, double> metrics = {}) {
    GestureEvent e;
    e.cls = cls;
    e.side = side;
    e.start_t = start_t;
    e.end_t = end_t;
    e.joints = std::move(joints);
    e.metrics = std::move(metrics);
    return e;
}

std::vector<JointId> label_leg_joints(Side side) {
    if (side == Side::Left)
        return {JointId::HipLeft, JointId::KneeLeft, JointId::AnkleLeft};
    if (side == Side::Right)
        return {JointId::HipRight, JointId::KneeRight, JointId::AnkleRight};
    return {JointId::HipLeft,  JointId::KneeLeft,  JointId::AnkleLeft,
            JointId::HipRight, JointId::KneeRight, JointId::AnkleRight};
}

std::vector<JointId> label_arm_joints(Side side) {
    if (side == Side::Left)
        return {JointId::HandLeft, JointId::WristLeft, JointId::ElbowLeft,
                JointId::ShoulderLeft};
    if (side == Side::Right)
        return {JointId::HandRight, JointId::WristRight, JointId::ElbowRight,
                JointId::ShoulderRight};
    return {JointId::HandLeft,      JointId::WristLeft,  JointId::ElbowLeft,
            JointId::ShoulderLeft,  JointId::HandRight,  JointId::WristRight,
            JointId::ElbowRight,    JointId::ShoulderRight};
}

GroundTruth gesture_labels(const MotionSpec& spec) {
    const double d = spec.duration_s;
    GroundTruth truth;
    switch (spec.gesture) {
        case GestureClass::Sprinting:
            truth.events.push_back(make_label(GestureClass::Sprinting, Side::NA,
                                              0.15 * d, 0.85 * d,
                                              label_leg_joints(Side::NA)));
            break;
        case GestureClass::Jumping:
            truth.events.push_back(make_label(
                GestureClass::Jumping, Side::NA, d / 3.0, d / 3.0 + 0.2 * d,
                label_leg_joints(Side::NA),
                {{"jump_height_m", spec.jump_rise_m}}));
            break;
        case GestureClass::OneHandWave:
            truth.events.push_back(make_label(GestureClass::OneHandWave, spec.side,
                                              0.2 * d, 0.9 * d,
                                              label_arm_joints(spec.side)));
            break;
        case GestureClass::TwoHandsWave:
            truth.events.push_back(make_label(GestureClass::TwoHandsWave, Side::Both,
                                              0.2 * d, 0.9 * d,
                                              label_arm_joints(Side::Both)));
            break;
        case GestureClass::Throwing:
            truth.events.push_back(make_label(GestureClass::Throwing, spec.side,
                                              0.25 * d, 0.5 * d + 0.25,
                                              {label_arm_joints(spec.side)[3],
                                               label_arm_joints(spec.side)[2],
                                               label_arm_joints(spec.side)[1]}));
            break;
        case GestureClass::Heading:
            truth.events.push_back(make_label(
                GestureClass::Heading, Side::NA, d / 3.0, 0.6 * d,
                {JointId::Head, JointId::ShoulderLeft, JointId::ShoulderRight}));
            break;
        case GestureClass::Kicking:
            // the strike phase of the cock-hold-strike-retract profile
            truth.events.push_back(make_label(GestureClass::Kicking, spec.side,
                                              0.3 * d + 0.40, 0.3 * d + 0.75,
                                              label_leg_joints(spec.side)));
            break;
    }
    return truth;
}

SynthClip generate_posed(const MotionSpec& spec, PoseFn pose_fn) {
    const long n = frame_count(spec);
    Rng rng(spec.seed);
    ClipBuilder builder{spec, rest_world(spec.stature_m),
                        spec.stature_m / kBaseStature};

    SynthClip clip;
    clip.spec = spec;
    clip.frames.reserve(n);
    for (long i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / spec.fps;
        Frame frame;
        frame.t = t;
        frame.positions = builder.rest;
        pose_fn(builder, t, spec.duration_s, frame.positions);
        if (spec.noise_sigma_m > 0) {
            for (auto& p : frame.positions) {
                p.x += spec.noise_sigma_m * rng.gaussian();
                p.y += spec.noise_sigma_m * rng.gaussian();
                p.z += spec.noise_sigma_m * rng.gaussian();
            }
        }
        clip.frames.push_back(frame);
    }
    if (spec.kind == MotionSpec::Kind::GestureClip) {
        clip.truth = gesture_labels(spec);
    }
    return clip;
}

PoseFn pose_for(GestureClass cls) {
    switch (cls) {
        case GestureClass::Sprinting: return pose_sprint;
        case GestureClass::Jumping: return pose_jump;
        case GestureClass::OneHandWave: return pose_wave_one;
        case GestureClass::TwoHandsWave: return pose_wave_two;
        case GestureClass::Throwing: return pose_throw;
        case GestureClass::Heading: return pose_heading;
        case GestureClass::Kicking: return pose_kick;
    }
    return pose_standing;
}

}  // namespace

Frame rest_pose_frame(double stature_m, double t) {
    Frame frame;
    frame.t = t;
    frame.positions = rest_world(stature_m);
    return frame;
}

RigDefinition default_rig(double stature_m) {
    return rig_from_rest_frame("default", rest_pose_frame(stature_m));
}

SynthClip generate(const MotionSpec& spec) {
    validate_spec(spec);
    switch (spec.kind) {
        case MotionSpec::Kind::Standing:
            return generate_posed(spec, pose_standing);
        case MotionSpec::Kind::RotationTrace:
            return generate_rotation_trace(spec);
        case MotionSpec::Kind::GestureClip:
            return generate_posed(spec, pose_for(spec.gesture));
    }
    throw Error(ErrorCode::InvalidSpec, "unknown kind");
}

std::vector<SynthClip> corpus() {
    std::vector<SynthClip> clips;
    const GestureClass classes[] = {
        GestureClass::Sprinting, GestureClass::Jumping,
        GestureClass::OneHandWave, GestureClass::TwoHandsWave,
        GestureClass::Throwing, GestureClass::Heading, GestureClass::Kicking,
    };
    std::uint64_t seed = 101;
    for (GestureClass cls : classes) {
        MotionSpec spec;
        spec.kind = MotionSpec::Kind::GestureClip;
        spec.gesture = cls;
        spec.side = Side::Right;
        spec.seed = seed++;
        switch (cls) {
            case GestureClass::Sprinting:
            case GestureClass::OneHandWave:
            case GestureClass::TwoHandsWave: spec.duration_s = 4.0; break;
            default: spec.duration_s = 3.0; break;
        }
        clips.push_back(generate(spec));
    }
    MotionSpec standing;
    standing.kind = MotionSpec::Kind::Standing;
    standing.duration_s = 2.0;
    standing.seed = seed;
    clips.push_back(generate(standing));
    return clips;
}

}  // namespace mocap
