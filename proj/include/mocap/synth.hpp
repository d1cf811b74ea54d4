#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mocap/gestures.hpp"
#include "mocap/retarget.hpp"
#include "mocap/rig.hpp"

namespace mocap {

// Synthetic capture clips with known ground truth. RotationTrace clips are
// built by applying known world rotations to rest bones through forward
// kinematics, so the retarget engine (which recovers rotations from
// positions) is verified by a genuine round trip. Gesture clips are
// kinematic caricatures for calibrating and regression-testing detectors.
struct MotionSpec {
    enum class Kind { Standing, RotationTrace, GestureClip };

    Kind kind = Kind::Standing;
    GestureClass gesture = GestureClass::Jumping;  // for GestureClip
    Side side = Side::Right;                       // for sided gesture clips
    double duration_s = 2.0;
    double fps = 30.0;
    std::uint64_t seed = 1;
    double stature_m = 1.75;
    double jump_rise_m = 0.30;
    double noise_sigma_m = 0.0;

    // RotationTrace: when set, only this bone (named by child joint) rotates,
    // ramping about +z by trace_degrees over the clip.
    std::optional<JointId> trace_bone;
    double trace_degrees = 90.0;
};

struct GroundTruth {
    std::vector<GestureEvent> events;  // labels for GestureClip
    // RotationTrace: per frame, true world rotation per non-root joint's
    // incoming bone (identity elsewhere).
    std::vector<std::array<Mat3, kJointCount>> rotations;
};

struct SynthClip {
    MotionSpec spec;
    std::vector<Frame> frames;
    GroundTruth truth;
};

// Rest pose of the default skeleton: stature-scaled anthropometric segment
// ratios, facing the camera (-z), +y up.
Frame rest_pose_frame(double stature_m = 1.75, double t = 0.0);

// Rig whose rest pose equals rest_pose_frame(stature_m).
RigDefinition default_rig(double stature_m = 1.75);

SynthClip generate(const MotionSpec& spec);

// One deterministic clip per gesture class plus the standing null clip.
std::vector<SynthClip> corpus();

}  // namespace mocap
