#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mocap/rig.hpp"
#include "mocap/rotation.hpp"
#include "mocap/skeleton.hpp"

namespace mocap {

// Exponential moving average on source joint positions, applied before bone
// vectors are extracted. alpha = 0 disables it and leaves the math exact.
struct SmoothingConfig {
    double alpha = 0.0;  // [0, 1]
};

// One output sample: accumulated world rotation per non-root joint's incoming
// bone (root entry stays identity) plus the scaled root translation.
struct RigPose {
    double t = 0.0;
    Vec3 root_translation;
    std::array<Mat3, kJointCount> rotations;
};

struct RetargetOptions {
    SmoothingConfig smoothing;
    long rest_frame = 0;          // stream index of the correspondence pose
    bool skip_bad_frames = false; // drop invalid frames instead of aborting
};

// Running state of one stream: previous bone vectors on the source side and
// the per-joint rotation accumulated since the correspondence pose.
struct RetargetState {
    RigDefinition rig;
    std::array<Vec3, kBoneCount> prev_bone_vectors;
    std::array<Mat3, kJointCount> accumulated;
    double root_scale = 1.0;
    SmoothingConfig smoothing;
    long frame_index = 0;

    Frame prev_smoothed;
    Vec3 source_rest_hip;
    Vec3 rig_rest_hip;
    double prev_t = 0.0;
    std::array<int, kJointCount> rig_index;  // canonical joint -> rig joint
};

Frame smooth_positions(const Frame& prev_smoothed, const Frame& raw, double alpha);

// Correspondence pose: accumulated rotations start at identity here, and the
// root scale is fixed from the hip-height ratio (clamped to [0.1, 10]).
RetargetState init_state(const Frame& first_frame, const RigDefinition& rig,
                         const SmoothingConfig& smoothing);

// Per bone: delta rotation from the previous bone vector to the current one,
// pre-multiplied onto the running rotation. Advances the state.
RigPose retarget_step(RetargetState& state, const Frame& frame);

// Identity pose at the correspondence frame (what frame 0 of a stream emits).
RigPose identity_pose(const RetargetState& state, double t);

// World joint positions from rest offsets and per-joint world rotations,
// root to leaves. Output bone lengths equal the rig's rest lengths.
std::array<Vec3, kJointCount> forward_kinematics(const RigDefinition& rig,
                                                 const RigPose& pose);

struct StreamResult {
    long index = 0;  // stream index of the source frame
    RigPose pose;
    std::array<Vec3, kJointCount> positions;
};

using FrameSource = std::function<std::optional<Frame>()>;
using PoseSink = std::function<void(const StreamResult&)>;
using DropLog = std::function<void(long index, const std::string& reason)>;

// Pulls frames one at a time and emits one pose per frame; state size is
// independent of stream length. The first retained frame emits the identity
// pose. Frames before options.rest_frame are consumed without output. A
// failing frame aborts with its validation error and index, unless
// skip_bad_frames is set, in which case it is dropped and reported to on_drop.
void run_stream(const FrameSource& next_frame, const RigDefinition& rig,
                const RetargetOptions& options, const PoseSink& sink,
                const DropLog& on_drop = {});

// Buffered convenience wrapper.
std::vector<StreamResult> run_stream(const std::vector<Frame>& frames,
                                     const RigDefinition& rig,
                                     const RetargetOptions& options = {});

}  // namespace mocap
