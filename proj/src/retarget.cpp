#include "mocap/retarget.hpp"

#include <algorithm>
#include <string>

#include "mocap/errors.hpp"

namespace mocap {
namespace {

void throw_first_finding(const ValidationReport& report) {
    if (report.ok()) return;
    const ValidationFinding& f = report.findings.front();
    switch (f.kind) {
        case ValidationFinding::Kind::MissingJoint:
            throw Error(ErrorCode::MissingJoint, f.message);
        case ValidationFinding::Kind::NonFinite:
            throw Error(ErrorCode::NonFinite, f.message);
        case ValidationFinding::Kind::DegenerateBone:
            throw Error(ErrorCode::DegenerateBone, f.message);
    }
}

}  // namespace

Frame smooth_positions(const Frame& prev_smoothed, const Frame& raw, double alpha) {
    if (alpha == 0.0) return raw;
    Frame out;
    out.t = raw.t;
    for (int j = 0; j < kJointCount; ++j) {
        out.positions[j] = prev_smoothed.positions[j] * alpha +
                           raw.positions[j] * (1.0 - alpha);
    }
    return out;
}

RetargetState init_state(const Frame& first_frame, const RigDefinition& rig,
                         const SmoothingConfig& smoothing) {
    throw_first_finding(validate_frame(first_frame, kinect20_topology()));
    check_pipeline_rig(rig);

    RetargetState state;
    state.rig = rig;
    state.smoothing = smoothing;
    state.rig_index.fill(-1);
    for (size_t i = 0; i < rig.joints.size(); ++i) {
        state.rig_index[joint_index(*parse_joint_name(rig.joints[i].name))] =
            static_cast<int>(i);
    }

    const auto vectors = bone_vectors(first_frame, kinect20_topology());
    for (int b = 0; b < kBoneCount; ++b) state.prev_bone_vectors[b] = vectors[b].v;
    state.accumulated.fill(Mat3::identity());

    const double source_hip_y = first_frame.position(JointId::HipCenter).y;
    if (source_hip_y <= 1e-6) {
        throw Error(ErrorCode::ZeroHipHeight, "source hip height not positive");
    }
    state.source_rest_hip = first_frame.position(JointId::HipCenter);
    state.rig_rest_hip =
        rig.joints[state.rig_index[joint_index(JointId::HipCenter)]].offset;
    state.root_scale =
        std::clamp(state.rig_rest_hip.y / source_hip_y, 0.1, 10.0);

    state.prev_smoothed = first_frame;
    state.prev_t = first_frame.t;
    state.frame_index = 0;
    return state;
}

RigPose retarget_step(RetargetState& state, const Frame& frame) {
    if (frame.t <= state.prev_t) {
        throw Error(ErrorCode::NonMonotonicTime,
                    "t=" + std::to_string(frame.t) + " after t=" +
                        std::to_string(state.prev_t));
    }
    throw_first_finding(validate_frame(frame, kinect20_topology()));

    const Frame smoothed =
        smooth_positions(state.prev_smoothed, frame, state.smoothing.alpha);
    const auto vectors = bone_vectors(smoothed, kinect20_topology());

    RigPose pose;
    pose.t = frame.t;
    for (int b = 0; b < kBoneCount; ++b) {
        const Bone bone = vectors[b].bone;
        const Mat3 delta =
            rodrigues(axis_angle_between(state.prev_bone_vectors[b], vectors[b].v));
        const int child = joint_index(bone.child);
        state.accumulated[child] = accumulate(state.accumulated[child], delta);
        state.prev_bone_vectors[b] = vectors[b].v;
    }
    pose.rotations = state.accumulated;
    pose.root_translation =
        (smoothed.position(JointId::HipCenter) - state.source_rest_hip) *
            state.root_scale +
        state.rig_rest_hip;

    state.prev_smoothed = smoothed;
    state.prev_t = frame.t;
    ++state.frame_index;
    return pose;
}

RigPose identity_pose(const RetargetState& state, double t) {
    RigPose pose;
    pose.t = t;
    pose.rotations.fill(Mat3::identity());
    pose.root_translation = state.rig_rest_hip;
    return pose;
}

std::array<Vec3, kJointCount> forward_kinematics(const RigDefinition& rig,
                                                 const RigPose& pose) {
    const SkeletonTopology& topo = kinect20_topology();
    std::array<int, kJointCount> rig_index;
    rig_index.fill(-1);
    for (size_t i = 0; i < rig.joints.size(); ++i) {
        const auto id = parse_joint_name(rig.joints[i].name);
        if (id) rig_index[joint_index(*id)] = static_cast<int>(i);
    }

    std::array<Vec3, kJointCount> positions{};
    positions[joint_index(JointId::HipCenter)] = pose.root_translation;
    // topo.bones is ordered parent-before-child along every chain
    for (const Bone& bone : topo.bones) {
        const int child = joint_index(bone.child);
        const Vec3& rest_offset = rig.joints[rig_index[child]].offset;
        positions[child] = positions[joint_index(bone.parent)] +
                           pose.rotations[child] * rest_offset;
    }
    return positions;
}

void run_stream(const FrameSource& next_frame, const RigDefinition& rig,
                const RetargetOptions& options, const PoseSink& sink,
                const DropLog& on_drop) {
    std::optional<RetargetState> state;
    long index = -1;
    bool any = false;
    while (true) {
        std::optional<Frame> frame = next_frame();
        if (!frame) break;
        any = true;
        ++index;
        if (index < options.rest_frame) continue;
        try {
            StreamResult result;
            result.index = index;
            if (!state) {
                state = init_state(*frame, rig, options.smoothing);
                result.pose = identity_pose(*state, frame->t);
            } else {
                result.pose = retarget_step(*state, *frame);
            }
            result.positions = forward_kinematics(state->rig, result.pose);
            sink(result);
        } catch (const Error& e) {
            if (options.skip_bad_frames) {
                if (on_drop) on_drop(index, e.what());
                continue;
            }
            throw Error(e.code(),
                        "frame " + std::to_string(index) + ": " + e.what());
        }
    }
    if (!any) {
        throw Error(ErrorCode::TooShort, "no frames");
    }
}

std::vector<StreamResult> run_stream(const std::vector<Frame>& frames,
                                     const RigDefinition& rig,
                                     const RetargetOptions& options) {
    std::vector<StreamResult> out;
    out.reserve(frames.size());
    size_t i = 0;
    run_stream(
        [&]() -> std::optional<Frame> {
            if (i >= frames.size()) return std::nullopt;
            return frames[i++];
        },
        rig, options, [&](const StreamResult& r) { out.push_back(r); });
    return out;
}

}  // namespace mocap
