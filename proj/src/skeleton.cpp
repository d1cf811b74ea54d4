#include "mocap/skeleton.hpp"

#include "mocap/errors.hpp"

namespace mocap {
namespace {

constexpr std::array<const char*, kJointCount> kJointNames = {
    "HipCenter",     "Spine",      "ShoulderCenter", "Head",
    "ShoulderLeft",  "ElbowLeft",  "WristLeft",      "HandLeft",
    "ShoulderRight", "ElbowRight", "WristRight",     "HandRight",
    "HipLeft",       "KneeLeft",   "AnkleLeft",      "FootLeft",
    "HipRight",      "KneeRight",  "AnkleRight",     "FootRight",
};

SkeletonTopology build_kinect20() {
    SkeletonTopology topo;
    topo.root = JointId::HipCenter;
    auto set = [&](JointId child, JointId parent) {
        topo.parent[joint_index(child)] = joint_index(parent);
    };
    topo.parent[joint_index(JointId::HipCenter)] = -1;
    set(JointId::Spine, JointId::HipCenter);
    set(JointId::ShoulderCenter, JointId::Spine);
    set(JointId::Head, JointId::ShoulderCenter);
    set(JointId::ShoulderLeft, JointId::ShoulderCenter);
    set(JointId::ElbowLeft, JointId::ShoulderLeft);
    set(JointId::WristLeft, JointId::ElbowLeft);
    set(JointId::HandLeft, JointId::WristLeft);
    set(JointId::ShoulderRight, JointId::ShoulderCenter);
    set(JointId::ElbowRight, JointId::ShoulderRight);
    set(JointId::WristRight, JointId::ElbowRight);
    set(JointId::HandRight, JointId::WristRight);
    set(JointId::HipLeft, JointId::HipCenter);
    set(JointId::KneeLeft, JointId::HipLeft);
    set(JointId::AnkleLeft, JointId::KneeLeft);
    set(JointId::FootLeft, JointId::AnkleLeft);
    set(JointId::HipRight, JointId::HipCenter);
    set(JointId::KneeRight, JointId::HipRight);
    set(JointId::AnkleRight, JointId::KneeRight);
    set(JointId::FootRight, JointId::AnkleRight);

    int b = 0;
    for (int j = 0; j < kJointCount; ++j) {
        if (topo.parent[j] < 0) continue;
        topo.bones[b++] = Bone{static_cast<JointId>(topo.parent[j]),
                               static_cast<JointId>(j)};
    }
    return topo;
}

}  // namespace

const char* joint_name(JointId id) { return kJointNames[joint_index(id)]; }

std::optional<JointId> parse_joint_name(std::string_view name) {
    for (int i = 0; i < kJointCount; ++i) {
        if (name == kJointNames[i]) return static_cast<JointId>(i);
    }
    return std::nullopt;
}

const SkeletonTopology& kinect20_topology() {
    static const SkeletonTopology topo = build_kinect20();
    return topo;
}

ValidationReport validate_frame(const Frame& frame, const SkeletonTopology& topo,
                                const std::array<bool, kJointCount>* present) {
    ValidationReport report;
    for (int j = 0; j < kJointCount; ++j) {
        const JointId id = static_cast<JointId>(j);
        if (present && !(*present)[j]) {
            report.findings.push_back({ValidationFinding::Kind::MissingJoint, id,
                                       std::string("missing joint ") + joint_name(id)});
            continue;
        }
        if (!frame.positions[j].finite()) {
            report.findings.push_back({ValidationFinding::Kind::NonFinite, id,
                                       std::string("non-finite position for ") + joint_name(id)});
        }
    }
    if (!report.ok()) return report;

    for (const Bone& bone : topo.bones) {
        const Vec3 v = frame.position(bone.child) - frame.position(bone.parent);
        if (v.norm() <= kBoneLengthEpsilon) {
            report.findings.push_back(
                {ValidationFinding::Kind::DegenerateBone, bone.child,
                 std::string("degenerate bone ") + joint_name(bone.parent) + "->" +
                     joint_name(bone.child)});
        }
    }
    return report;
}

std::array<BoneVector, kBoneCount> bone_vectors(const Frame& frame,
                                                const SkeletonTopology& topo) {
    std::array<BoneVector, kBoneCount> out;
    for (int b = 0; b < kBoneCount; ++b) {
        const Bone& bone = topo.bones[b];
        const Vec3 v = frame.position(bone.child) - frame.position(bone.parent);
        if (v.norm() <= kBoneLengthEpsilon) {
            throw Error(ErrorCode::DegenerateBone,
                        std::string(joint_name(bone.parent)) + "->" +
                            joint_name(bone.child));
        }
        out[b] = BoneVector{bone, v};
    }
    return out;
}

}  // namespace mocap
