#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mocap/geometry.hpp"

namespace mocap {

// The 20-joint skeleton delivered by the Kinect-era SDKs. The enum order is
// the canonical serialization order everywhere in this toolkit.
enum class JointId : int {
    HipCenter = 0,
    Spine,
    ShoulderCenter,
    Head,
    ShoulderLeft,
    ElbowLeft,
    WristLeft,
    HandLeft,
    ShoulderRight,
    ElbowRight,
    WristRight,
    HandRight,
    HipLeft,
    KneeLeft,
    AnkleLeft,
    FootLeft,
    HipRight,
    KneeRight,
    AnkleRight,
    FootRight,
};

constexpr int kJointCount = 20;
constexpr int kBoneCount = 19;

// Degenerate-bone threshold: below any plausible human bone, above
// double-precision noise.
constexpr double kBoneLengthEpsilon = 1e-6;

const char* joint_name(JointId id);
std::optional<JointId> parse_joint_name(std::string_view name);

inline int joint_index(JointId id) { return static_cast<int>(id); }

struct Bone {
    JointId parent;
    JointId child;
    bool operator==(const Bone&) const = default;
};

struct SkeletonTopology {
    JointId root = JointId::HipCenter;
    // parent[i] for joint i; -1 for the root.
    std::array<int, kJointCount> parent{};
    // The 19 bones, ordered by child joint.
    std::array<Bone, kBoneCount> bones{};

    bool is_root(JointId id) const { return parent[joint_index(id)] < 0; }
    JointId parent_of(JointId id) const {
        return static_cast<JointId>(parent[joint_index(id)]);
    }
};

// Fixed hierarchy rooted at HipCenter: a spine chain up to the head, arm
// chains off ShoulderCenter, leg chains off HipCenter.
const SkeletonTopology& kinect20_topology();

// One capture sample: world positions of all 20 joints, meters,
// right-handed, +y up, +z from camera toward performer.
struct Frame {
    double t = 0.0;
    std::array<Vec3, kJointCount> positions{};

    const Vec3& position(JointId id) const { return positions[joint_index(id)]; }
    Vec3& position(JointId id) { return positions[joint_index(id)]; }
};

struct BoneVector {
    Bone bone;
    Vec3 v;  // child position minus parent position
};

struct ValidationFinding {
    enum class Kind { MissingJoint, NonFinite, DegenerateBone };
    Kind kind;
    JointId joint;   // offending joint (bone child for DegenerateBone)
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationFinding> findings;
    bool ok() const { return findings.empty(); }
};

// A frame parsed from the wire always has 20 entries; the optional mask lets
// parsers report joints that never appeared.
ValidationReport validate_frame(const Frame& frame, const SkeletonTopology& topo,
                                const std::array<bool, kJointCount>* present = nullptr);

// Per-bone child-minus-parent vectors. Throws DegenerateBone on a zero-length
// bone; call validate_frame first to collect findings instead.
std::array<BoneVector, kBoneCount> bone_vectors(const Frame& frame,
                                                const SkeletonTopology& topo);

}  // namespace mocap
