#include "mocap/rig.hpp"

#include "mocap/errors.hpp"

namespace mocap {

int RigDefinition::index_of(std::string_view joint) const {
    for (size_t i = 0; i < joints.size(); ++i) {
        if (joints[i].name == joint) return static_cast<int>(i);
    }
    return -1;
}

int RigDefinition::root_index() const {
    for (size_t i = 0; i < joints.size(); ++i) {
        if (joints[i].parent < 0) return static_cast<int>(i);
    }
    return -1;
}

std::vector<int> RigDefinition::children_of(int index) const {
    std::vector<int> out;
    for (size_t i = 0; i < joints.size(); ++i) {
        if (joints[i].parent == index) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<Vec3> rest_positions(const RigDefinition& rig) {
    std::vector<Vec3> pos(rig.joints.size());
    // joints are stored parent-before-child; walk until settled otherwise
    std::vector<bool> done(rig.joints.size(), false);
    size_t remaining = rig.joints.size();
    while (remaining > 0) {
        size_t before = remaining;
        for (size_t i = 0; i < rig.joints.size(); ++i) {
            if (done[i]) continue;
            const int p = rig.joints[i].parent;
            if (p < 0) {
                pos[i] = rig.joints[i].offset;
            } else if (done[p]) {
                pos[i] = pos[p] + rig.joints[i].offset;
            } else {
                continue;
            }
            done[i] = true;
            --remaining;
        }
        if (remaining == before) {
            throw Error(ErrorCode::CycleDetected, "rig joints do not form a tree");
        }
    }
    return pos;
}

void check_pipeline_rig(const RigDefinition& rig) {
    if (rig.joints.size() != kJointCount) {
        throw Error(ErrorCode::UnmappedJoint,
                    "rig must carry exactly the 20 capture joints, has " +
                        std::to_string(rig.joints.size()));
    }
    const SkeletonTopology& topo = kinect20_topology();
    std::array<int, kJointCount> rig_index;
    rig_index.fill(-1);
    for (size_t i = 0; i < rig.joints.size(); ++i) {
        const auto id = parse_joint_name(rig.joints[i].name);
        if (!id) {
            throw Error(ErrorCode::UnmappedJoint, rig.joints[i].name);
        }
        if (rig_index[joint_index(*id)] >= 0) {
            throw Error(ErrorCode::DuplicateJoint, rig.joints[i].name);
        }
        rig_index[joint_index(*id)] = static_cast<int>(i);
    }
    for (int j = 0; j < kJointCount; ++j) {
        const JointId id = static_cast<JointId>(j);
        const RigJoint& rj = rig.joints[rig_index[j]];
        if (topo.is_root(id)) {
            if (rj.parent >= 0) {
                throw Error(ErrorCode::HierarchyMismatch,
                            std::string(joint_name(id)) + " must be the rig root");
            }
            continue;
        }
        if (rj.parent < 0 ||
            rig.joints[rj.parent].name != joint_name(topo.parent_of(id))) {
            throw Error(ErrorCode::HierarchyMismatch,
                        std::string(joint_name(id)) + " has wrong parent");
        }
        if (rj.offset.norm() <= kBoneLengthEpsilon) {
            throw Error(ErrorCode::DegenerateOffset, rj.name);
        }
    }
}

RigDefinition rig_from_rest_frame(const std::string& name, const Frame& frame) {
    const SkeletonTopology& topo = kinect20_topology();
    RigDefinition rig;
    rig.name = name;
    rig.joints.resize(kJointCount);
    for (int j = 0; j < kJointCount; ++j) {
        const JointId id = static_cast<JointId>(j);
        RigJoint& rj = rig.joints[j];
        rj.name = joint_name(id);
        rj.source_name = rj.name;
        if (topo.is_root(id)) {
            rj.parent = -1;
            rj.offset = frame.position(id);
        } else {
            const JointId parent = topo.parent_of(id);
            rj.parent = joint_index(parent);
            rj.offset = frame.position(id) - frame.position(parent);
        }
    }
    return rig;
}

RigDefinition scaled_rig(const RigDefinition& rig, double factor) {
    RigDefinition out = rig;
    for (RigJoint& j : out.joints) j.offset = j.offset * factor;
    return out;
}

}  // namespace mocap
