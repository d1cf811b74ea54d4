#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mocap/skeleton.hpp"

namespace mocap {

struct RigJoint {
    std::string name;         // canonical capture-joint name after mapping
    std::string source_name;  // the rig's own joint name, kept for BVH output
    int parent = -1;          // index into RigDefinition::joints, -1 for root
    Vec3 offset;              // rest offset from parent; world rest position for the root
};

// A target character's joint hierarchy with rest-pose bone offsets. Parsed
// rigs are canonicalized to the 20-joint vocabulary; hand-built rigs (tests,
// BVH-only use) may be any tree.
struct RigDefinition {
    std::string name;
    std::vector<RigJoint> joints;

    int index_of(std::string_view joint) const;
    int root_index() const;
    std::vector<int> children_of(int index) const;
};

// Rest world positions, index-aligned with rig.joints.
std::vector<Vec3> rest_positions(const RigDefinition& rig);

// A retargeting rig must carry exactly the canonical 20 joints with the
// capture hierarchy and non-degenerate offsets. Throws on violation.
void check_pipeline_rig(const RigDefinition& rig);

// Rig whose rest pose equals the given frame (offsets = the frame's bone
// vectors, root at the frame's hip). The identity-retarget reference.
RigDefinition rig_from_rest_frame(const std::string& name, const Frame& frame);

RigDefinition scaled_rig(const RigDefinition& rig, double factor);

}  // namespace mocap
