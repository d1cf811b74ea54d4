#include <doctest.h>

#include <set>

#include "mocap/skeleton.hpp"
#include "support/test_util.hpp"

using namespace mocap;

namespace {

Frame simple_frame() {
    // spread joints so every bone has positive length
    Frame f;
    f.t = 0.0;
    for (int j = 0; j < kJointCount; ++j) {
        f.positions[j] = Vec3{0.1 * j, 1.0 + 0.05 * j, 0.02 * j};
    }
    return f;
}

}  // namespace

TEST_CASE("kinect20 topology is the fixed 20-joint tree") {
    const SkeletonTopology& topo = kinect20_topology();
    CHECK(topo.root == JointId::HipCenter);
    CHECK(topo.bones.size() == 19);
    CHECK(topo.is_root(JointId::HipCenter));
    CHECK(topo.parent_of(JointId::Head) == JointId::ShoulderCenter);
    CHECK(topo.parent_of(JointId::Spine) == JointId::HipCenter);
    CHECK(topo.parent_of(JointId::HandLeft) == JointId::WristLeft);
    CHECK(topo.parent_of(JointId::FootRight) == JointId::AnkleRight);
    CHECK(topo.parent_of(JointId::HipLeft) == JointId::HipCenter);

    // tree: DFS from the root reaches all 20 joints exactly once
    std::set<int> visited{joint_index(JointId::HipCenter)};
    std::vector<JointId> stack{JointId::HipCenter};
    while (!stack.empty()) {
        const JointId current = stack.back();
        stack.pop_back();
        for (const Bone& bone : topo.bones) {
            if (bone.parent == current) {
                CHECK(visited.insert(joint_index(bone.child)).second);
                stack.push_back(bone.child);
            }
        }
    }
    CHECK(visited.size() == kJointCount);
}

TEST_CASE("joint names round-trip and reject unknowns") {
    for (int j = 0; j < kJointCount; ++j) {
        const JointId id = static_cast<JointId>(j);
        CHECK(parse_joint_name(joint_name(id)) == id);
    }
    CHECK(!parse_joint_name("SpineMid"));
    CHECK(!parse_joint_name("hipcenter"));  // names are case-sensitive
}

TEST_CASE("validate_frame findings") {
    const SkeletonTopology& topo = kinect20_topology();
    const Frame good = simple_frame();
    CHECK(validate_frame(good, topo).ok());

    SUBCASE("missing joint") {
        std::array<bool, kJointCount> present;
        present.fill(true);
        present[joint_index(JointId::Head)] = false;
        const ValidationReport report = validate_frame(good, topo, &present);
        REQUIRE(report.findings.size() == 1);
        CHECK(report.findings[0].kind == ValidationFinding::Kind::MissingJoint);
        CHECK(report.findings[0].joint == JointId::Head);
    }
    SUBCASE("non-finite coordinate") {
        Frame bad = good;
        bad.position(JointId::WristLeft).y = std::nan("");
        const ValidationReport report = validate_frame(bad, topo);
        REQUIRE(report.findings.size() == 1);
        CHECK(report.findings[0].kind == ValidationFinding::Kind::NonFinite);
        CHECK(report.findings[0].joint == JointId::WristLeft);
    }
    SUBCASE("degenerate bone") {
        Frame bad = good;
        bad.position(JointId::Spine) = bad.position(JointId::HipCenter);
        const ValidationReport report = validate_frame(bad, topo);
        REQUIRE(report.findings.size() == 1);
        CHECK(report.findings[0].kind == ValidationFinding::Kind::DegenerateBone);
        CHECK(report.findings[0].joint == JointId::Spine);
    }
}

TEST_CASE("bone_vectors are child minus parent") {
    const SkeletonTopology& topo = kinect20_topology();
    Frame f = simple_frame();
    f.position(JointId::HipCenter) = {0, 0, 0};
    f.position(JointId::Spine) = {0, 0.3, 0};
    const auto vectors = bone_vectors(f, topo);
    for (const BoneVector& bv : vectors) {
        if (bv.bone.child == JointId::Spine) {
            CHECK(bv.v.x == doctest::Approx(0.0));
            CHECK(bv.v.y == doctest::Approx(0.3));
            CHECK(bv.v.z == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("bone vectors telescope along chains") {
    testutil::Rng rng(7);
    const SkeletonTopology& topo = kinect20_topology();
    Frame f;
    for (int j = 0; j < kJointCount; ++j) {
        f.positions[j] = Vec3{rng.uniform(-1, 1), rng.uniform(0.5, 2), rng.uniform(-1, 1)};
    }
    REQUIRE(validate_frame(f, topo).ok());
    const auto vectors = bone_vectors(f, topo);

    for (JointId leaf : {JointId::Head, JointId::HandLeft, JointId::FootRight}) {
        Vec3 sum;
        JointId cursor = leaf;
        while (!topo.is_root(cursor)) {
            for (const BoneVector& bv : vectors) {
                if (bv.bone.child == cursor) sum += bv.v;
            }
            cursor = topo.parent_of(cursor);
        }
        const Vec3 direct = f.position(leaf) - f.position(JointId::HipCenter);
        CHECK((sum - direct).norm() < 1e-12);
    }
}

TEST_CASE("bone vectors are translation invariant") {
    testutil::Rng rng(8);
    const SkeletonTopology& topo = kinect20_topology();
    const Frame f = simple_frame();
    Frame shifted = f;
    const Vec3 offset{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    for (auto& p : shifted.positions) p += offset;

    const auto a = bone_vectors(f, topo);
    const auto b = bone_vectors(shifted, topo);
    for (int i = 0; i < kBoneCount; ++i) {
        CHECK((a[i].v - b[i].v).norm() < 1e-12);
    }
}

TEST_CASE("bone_vectors throws on the degenerate frame validate rejects") {
    const SkeletonTopology& topo = kinect20_topology();
    Frame bad = simple_frame();
    bad.position(JointId::Spine) = bad.position(JointId::HipCenter);
    CHECK(testutil::error_code_of([&] { bone_vectors(bad, topo); }) ==
          ErrorCode::DegenerateBone);
    CHECK(!validate_frame(bad, topo).ok());
}
