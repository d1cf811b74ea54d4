#include <doctest.h>

#include "mocap/io_formats.hpp"
#include "mocap/rotation.hpp"
#include "mocap/synth.hpp"
#include "support/test_util.hpp"

using namespace mocap;
using testutil::kPi;

TEST_CASE("standing clip is 60 identical frames at 2s/30fps") {
    MotionSpec spec;
    spec.kind = MotionSpec::Kind::Standing;
    spec.duration_s = 2.0;
    const SynthClip clip = generate(spec);
    REQUIRE(clip.frames.size() == 60);
    for (const Frame& f : clip.frames) {
        for (int j = 0; j < kJointCount; ++j) {
            CHECK((f.positions[j] - clip.frames[0].positions[j]).norm() == 0.0);
        }
    }
    CHECK(clip.truth.events.empty());
}

TEST_CASE("single-bone trace ends at the programmed rotation") {
    MotionSpec spec;
    spec.kind = MotionSpec::Kind::RotationTrace;
    spec.duration_s = 1.0;
    spec.trace_bone = JointId::WristLeft;
    spec.trace_degrees = 90.0;
    const SynthClip clip = generate(spec);
    REQUIRE(!clip.truth.rotations.empty());
    const Mat3 last =
        clip.truth.rotations.back()[joint_index(JointId::WristLeft)];
    CHECK(last.max_abs_diff(rodrigues({{0, 0, 1}, kPi / 2})) < 1e-12);
}

TEST_CASE("jump clip rises by the programmed amount") {
    MotionSpec spec;
    spec.kind = MotionSpec::Kind::GestureClip;
    spec.gesture = GestureClass::Jumping;
    spec.duration_s = 3.0;
    spec.jump_rise_m = 0.30;
    const SynthClip clip = generate(spec);
    REQUIRE(clip.truth.events.size() == 1);
    CHECK(clip.truth.events[0].cls == GestureClass::Jumping);
    CHECK(clip.truth.events[0].metrics.at("jump_height_m") == doctest::Approx(0.30));

    const double base = clip.frames[0].position(JointId::HipCenter).y;
    double peak = 0.0;
    for (const Frame& f : clip.frames) {
        peak = std::max(peak, f.position(JointId::HipCenter).y - base);
    }
    CHECK(peak == doctest::Approx(0.30).epsilon(1e-6));
}

TEST_CASE("every corpus clip passes validation") {
    const std::vector<SynthClip> clips = corpus();
    REQUIRE(clips.size() == 8);
    const SkeletonTopology& topo = kinect20_topology();
    for (const SynthClip& clip : clips) {
        CHECK(clip.frames.size() >= 60);
        CHECK(clip.frames.size() <= 180);
        for (const Frame& f : clip.frames) {
            CHECK(validate_frame(f, topo).ok());
        }
    }
}

TEST_CASE("kicking clip labels the kicking side's joints") {
    const std::vector<SynthClip> clips = corpus();
    const SynthClip* kick = nullptr;
    for (const SynthClip& clip : clips) {
        if (clip.spec.kind == MotionSpec::Kind::GestureClip &&
            clip.spec.gesture == GestureClass::Kicking) {
            kick = &clip;
        }
    }
    REQUIRE(kick);
    REQUIRE(kick->truth.events.size() == 1);
    const GestureEvent& e = kick->truth.events[0];
    CHECK(e.side == Side::Right);
    CHECK(e.joints == std::vector<JointId>{JointId::HipRight, JointId::KneeRight,
                                           JointId::AnkleRight});
}

TEST_CASE("generation is deterministic after serialization") {
    MotionSpec spec;
    spec.kind = MotionSpec::Kind::GestureClip;
    spec.gesture = GestureClass::Throwing;
    spec.duration_s = 3.0;
    spec.seed = 99;
    spec.noise_sigma_m = 0.003;

    auto serialize = [](const SynthClip& clip) {
        std::string out;
        for (const Frame& f : clip.frames) out += write_capture_line(f) + "\n";
        return out;
    };
    CHECK(serialize(generate(spec)) == serialize(generate(spec)));
}

TEST_CASE("invalid specs are rejected") {
    MotionSpec spec;
    spec.duration_s = -3.0;
    CHECK(testutil::error_code_of([&] { generate(spec); }) ==
          ErrorCode::InvalidSpec);

    spec.duration_s = 2.0;
    spec.noise_sigma_m = 0.5;
    CHECK(testutil::error_code_of([&] { generate(spec); }) ==
          ErrorCode::InvalidSpec);
}

TEST_CASE("rotation traces are hierarchy-coherent at multi-child joints") {
    MotionSpec spec;
    spec.kind = MotionSpec::Kind::RotationTrace;
    spec.duration_s = 1.0;
    spec.seed = 3;
    const SynthClip clip = generate(spec);
    for (const auto& rotations : clip.truth.rotations) {
        CHECK(rotations[joint_index(JointId::Spine)].max_abs_diff(
                  rotations[joint_index(JointId::HipLeft)]) == 0.0);
        CHECK(rotations[joint_index(JointId::Head)].max_abs_diff(
                  rotations[joint_index(JointId::ShoulderLeft)]) == 0.0);
    }
}
