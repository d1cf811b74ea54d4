// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Run via ctest or directly.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mocap/gestures.hpp"
#include "mocap/io_formats.hpp"
#include "mocap/retarget.hpp"
#include "mocap/rotation.hpp"
#include "mocap/serve.hpp"
#include "mocap/synth.hpp"
#include "support/line_client.hpp"
#include "support/test_util.hpp"

using namespace mocap;
using testutil::kPi;

namespace {

struct Failure {
    std::string detail;
};

void require(bool condition, const std::string& detail) {
    if (!condition) throw Failure{detail};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

// ---------------------------------------------------------------- criteria

std::string c1_rodrigues_vs_quaternion() {
    testutil::Rng rng(1001);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const Vec3 axis = rng.unit_vector();
        const double theta = rng.uniform(0.0, kPi);
        const Mat3 ours = rodrigues({axis, theta});
        const Mat3 oracle =
            testutil::quat_to_matrix(testutil::quat_from_axis_angle(axis, theta));
        worst = std::max(worst, ours.max_abs_diff(oracle));
        require(is_rotation(ours, 1e-9), "orthonormality/det drift");
    }
    require(worst < 1e-12, "oracle mismatch " + fmt(worst));
    return "max entry error vs quaternion oracle " + fmt(worst);
}

std::string c2_extraction_maps_a_to_b() {
    testutil::Rng rng(1002);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        Vec3 a, b;
        const int mode = i % 10;
        a = rng.unit_vector() * rng.uniform(0.05, 2.0);
        if (mode == 8) b = a * rng.uniform(0.1, 3.0);        // parallel
        else if (mode == 9) b = a * -rng.uniform(0.1, 3.0);  // anti-parallel
        else b = rng.unit_vector() * rng.uniform(0.05, 2.0);
        const Mat3 m = rodrigues(axis_angle_between(a, b));
        worst = std::max(worst, (m * a.normalized() - b.normalized()).norm());
    }
    require(worst < 1e-9, "direction mapping error " + fmt(worst));
    return "max |M a_hat - b_hat| " + fmt(worst) + " incl. degenerate pairs";
}

std::string c3_accumulation_direction_mapping() {
    const SkeletonTopology& topo = kinect20_topology();
    double worst = 0.0;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        MotionSpec spec;
        spec.kind = MotionSpec::Kind::RotationTrace;
        spec.duration_s = 40.0;  // 1200 frames
        spec.seed = seed;
        const SynthClip clip = generate(spec);
        require(clip.frames.size() >= 1000, "clip too short");

        const auto first = bone_vectors(clip.frames.front(), topo);
        RetargetState state = init_state(clip.frames[0], default_rig(), {});
        for (size_t i = 1; i < clip.frames.size(); ++i) {
            const RigPose pose = retarget_step(state, clip.frames[i]);
            const auto current = bone_vectors(clip.frames[i], topo);
            for (int b = 0; b < kBoneCount; ++b) {
                const int child = joint_index(current[b].bone.child);
                const double err = (pose.rotations[child] * first[b].v.normalized() -
                                    current[b].v.normalized()).norm();
                worst = std::max(worst, err);
            }
        }
    }
    require(worst < 1e-6, "direction drift " + fmt(worst));

    // determinant soak across a 10^4-frame stream
    MotionSpec soak;
    soak.kind = MotionSpec::Kind::RotationTrace;
    soak.duration_s = 334.0;  // 10020 frames
    soak.seed = 14;
    const SynthClip clip = generate(soak);
    RetargetState state = init_state(clip.frames[0], default_rig(), {});
    double worst_det = 0.0;
    for (size_t i = 1; i < clip.frames.size(); ++i) {
        const RigPose pose = retarget_step(state, clip.frames[i]);
        for (int j = 0; j < kJointCount; ++j) {
            worst_det = std::max(worst_det, std::abs(pose.rotations[j].det() - 1.0));
        }
    }
    require(worst_det < 1e-9, "det drift " + fmt(worst_det));
    return "direction error " + fmt(worst) + ", det drift " + fmt(worst_det) +
           " over 10^4 frames";
}

std::string c4_identity_retarget() {
    double worst = 0.0;
    std::vector<SynthClip> clips;
    MotionSpec trace;
    trace.kind = MotionSpec::Kind::RotationTrace;
    trace.duration_s = 40.0;
    trace.seed = 21;
    clips.push_back(generate(trace));
    MotionSpec jump;
    jump.kind = MotionSpec::Kind::GestureClip;
    jump.gesture = GestureClass::Jumping;
    jump.duration_s = 3.0;
    clips.push_back(generate(jump));
    MotionSpec sprint;
    sprint.kind = MotionSpec::Kind::GestureClip;
    sprint.gesture = GestureClass::Sprinting;
    sprint.duration_s = 4.0;
    clips.push_back(generate(sprint));

    for (const SynthClip& clip : clips) {
        const RigDefinition rig = rig_from_rest_frame("identity", clip.frames[0]);
        const auto results = run_stream(clip.frames, rig);
        require(results.size() == clip.frames.size(), "pose count mismatch");
        for (size_t i = 0; i < results.size(); ++i) {
            for (int j = 0; j < kJointCount; ++j) {
                worst = std::max(worst, (results[i].positions[j] -
                                         clip.frames[i].positions[j]).norm());
            }
        }
    }
    require(worst < 1e-6, "position error " + fmt(worst));
    return "max joint position error " + fmt(worst) + " across 3 clips";
}

std::string c5_double_size_retarget() {
    MotionSpec spec;
    spec.kind = MotionSpec::Kind::RotationTrace;
    spec.duration_s = 40.0;
    spec.seed = 22;
    const SynthClip clip = generate(spec);
    const RigDefinition rig =
        scaled_rig(rig_from_rest_frame("double", clip.frames[0]), 2.0);
    const auto results = run_stream(clip.frames, rig);
    const SkeletonTopology& topo = kinect20_topology();

    double worst_dir = 0.0, worst_len = 0.0;
    for (size_t i = 0; i < results.size(); ++i) {
        const Frame& src = clip.frames[i];
        for (const Bone& bone : topo.bones) {
            const Vec3 out = results[i].positions[joint_index(bone.child)] -
                             results[i].positions[joint_index(bone.parent)];
            const Vec3 ref = src.position(bone.child) - src.position(bone.parent);
            worst_dir = std::max(worst_dir,
                                 (out.normalized() - ref.normalized()).norm());
            const double rest_len =
                rig.joints[rig.index_of(joint_name(bone.child))].offset.norm();
            worst_len = std::max(worst_len, std::abs(out.norm() - rest_len));
        }
    }
    require(worst_dir < 1e-6, "direction error " + fmt(worst_dir));
    require(worst_len < 1e-9, "length error " + fmt(worst_len));
    return "direction error " + fmt(worst_dir) + ", length error " + fmt(worst_len);
}

std::string c6_gesture_suite() {
    double jump_err = 0.0;
    for (const SynthClip& clip : corpus()) {
        const std::vector<GestureEvent> events = detect(clip.frames);
        if (clip.spec.kind == MotionSpec::Kind::Standing) {
            require(events.empty(), "false positives on the null clip");
            continue;
        }
        const GestureEvent& truth = clip.truth.events.at(0);
        require(events.size() == 1,
                std::string(gesture_class_name(truth.cls)) + ": expected 1 event, got " +
                    std::to_string(events.size()));
        require(events[0].cls == truth.cls,
                std::string("class mismatch on ") + gesture_class_name(truth.cls));
        require(events[0].side == truth.side,
                std::string("side mismatch on ") + gesture_class_name(truth.cls));
        if (truth.cls == GestureClass::Jumping) {
            jump_err = std::abs(events[0].metrics.at("jump_height_m") -
                                truth.metrics.at("jump_height_m"));
            require(jump_err <= 0.02, "jump height off by " + fmt(jump_err));
        }
    }
    return "7/7 clips labeled, null clip clean, jump height off by " + fmt(jump_err);
}

std::string c7_throughput() {
    MotionSpec spec;
    spec.kind = MotionSpec::Kind::RotationTrace;
    spec.duration_s = 10.0;  // 300 frames
    spec.seed = 23;
    const SynthClip clip = generate(spec);

    // end-to-end through a real socket, lockstep request/response
    ServeConfig config;
    config.rig = default_rig();
    PoseStreamServer server(std::move(config));
    server.start();
    std::vector<std::string> lines;
    for (const Frame& f : clip.frames) lines.push_back(write_capture_line(f));

    const auto serve_start = std::chrono::steady_clock::now();
    {
        testutil::LineClient client(server.port());
        for (const std::string& line : lines) {
            client.send_line(line);
            if (client.read_line().empty()) throw Failure{"connection dropped"};
        }
    }
    const double serve_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - serve_start)
            .count();
    server.stop();
    const double serve_fps = static_cast<double>(lines.size()) / serve_s;
    require(serve_fps >= 30.0, "serve fps " + fmt(serve_fps));

    // offline engine, single-threaded
    MotionSpec big;
    big.kind = MotionSpec::Kind::RotationTrace;
    big.duration_s = 400.0;  // 12000 frames
    big.seed = 24;
    const SynthClip offline = generate(big);
    const RigDefinition rig = default_rig();
    const auto offline_start = std::chrono::steady_clock::now();
    size_t emitted = 0;
    size_t i = 0;
    run_stream(
        [&]() -> std::optional<Frame> {
            if (i >= offline.frames.size()) return std::nullopt;
            return offline.frames[i++];
        },
        rig, {}, [&](const StreamResult&) { ++emitted; });
    const double offline_s = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - offline_start)
                                 .count();
    const double offline_fps = static_cast<double>(emitted) / offline_s;
    require(offline_fps >= 10000.0, "offline fps " + fmt(offline_fps));

    char buf[128];
    std::snprintf(buf, sizeof(buf), "serve %.0f fps, offline %.0f fps", serve_fps,
                  offline_fps);
    return buf;
}

std::string run_binary(const std::string& command) {
    std::string output;
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (!pipe) throw Failure{"popen failed"};
    char chunk[4096];
    size_t n;
    while ((n = fread(chunk, 1, sizeof(chunk), pipe)) > 0) output.append(chunk, n);
    const int status = pclose(pipe);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        throw Failure{"command failed: " + command + "\n" + output};
    }
    return output;
}

void write_rig_document(const RigDefinition& rig, std::ostream& out) {
    nlohmann::json doc;
    doc["name"] = rig.name;
    for (const RigJoint& j : rig.joints) {
        nlohmann::json entry;
        entry["name"] = j.name;
        if (j.parent >= 0) entry["parent"] = rig.joints[j.parent].name;
        entry["offset"] = {j.offset.x, j.offset.y, j.offset.z};
        doc["joints"].push_back(entry);
    }
    out << doc.dump(2);
}

std::string c8_format_contracts() {
    // round-trip 10^4 random frames
    testutil::Rng rng(1008);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        Frame f = rest_pose_frame();
        f.t = rng.uniform(0, 1000);
        for (auto& p : f.positions) {
            p.x += rng.uniform(-0.02, 0.02);
            p.y += rng.uniform(-0.02, 0.02);
            p.z += rng.uniform(-0.02, 0.02);
        }
        const Frame back = parse_capture_line(write_capture_line(f));
        require(back.t == f.t, "t round-trip");
        for (int j = 0; j < kJointCount; ++j) {
            worst = std::max(worst, (back.positions[j] - f.positions[j]).norm());
        }
    }
    require(worst < 1e-9, "round-trip error " + fmt(worst));

    // BVH determinism on a real clip
    MotionSpec spec;
    spec.kind = MotionSpec::Kind::RotationTrace;
    spec.duration_s = 10.0;  // 300 frames
    spec.seed = 25;
    const SynthClip clip = generate(spec);
    const RigDefinition rig = default_rig();
    std::vector<RigPose> motion;
    for (const auto& r : run_stream(clip.frames, rig)) motion.push_back(r.pose);
    const std::string bvh_a = write_bvh(rig, motion, 30.0);
    const std::string bvh_b = write_bvh(rig, motion, 30.0);
    require(bvh_a == bvh_b, "BVH output not byte-stable");

    // offline --poses-out equals the serve stream byte for byte
    char tmpl[] = "/tmp/mocapkit_accept_XXXXXX";
    const char* dir = mkdtemp(tmpl);
    if (!dir) throw Failure{"mkdtemp failed"};
    const std::string root = dir;
    const std::string clip_path = root + "/clip.jsonl";
    const std::string rig_path = root + "/rig.json";
    const std::string poses_path = root + "/poses.jsonl";
    {
        std::ofstream out(clip_path);
        for (const Frame& f : clip.frames) out << write_capture_line(f) << "\n";
        std::ofstream rig_out(rig_path);
        write_rig_document(rig, rig_out);
    }
    run_binary(std::string(MOCAPKIT_BIN) + " retarget " + clip_path + " --rig " +
               rig_path + " --out " + root + "/out.bvh --poses-out " + poses_path);
    std::ifstream poses_in(poses_path);
    std::ostringstream offline;
    offline << poses_in.rdbuf();

    ServeConfig config;
    config.rig = rig;
    PoseStreamServer server(std::move(config));
    server.start();
    std::ostringstream online;
    {
        testutil::LineClient client(server.port());
        for (const Frame& f : clip.frames) {
            client.send_line(write_capture_line(f));
            online << client.read_line() << "\n";
        }
    }
    server.stop();
    run_binary("rm -rf " + root);
    require(offline.str() == online.str(), "offline/serve pose streams differ");
    return "round-trip " + fmt(worst) + ", BVH byte-stable, offline == serve";
}

std::string c9_euler_round_trip() {
    testutil::Rng rng(1009);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const Mat3 r = testutil::random_rotation(rng);
        worst = std::max(worst,
                         euler_to_rotation(rotation_to_euler(r)).max_abs_diff(r));
    }
    // driven near-gimbal cases, |sin x| > 1 - 1e-6
    double worst_gimbal = 0.0;
    for (double delta : {0.0, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3}) {
        for (double sign : {1.0, -1.0}) {
            for (int i = 0; i < 200; ++i) {
                const EulerZXY e{rng.uniform(-180, 180),
                                 sign * (90.0 - delta * 180.0 / kPi),
                                 rng.uniform(-180, 180)};
                const Mat3 r = euler_to_rotation(e);
                worst_gimbal = std::max(
                    worst_gimbal,
                    euler_to_rotation(rotation_to_euler(r)).max_abs_diff(r));
            }
        }
    }
    require(worst < 1e-6, "round-trip error " + fmt(worst));
    require(worst_gimbal < 1e-6, "near-gimbal error " + fmt(worst_gimbal));
    return "random error " + fmt(worst) + ", near-gimbal error " + fmt(worst_gimbal);
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria = {
        {"C1 axis-angle matrix vs quaternion oracle", c1_rodrigues_vs_quaternion},
        {"C2 extracted rotation maps a onto b", c2_extraction_maps_a_to_b},
        {"C3 accumulation tracks bone directions", c3_accumulation_direction_mapping},
        {"C4 identity retarget reproduces positions", c4_identity_retarget},
        {"C5 double-size retarget keeps directions", c5_double_size_retarget},
        {"C6 gesture suite on the labeled corpus", c6_gesture_suite},
        {"C7 streaming and offline throughput", c7_throughput},
        {"C8 format contracts", c8_format_contracts},
        {"C9 euler round-trip incl. near-gimbal", c9_euler_round_trip},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        try {
            const std::string detail = c.run();
            std::printf("[PASS] %s — %s\n", c.name, detail.c_str());
        } catch (const Failure& f) {
            ++failed;
            std::printf("[FAIL] %s — %s\n", c.name, f.detail.c_str());
        } catch (const std::exception& e) {
            ++failed;
            std::printf("[FAIL] %s — unexpected error: %s\n", c.name, e.what());
        }
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
