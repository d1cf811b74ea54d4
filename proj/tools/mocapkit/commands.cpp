#include "commands.hpp"

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mocap/errors.hpp"
#include "mocap/io_formats.hpp"
#include "mocap/retarget.hpp"
#include "mocap/rig.hpp"
#include "mocap/serve.hpp"
#include "mocap/synth.hpp"

namespace mocapkit {
namespace {

using namespace mocap;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// All-or-nothing file output: write to a sibling temp file, rename on commit.
class AtomicWriter {
  public:
    explicit AtomicWriter(const std::string& dest) : dest_(dest) {
        if (dest_ == "-") return;
        temp_ = dest_ + ".tmp";
        file_.open(temp_, std::ios::binary | std::ios::trunc);
        if (!file_) throw Error(ErrorCode::IoError, "cannot write " + dest_);
    }

    ~AtomicWriter() {
        if (!temp_.empty() && !committed_) {
            file_.close();
            std::remove(temp_.c_str());
        }
    }

    std::ostream& stream() { return dest_ == "-" ? std::cout : file_; }

    void commit() {
        if (dest_ == "-") {
            std::cout.flush();
            return;
        }
        file_.flush();
        file_.close();
        if (!file_ || std::rename(temp_.c_str(), dest_.c_str()) != 0) {
            throw Error(ErrorCode::IoError, "cannot finalize " + dest_);
        }
        committed_ = true;
    }

  private:
    std::string dest_;
    std::string temp_;
    std::ofstream file_;
    bool committed_ = false;
};

struct InputStream {
    explicit InputStream(const std::string& path) {
        if (path != "-") {
            file.open(path, std::ios::binary);
            if (!file) throw Error(ErrorCode::IoError, "cannot read " + path);
        }
    }
    std::istream& stream() { return file.is_open() ? file : std::cin; }
    std::ifstream file;
};

void mirror_frame(Frame& frame) {
    for (auto& p : frame.positions) p.x = -p.x;
}

RigDefinition load_rig(const std::string& path) {
    return parse_rig(read_file(path));
}

// Frame source over a capture stream with optional mirroring and bad-line
// skipping (skips happen at the reader so the stream keeps flowing).
FrameSource make_source(CaptureStreamReader& reader, bool mirror_x,
                        bool skip_bad_lines) {
    return [&reader, mirror_x, skip_bad_lines]() -> std::optional<Frame> {
        while (true) {
            try {
                std::optional<Frame> frame = reader.next();
                if (frame && mirror_x) mirror_frame(*frame);
                return frame;
            } catch (const Error& e) {
                if (!skip_bad_lines) throw;
                std::cerr << "skipping: " << e.what() << "\n";
            }
        }
    };
}

volatile std::sig_atomic_t g_interrupted = 0;
void on_signal(int) { g_interrupted = 1; }

}  // namespace

int exit_code_for(const std::exception& error) {
    const auto* e = dynamic_cast<const Error*>(&error);
    if (!e) return 2;
    switch (e->code()) {
        case ErrorCode::SyntaxError:
        case ErrorCode::IoError: return 2;
        case ErrorCode::InvalidSpec: return 1;
        default: return 3;
    }
}

int cmd_retarget(const RetargetArgs& args) {
    if (args.verbose) {
        std::cerr << "retarget in=" << args.input << " rig=" << args.rig
                  << " out=" << args.output << " poses-out=" << args.poses_out
                  << " fps=" << args.fps << " smoothing=" << args.smoothing
                  << " rest-frame=" << args.rest_frame
                  << " mirror-x=" << args.mirror_x
                  << " skip-bad-frames=" << args.skip_bad_frames
                  << " offset-scale=" << args.offset_scale << "\n";
    }
    if (!(args.fps > 0)) throw Error(ErrorCode::InvalidSpec, "fps must be positive");
    const RigDefinition rig = load_rig(args.rig);

    InputStream input(args.input);
    CaptureStreamReader reader(input.stream());

    RetargetOptions options;
    options.smoothing.alpha = args.smoothing;
    options.rest_frame = args.rest_frame;
    options.skip_bad_frames = args.skip_bad_frames;
    if (options.smoothing.alpha < 0.0 || options.smoothing.alpha > 1.0) {
        throw Error(ErrorCode::InvalidSpec, "smoothing must be in [0,1]");
    }

    std::vector<RigPose> motion;
    std::optional<AtomicWriter> poses;
    if (!args.poses_out.empty()) poses.emplace(args.poses_out);

    run_stream(
        make_source(reader, args.mirror_x, args.skip_bad_frames), rig, options,
        [&](const StreamResult& r) {
            motion.push_back(r.pose);
            if (poses) poses->stream() << write_pose_line(r.pose, r.positions) << "\n";
        },
        [](long index, const std::string& reason) {
            std::cerr << "dropped frame " << index << ": " << reason << "\n";
        });

    AtomicWriter out(args.output);
    out.stream() << write_bvh(rig, motion, args.fps, args.offset_scale);
    out.commit();
    if (poses) poses->commit();
    return 0;
}

int cmd_gestures(const GesturesArgs& args) {
    if (args.verbose) {
        std::cerr << "gestures in=" << args.input << " out=" << args.output
                  << " window=" << args.detector.window_s
                  << " wave-min-reversals=" << args.detector.wave_min_reversals
                  << " jump-min-rise-ratio=" << args.detector.jump_min_rise_ratio
                  << " speed-peak-ratio=" << args.detector.speed_peak_ratio
                  << " sprint-min-speed-ratio=" << args.detector.sprint_min_speed_ratio
                  << " heading-min-forward-ratio="
                  << args.detector.heading_min_forward_ratio << "\n";
    }
    InputStream input(args.input);
    CaptureStreamReader reader(input.stream());
    std::vector<Frame> frames;
    while (auto frame = reader.next()) {
        if (args.mirror_x) mirror_frame(*frame);
        frames.push_back(*frame);
    }
    const std::vector<GestureEvent> events = detect(frames, args.detector);
    AtomicWriter out(args.output);
    out.stream() << write_gesture_report(events);
    out.commit();
    return 0;
}

namespace {

std::string derived_truth_path(const std::string& output) {
    const size_t slash = output.find_last_of('/');
    const size_t dot = output.find_last_of('.');
    const bool has_ext = dot != std::string::npos &&
                         (slash == std::string::npos || dot > slash);
    return (has_ext ? output.substr(0, dot) : output) + ".truth.json";
}

MotionSpec spec_from_args(const SynthArgs& args) {
    MotionSpec spec;
    spec.duration_s = args.duration;
    spec.fps = args.fps;
    spec.seed = args.seed;
    spec.stature_m = args.stature;
    spec.jump_rise_m = args.rise;
    spec.noise_sigma_m = args.noise;
    spec.trace_degrees = args.degrees;

    if (args.side == "left") spec.side = Side::Left;
    else if (args.side == "right") spec.side = Side::Right;
    else throw Error(ErrorCode::InvalidSpec, "side must be left or right");

    std::string kind = args.kind;
    for (char& c : kind) c = static_cast<char>(std::tolower(c));
    if (kind == "standing" || kind == "still") {
        spec.kind = MotionSpec::Kind::Standing;
    } else if (kind == "rotation" || kind == "rotation-trace") {
        spec.kind = MotionSpec::Kind::RotationTrace;
        if (!args.single_bone.empty()) {
            const auto id = parse_joint_name(args.single_bone);
            if (!id) throw Error(ErrorCode::InvalidSpec,
                                 "unknown joint " + args.single_bone);
            spec.trace_bone = *id;
        }
    } else {
        spec.kind = MotionSpec::Kind::GestureClip;
        if (kind == "sprint" || kind == "sprinting") spec.gesture = GestureClass::Sprinting;
        else if (kind == "jump" || kind == "jumping") spec.gesture = GestureClass::Jumping;
        else if (kind == "wave" || kind == "onehandwave") spec.gesture = GestureClass::OneHandWave;
        else if (kind == "wave2" || kind == "twohandswave") spec.gesture = GestureClass::TwoHandsWave;
        else if (kind == "throw" || kind == "throwing") spec.gesture = GestureClass::Throwing;
        else if (kind == "heading" || kind == "header") spec.gesture = GestureClass::Heading;
        else if (kind == "kick" || kind == "kicking") spec.gesture = GestureClass::Kicking;
        else throw Error(ErrorCode::InvalidSpec, "unknown clip kind " + args.kind);
    }
    return spec;
}

}  // namespace

int cmd_synth(const SynthArgs& args) {
    const MotionSpec spec = spec_from_args(args);
    const SynthClip clip = generate(spec);
    if (args.verbose) {
        std::cerr << "synth kind=" << args.kind << " frames=" << clip.frames.size()
                  << " seed=" << args.seed << "\n";
    }
    AtomicWriter out(args.output);
    for (const Frame& frame : clip.frames) {
        out.stream() << write_capture_line(frame) << "\n";
    }
    out.commit();

    std::string truth_path = args.truth_out;
    if (truth_path.empty() && args.output != "-") {
        truth_path = derived_truth_path(args.output);
    }
    if (!truth_path.empty()) {
        AtomicWriter truth(truth_path);
        truth.stream() << write_truth_sidecar(clip);
        truth.commit();
    }
    if (!args.rig_out.empty()) {
        const RigDefinition rig = default_rig(spec.stature_m);
        nlohmann::json doc;
        doc["name"] = "default";
        for (const RigJoint& j : rig.joints) {
            nlohmann::json entry;
            entry["name"] = j.name;
            if (j.parent >= 0) entry["parent"] = rig.joints[j.parent].name;
            entry["offset"] = {j.offset.x, j.offset.y, j.offset.z};
            doc["joints"].push_back(entry);
        }
        AtomicWriter rig_writer(args.rig_out);
        rig_writer.stream() << doc.dump(2) << "\n";
        rig_writer.commit();
    }
    return 0;
}

int cmd_validate(const ValidateArgs& args) {
    InputStream input(args.input);
    CaptureStreamReader reader(input.stream());

    long frames = 0;
    double t_first = 0, t_last = 0;
    std::vector<std::string> findings;
    // Welford accumulators per bone
    const SkeletonTopology& topo = kinect20_topology();
    std::array<double, kBoneCount> mean{}, m2{};
    long samples = 0;

    while (true) {
        std::optional<Frame> frame;
        try {
            frame = reader.next();
        } catch (const Error& e) {
            if (findings.size() < 50) findings.push_back(e.what());
            continue;
        }
        if (!frame) break;
        if (frames == 0) t_first = frame->t;
        t_last = frame->t;
        ++frames;
        ++samples;
        for (int b = 0; b < kBoneCount; ++b) {
            const Bone& bone = topo.bones[b];
            const double len =
                (frame->position(bone.child) - frame->position(bone.parent)).norm();
            const double delta = len - mean[b];
            mean[b] += delta / static_cast<double>(samples);
            m2[b] += delta * (len - mean[b]);
        }
    }
    if (frames == 0) findings.push_back("no frames");

    std::cout << "frames: " << frames << "\n";
    if (frames > 0) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", t_last - t_first);
        std::cout << "duration_s: " << buf << "\n";
        std::cout << "bone length mean/variance (m):\n";
        for (int b = 0; b < kBoneCount; ++b) {
            const Bone& bone = topo.bones[b];
            const double variance =
                samples > 1 ? m2[b] / static_cast<double>(samples - 1) : 0.0;
            std::snprintf(buf, sizeof(buf), "%.6f %.9f", mean[b], variance);
            std::cout << "  " << joint_name(bone.parent) << "->"
                      << joint_name(bone.child) << "  " << buf << "\n";
        }
    }
    if (findings.empty()) {
        std::cout << "findings: none\n";
        return 0;
    }
    std::cout << "findings: " << findings.size() << "\n";
    for (const std::string& f : findings) std::cout << "  " << f << "\n";
    return 3;
}

int cmd_serve(const ServeArgs& args) {
    ServeConfig config;
    config.rig = load_rig(args.rig);
    config.options.smoothing.alpha = args.smoothing;
    config.options.rest_frame = args.rest_frame;
    config.options.skip_bad_frames = args.skip_bad_frames;
    config.mirror_x = args.mirror_x;
    config.port = args.port;
    if (config.options.smoothing.alpha < 0.0 || config.options.smoothing.alpha > 1.0) {
        throw Error(ErrorCode::InvalidSpec, "smoothing must be in [0,1]");
    }

    PoseStreamServer server(std::move(config));
    server.start();
    if (args.verbose) {
        std::cerr << "serve rig=" << args.rig << " port=" << server.port()
                  << " smoothing=" << args.smoothing
                  << " rest-frame=" << args.rest_frame
                  << " mirror-x=" << args.mirror_x << "\n";
    }
    std::cout << "listening on port " << server.port() << std::endl;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_interrupted) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    server.stop();
    return 0;
}

}  // namespace mocapkit
