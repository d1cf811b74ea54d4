#include "mocap/io_formats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>

#include <json.hpp>

#include "mocap/errors.hpp"
#include "mocap/rotation.hpp"

namespace mocap {
namespace {

// ------------------------------------------------------------ number output

void append_double17(std::string& out, double value) {
    char buf[40];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

void append_vec17(std::string& out, const Vec3& v) {
    out += '[';
    append_double17(out, v.x);
    out += ',';
    append_double17(out, v.y);
    out += ',';
    append_double17(out, v.z);
    out += ']';
}

std::string fixed6(double value) {
    if (value == 0.0) value = 0.0;  // fold -0 into +0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

// --------------------------------------------------- capture line scanner
//
// The stream schema is closed, so a dedicated scanner beats a DOM parser: it
// reports byte positions, catches duplicate keys, and turns numeric overflow
// into a NonFinite finding for the offending joint.

class LineScanner {
  public:
    explicit LineScanner(std::string_view line) : s_(line) {}

    Frame parse() {
        Frame frame;
        std::array<bool, kJointCount> present{};
        bool have_t = false, have_joints = false;

        ws();
        expect('{');
        while (true) {
            ws();
            const std::string key = string_token();
            ws();
            expect(':');
            ws();
            if (key == "t") {
                if (have_t) fail("duplicate field \"t\"");
                have_t = true;
                bool out_of_range = false;
                frame.t = number_token(&out_of_range);
                if (out_of_range || !std::isfinite(frame.t)) {
                    fail("field \"t\" is out of range");
                }
                if (frame.t < 0.0) fail("field \"t\" must be non-negative");
            } else if (key == "joints") {
                if (have_joints) fail("duplicate field \"joints\"");
                have_joints = true;
                parse_joints(frame, present);
            } else {
                fail("unknown field \"" + key + "\"");
            }
            ws();
            if (consume(',')) continue;
            expect('}');
            break;
        }
        ws();
        if (pos_ != s_.size()) fail("trailing characters");

        if (!have_t) fail("missing field \"t\"");
        if (!have_joints) fail("missing field \"joints\"");
        for (int j = 0; j < kJointCount; ++j) {
            if (!present[j]) {
                throw Error(ErrorCode::MissingJoint,
                            joint_name(static_cast<JointId>(j)));
            }
        }
        // the parser rejects exactly what validate_frame rejects
        const ValidationReport report = validate_frame(frame, kinect20_topology());
        if (!report.ok()) {
            throw Error(ErrorCode::DegenerateBone, report.findings.front().message);
        }
        return frame;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::SyntaxError,
                    what + " at position " + std::to_string(pos_));
    }

    void ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool consume(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) fail(std::string("expected '") + c + "'");
    }

    std::string string_token() {
        expect('"');
        std::string out;
        while (true) {
            if (pos_ >= s_.size()) fail("unterminated string");
            const char c = s_[pos_++];
            if (c == '"') return out;
            if (c == '\\') {
                if (pos_ >= s_.size()) fail("unterminated escape");
                const char e = s_[pos_++];
                if (e == '"' || e == '\\' || e == '/') out += e;
                else fail("unsupported escape");
            } else if (static_cast<unsigned char>(c) < 0x20) {
                fail("control character in string");
            } else {
                out += c;
            }
        }
    }

    double number_token(bool* out_of_range) {
        const size_t start = pos_;
        consume('-');
        if (consume('0')) {
            // no further integer digits allowed
        } else {
            if (pos_ >= s_.size() || !is_digit(s_[pos_])) fail("expected number");
            while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
        }
        if (consume('.')) {
            if (pos_ >= s_.size() || !is_digit(s_[pos_])) fail("expected fraction digits");
            while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ >= s_.size() || !is_digit(s_[pos_])) fail("expected exponent digits");
            while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
        }
        double value = 0.0;
        const auto res =
            std::from_chars(s_.data() + start, s_.data() + pos_, value);
        if (res.ec == std::errc::result_out_of_range) {
            *out_of_range = true;
            // keep the sign so callers can report a signed infinity
            value = s_[start] == '-' ? -HUGE_VAL : HUGE_VAL;
        } else if (res.ec != std::errc()) {
            fail("malformed number");
        }
        return value;
    }

    void parse_joints(Frame& frame, std::array<bool, kJointCount>& present) {
        expect('{');
        ws();
        if (consume('}')) return;
        while (true) {
            ws();
            const std::string key = string_token();
            const auto id = parse_joint_name(key);
            if (!id) throw Error(ErrorCode::UnknownJoint, key);
            if (present[joint_index(*id)]) fail("duplicate joint \"" + key + "\"");
            present[joint_index(*id)] = true;
            ws();
            expect(':');
            ws();
            expect('[');
            Vec3 p;
            bool out_of_range = false;
            for (int c = 0; c < 3; ++c) {
                ws();
                const double v = number_token(&out_of_range);
                (c == 0 ? p.x : c == 1 ? p.y : p.z) = v;
                ws();
                if (c < 2) expect(',');
            }
            expect(']');
            if (out_of_range || !p.finite()) {
                throw Error(ErrorCode::NonFinite, key);
            }
            frame.position(*id) = p;
            ws();
            if (consume(',')) continue;
            expect('}');
            break;
        }
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    std::string_view s_;
    size_t pos_ = 0;
};

// ------------------------------------------------------------------ rig JSON

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Vec3 offset_from_json(const json& arr, const std::string& joint) {
    if (!arr.is_array() || arr.size() != 3 || !arr[0].is_number() ||
        !arr[1].is_number() || !arr[2].is_number()) {
        throw Error(ErrorCode::SyntaxError,
                    "offset of \"" + joint + "\" must be [x,y,z]");
    }
    return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

}  // namespace

Frame parse_capture_line(std::string_view line) {
    return LineScanner(line).parse();
}

std::string write_capture_line(const Frame& frame) {
    std::string out;
    out.reserve(1024);
    out += "{\"t\":";
    append_double17(out, frame.t);
    out += ",\"joints\":{";
    for (int j = 0; j < kJointCount; ++j) {
        if (j) out += ',';
        out += '"';
        out += joint_name(static_cast<JointId>(j));
        out += "\":";
        append_vec17(out, frame.positions[j]);
    }
    out += "}}";
    return out;
}

RigDefinition parse_rig(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SyntaxError, e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::SyntaxError, "rig must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "name" && key != "joints" && key != "map") {
            throw Error(ErrorCode::SyntaxError, "unknown rig field \"" + key + "\"");
        }
    }
    if (!doc.contains("joints") || !doc["joints"].is_array()) {
        throw Error(ErrorCode::SyntaxError, "rig needs a \"joints\" array");
    }

    struct RawJoint {
        std::string name;
        std::string parent;  // empty for root
        Vec3 offset;
    };
    std::vector<RawJoint> raw;
    for (const json& entry : doc["joints"]) {
        if (!entry.is_object() || !entry.contains("name") ||
            !entry["name"].is_string() || !entry.contains("offset")) {
            throw Error(ErrorCode::SyntaxError,
                        "each joint needs \"name\" and \"offset\"");
        }
        for (const auto& [key, value] : entry.items()) {
            if (key != "name" && key != "parent" && key != "offset") {
                throw Error(ErrorCode::SyntaxError,
                            "unknown joint field \"" + key + "\"");
            }
        }
        RawJoint rj;
        rj.name = entry["name"].get<std::string>();
        if (entry.contains("parent")) {
            if (!entry["parent"].is_string()) {
                throw Error(ErrorCode::SyntaxError, "parent must be a string");
            }
            rj.parent = entry["parent"].get<std::string>();
        }
        rj.offset = offset_from_json(entry["offset"], rj.name);
        if (!rj.offset.finite()) {
            throw Error(ErrorCode::SyntaxError,
                        "offset of \"" + rj.name + "\" is not finite");
        }
        raw.push_back(std::move(rj));
    }

    std::map<std::string, int> by_name;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (!by_name.emplace(raw[i].name, static_cast<int>(i)).second) {
            throw Error(ErrorCode::DuplicateJoint, raw[i].name);
        }
    }

    // cycle check by walking parent chains
    for (size_t i = 0; i < raw.size(); ++i) {
        size_t steps = 0;
        std::string cursor = raw[i].name;
        while (true) {
            const RawJoint& j = raw[by_name.at(cursor)];
            if (j.parent.empty()) break;
            const auto it = by_name.find(j.parent);
            if (it == by_name.end()) {
                throw Error(ErrorCode::SyntaxError,
                            "joint \"" + j.name + "\" has unknown parent \"" +
                                j.parent + "\"");
            }
            cursor = j.parent;
            if (++steps > raw.size()) {
                throw Error(ErrorCode::CycleDetected,
                            "parent chain through \"" + raw[i].name + "\"");
            }
        }
    }

    // canonical names via the optional map
    std::map<std::string, std::string> name_map;
    if (doc.contains("map")) {
        if (!doc["map"].is_object()) {
            throw Error(ErrorCode::SyntaxError, "\"map\" must be an object");
        }
        for (const auto& [from, to] : doc["map"].items()) {
            if (!to.is_string()) {
                throw Error(ErrorCode::SyntaxError, "map values must be strings");
            }
            if (by_name.find(from) == by_name.end()) {
                throw Error(ErrorCode::SyntaxError,
                            "map references unknown joint \"" + from + "\"");
            }
            name_map[from] = to.get<std::string>();
        }
    }

    std::array<int, kJointCount> raw_for;  // canonical joint -> raw index
    raw_for.fill(-1);
    for (size_t i = 0; i < raw.size(); ++i) {
        const auto it = name_map.find(raw[i].name);
        const std::string canonical = it == name_map.end() ? raw[i].name : it->second;
        const auto id = parse_joint_name(canonical);
        if (!id) throw Error(ErrorCode::UnmappedJoint, raw[i].name);
        if (raw_for[joint_index(*id)] >= 0) {
            throw Error(ErrorCode::DuplicateJoint, canonical);
        }
        raw_for[joint_index(*id)] = static_cast<int>(i);
    }
    for (int j = 0; j < kJointCount; ++j) {
        if (raw_for[j] < 0) {
            throw Error(ErrorCode::UnmappedJoint,
                        std::string("no rig joint maps to ") +
                            joint_name(static_cast<JointId>(j)));
        }
    }

    // hierarchy must agree with the capture skeleton
    const SkeletonTopology& topo = kinect20_topology();
    for (int j = 0; j < kJointCount; ++j) {
        const JointId id = static_cast<JointId>(j);
        const RawJoint& rj = raw[raw_for[j]];
        if (topo.is_root(id)) {
            if (!rj.parent.empty()) {
                throw Error(ErrorCode::HierarchyMismatch,
                            rj.name + " must be the root");
            }
            continue;
        }
        const int expected_raw = raw_for[joint_index(topo.parent_of(id))];
        if (rj.parent.empty() || by_name.at(rj.parent) != expected_raw) {
            throw Error(ErrorCode::HierarchyMismatch, rj.name);
        }
        if (rj.offset.norm() <= kBoneLengthEpsilon) {
            throw Error(ErrorCode::DegenerateOffset, rj.name);
        }
    }

    RigDefinition rig;
    rig.name = doc.contains("name") && doc["name"].is_string()
                   ? doc["name"].get<std::string>()
                   : "";
    rig.joints.resize(kJointCount);
    for (int j = 0; j < kJointCount; ++j) {
        const JointId id = static_cast<JointId>(j);
        RigJoint& out = rig.joints[j];
        const RawJoint& in = raw[raw_for[j]];
        out.name = joint_name(id);
        out.source_name = in.name;
        out.parent = topo.is_root(id) ? -1 : joint_index(topo.parent_of(id));
        out.offset = in.offset;
    }
    return rig;
}

// --------------------------------------------------------------- BVH output

namespace {

struct BvhContext {
    const RigDefinition& rig;
    std::vector<std::vector<int>> children;
    std::vector<int> joint_id;  // canonical JointId per rig joint
};

void write_bvh_joint(const BvhContext& ctx, int index, int depth,
                     double offset_scale, std::string& out) {
    const std::string indent(2 * static_cast<size_t>(depth), ' ');
    const RigJoint& j = ctx.rig.joints[index];
    out += indent;
    out += depth == 0 ? "ROOT " : "JOINT ";
    out += j.source_name.empty() ? j.name : j.source_name;
    out += "\n" + indent + "{\n";
    const std::string inner(2 * static_cast<size_t>(depth + 1), ' ');
    out += inner + "OFFSET " + fixed6(j.offset.x * offset_scale) + " " +
           fixed6(j.offset.y * offset_scale) + " " +
           fixed6(j.offset.z * offset_scale) + "\n";
    out += inner;
    out += depth == 0
               ? "CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation\n"
               : "CHANNELS 3 Zrotation Xrotation Yrotation\n";
    if (ctx.children[index].empty()) {
        out += inner + "End Site\n" + inner + "{\n";
        out += inner + "  OFFSET 0.000000 0.000000 0.000000\n";
        out += inner + "}\n";
    } else {
        for (int child : ctx.children[index]) {
            write_bvh_joint(ctx, child, depth + 1, offset_scale, out);
        }
    }
    out += indent + "}\n";
}

// World rotation driving joint `index`'s outgoing bones: the accumulated
// rotation of its first child's incoming bone. Leaves inherit their parent's.
void collect_group_rotations(const BvhContext& ctx, const RigPose& pose, int index,
                             const Mat3& parent_group, std::vector<Mat3>& group) {
    if (!ctx.children[index].empty()) {
        group[index] = pose.rotations[ctx.joint_id[ctx.children[index].front()]];
    } else {
        group[index] = parent_group;
    }
    for (int child : ctx.children[index]) {
        collect_group_rotations(ctx, pose, child, group[index], group);
    }
}

void append_euler(std::string& out, const Mat3& local) {
    const EulerZXY e = rotation_to_euler(local);
    out += " " + fixed6(e.z) + " " + fixed6(e.x) + " " + fixed6(e.y);
}

}  // namespace

std::string write_bvh(const RigDefinition& rig, const std::vector<RigPose>& motion,
                      double fps, double offset_scale) {
    if (motion.empty()) throw Error(ErrorCode::EmptyMotion, "no poses");
    if (!(fps > 0)) throw Error(ErrorCode::InvalidSpec, "fps must be positive");

    BvhContext ctx{rig, {}, {}};
    ctx.children.resize(rig.joints.size());
    ctx.joint_id.resize(rig.joints.size());
    int root = -1;
    for (size_t i = 0; i < rig.joints.size(); ++i) {
        const auto id = parse_joint_name(rig.joints[i].name);
        if (!id) {
            throw Error(ErrorCode::MissingJointRotation, rig.joints[i].name);
        }
        ctx.joint_id[i] = joint_index(*id);
        const int p = rig.joints[i].parent;
        if (p < 0) root = static_cast<int>(i);
        else ctx.children[p].push_back(static_cast<int>(i));
    }
    if (root < 0) throw Error(ErrorCode::CycleDetected, "rig has no root");

    std::string out;
    out.reserve(1024 + motion.size() * 16 * rig.joints.size());
    out += "HIERARCHY\n";
    write_bvh_joint(ctx, root, 0, offset_scale, out);
    out += "MOTION\n";
    out += "Frames: " + std::to_string(motion.size()) + "\n";
    out += "Frame Time: " + fixed6(1.0 / fps) + "\n";

    std::vector<Mat3> group(rig.joints.size());
    // channel order follows the hierarchy traversal
    std::vector<int> order;
    order.reserve(rig.joints.size());
    const std::function<void(int)> visit = [&](int index) {
        order.push_back(index);
        for (int child : ctx.children[index]) visit(child);
    };
    visit(root);

    // players compose the root OFFSET with the translation channels, so the
    // channels carry root motion relative to the rest root
    const Vec3 rest_root = rig.joints[root].offset;
    for (const RigPose& pose : motion) {
        collect_group_rotations(ctx, pose, root, Mat3::identity(), group);
        const Vec3 tr = pose.root_translation - rest_root;
        std::string line = fixed6(tr.x * offset_scale) + " " +
                           fixed6(tr.y * offset_scale) + " " +
                           fixed6(tr.z * offset_scale);
        for (int index : order) {
            const int p = rig.joints[index].parent;
            const Mat3 local =
                p < 0 ? group[index] : group[p].transposed() * group[index];
            append_euler(line, local);
        }
        out += line + "\n";
    }
    return out;
}

std::string write_gesture_report(const std::vector<GestureEvent>& events) {
    ordered_json doc;
    doc["events"] = ordered_json::array();
    for (const GestureEvent& e : events) {
        ordered_json entry;
        entry["class"] = gesture_class_name(e.cls);
        entry["start_t"] = e.start_t;
        entry["end_t"] = e.end_t;
        entry["side"] = side_name(e.side);
        ordered_json joints = ordered_json::array();
        for (JointId j : e.joints) joints.push_back(joint_name(j));
        entry["joints"] = joints;
        entry["metrics"] = ordered_json::object();
        for (const auto& [key, value] : e.metrics) entry["metrics"][key] = value;
        doc["events"].push_back(entry);
    }
    return doc.dump(2) + "\n";
}

std::string write_pose_line(const RigPose& pose,
                            const std::array<Vec3, kJointCount>& positions) {
    std::string out;
    out.reserve(2048);
    out += "{\"t\":";
    append_double17(out, pose.t);
    out += ",\"joints\":{";
    for (int j = 0; j < kJointCount; ++j) {
        if (j) out += ',';
        out += '"';
        out += joint_name(static_cast<JointId>(j));
        out += "\":";
        append_vec17(out, positions[j]);
    }
    out += "},\"rotations\":{";
    const SkeletonTopology& topo = kinect20_topology();
    bool first = true;
    for (int j = 0; j < kJointCount; ++j) {
        const JointId id = static_cast<JointId>(j);
        if (topo.is_root(id)) continue;
        if (!first) out += ',';
        first = false;
        out += '"';
        out += joint_name(id);
        out += "\":[";
        const Mat3& r = pose.rotations[j];
        for (int k = 0; k < 9; ++k) {
            if (k) out += ',';
            append_double17(out, r.m[k]);
        }
        out += ']';
    }
    out += "}}";
    return out;
}

std::string write_truth_sidecar(const SynthClip& clip) {
    ordered_json doc;
    switch (clip.spec.kind) {
        case MotionSpec::Kind::Standing: doc["kind"] = "Standing"; break;
        case MotionSpec::Kind::RotationTrace: doc["kind"] = "RotationTrace"; break;
        case MotionSpec::Kind::GestureClip: doc["kind"] = "GestureClip"; break;
    }
    ordered_json events = ordered_json::array();
    for (const GestureEvent& e : clip.truth.events) {
        ordered_json entry;
        entry["class"] = gesture_class_name(e.cls);
        entry["start_t"] = e.start_t;
        entry["end_t"] = e.end_t;
        entry["side"] = side_name(e.side);
        ordered_json joints = ordered_json::array();
        for (JointId j : e.joints) joints.push_back(joint_name(j));
        entry["joints"] = joints;
        entry["metrics"] = ordered_json::object();
        for (const auto& [key, value] : e.metrics) entry["metrics"][key] = value;
        events.push_back(entry);
    }
    doc["events"] = events;
    if (!clip.truth.rotations.empty()) {
        const SkeletonTopology& topo = kinect20_topology();
        ordered_json frames = ordered_json::array();
        for (size_t i = 0; i < clip.truth.rotations.size(); ++i) {
            ordered_json entry;
            entry["t"] = clip.frames[i].t;
            ordered_json bones = ordered_json::object();
            for (int j = 0; j < kJointCount; ++j) {
                const JointId id = static_cast<JointId>(j);
                if (topo.is_root(id)) continue;
                ordered_json values = ordered_json::array();
                for (double v : clip.truth.rotations[i][j].m) values.push_back(v);
                bones[joint_name(id)] = values;
            }
            entry["bones"] = bones;
            frames.push_back(entry);
        }
        doc["rotations"] = frames;
    }
    return doc.dump() + "\n";
}

std::optional<Frame> CaptureStreamReader::next() {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    ++line_;
    try {
        if (line.empty()) {
            throw Error(ErrorCode::SyntaxError, "blank line");
        }
        Frame frame = parse_capture_line(line);
        if (have_last_t_ && frame.t <= last_t_) {
            throw Error(ErrorCode::NonMonotonicTime,
                        "t=" + std::to_string(frame.t) + " does not increase");
        }
        have_last_t_ = true;
        last_t_ = frame.t;
        return frame;
    } catch (const Error& e) {
        throw Error(e.code(), "line " + std::to_string(line_) + ": " + e.what());
    }
}

}  // namespace mocap
