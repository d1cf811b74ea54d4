#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mocap/gestures.hpp"
#include "mocap/retarget.hpp"
#include "mocap/rig.hpp"
#include "mocap/skeleton.hpp"
#include "mocap/synth.hpp"

namespace mocap {

// One record of the newline-delimited capture stream:
//   {"t":<seconds>,"joints":{"HipCenter":[x,y,z], ... all 20 ...}}
// Unknown fields and unknown or missing joints are errors; nothing reaches
// the engine unvalidated.
Frame parse_capture_line(std::string_view line);

// Deterministic inverse: t first, joints in canonical order, numbers with 17
// significant digits so coordinates round-trip exactly.
std::string write_capture_line(const Frame& frame);

// Rig document:
//   {"name":"...","joints":[{"name":"...","parent":"...","offset":[x,y,z]},...],
//    "map":{"rig-joint-name":"capture-joint-name"}}
// The optional map adapts producer-specific joint names; output joints are
// canonicalized and ordered, with source names kept for BVH output.
RigDefinition parse_rig(std::string_view text);

// BVH with root channels Xposition Yposition Zposition Zrotation Xrotation
// Yrotation and Zrotation Xrotation Yrotation elsewhere. OFFSET in meters
// unless offset_scale says otherwise; fixed 6-decimal formatting, LF endings.
// World rotations are converted to hierarchy-local ones at write time.
std::string write_bvh(const RigDefinition& rig, const std::vector<RigPose>& motion,
                      double fps, double offset_scale = 1.0);

std::string write_gesture_report(const std::vector<GestureEvent>& events);

// One line of the pose stream shared by `retarget --poses-out` and serve:
//   {"t":...,"joints":{...FK world positions...},"rotations":{joint:[9 row-major]}}
std::string write_pose_line(const RigPose& pose,
                            const std::array<Vec3, kJointCount>& positions);

// Ground-truth sidecar for synthetic clips: gesture labels in the report
// schema plus per-frame rotation traces when present.
std::string write_truth_sidecar(const SynthClip& clip);

// Line-oriented reader enforcing the stream-level contract: no blank lines,
// strictly increasing t. Errors carry "line N" context.
class CaptureStreamReader {
  public:
    explicit CaptureStreamReader(std::istream& in) : in_(in) {}

    // nullopt at end of stream
    std::optional<Frame> next();

    long line_number() const { return line_; }

  private:
    std::istream& in_;
    long line_ = 0;
    bool have_last_t_ = false;
    double last_t_ = 0.0;
};

}  // namespace mocap
