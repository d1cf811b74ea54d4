#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mocap/skeleton.hpp"

namespace mocap {

enum class GestureClass {
    Sprinting,
    Jumping,
    OneHandWave,
    TwoHandsWave,
    Throwing,
    Heading,
    Kicking,
};

enum class Side { Left, Right, Both, NA };

const char* gesture_class_name(GestureClass cls);
const char* side_name(Side side);
std::optional<GestureClass> parse_gesture_class(std::string_view name);

struct GestureEvent {
    GestureClass cls = GestureClass::Jumping;
    double start_t = 0.0;
    double end_t = 0.0;
    Side side = Side::NA;
    std::vector<JointId> joints;
    std::map<std::string, double> metrics;
};

// All thresholds are ratios of the skeleton height (hip-to-head chain length
// at frame 0) or counts, so detections are invariant to performer size.
struct DetectorConfig {
    double window_s = 1.0;
    int wave_min_reversals = 2;
    double jump_min_rise_ratio = 0.08;
    double speed_peak_ratio = 1.5;           // throw / kick peak, heights per second
    double sprint_min_speed_ratio = 0.6;     // sustained hip speed, heights per second
    double heading_min_forward_ratio = 0.05;
};

// Per-joint positions relative to HipCenter divided by skeleton height, plus
// the raw hip world track, resampled to a uniform grid.
struct NormalizedTrajectories {
    double height_m = 0.0;
    double dt = 0.0;
    std::vector<double> t;
    std::vector<std::array<Vec3, kJointCount>> rel;
    std::vector<Vec3> hip_world;

    size_t size() const { return t.size(); }
};

NormalizedTrajectories normalize_trajectories(const std::vector<Frame>& frames);

// Rule-based detection of the seven sports gestures. Events come back sorted
// by start time; same-class events never overlap; simultaneous left and right
// waves merge into a two-hands wave.
std::vector<GestureEvent> detect(const std::vector<Frame>& frames,
                                 const DetectorConfig& config = {});

}  // namespace mocap
