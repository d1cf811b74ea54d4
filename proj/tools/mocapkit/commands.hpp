#pragma once

#include <optional>
#include <string>

#include "mocap/gestures.hpp"

namespace mocapkit {

// Options resolved as: command-line flag > config file > default. The config
// file is JSON whose keys mirror the long flag names; its path comes from
// --config or the RETARGET_CONFIG environment variable.

struct RetargetArgs {
    std::string input = "-";
    std::string rig;
    std::string output = "-";
    std::string poses_out;
    double fps = 30.0;
    double smoothing = 0.0;
    long rest_frame = 0;
    bool mirror_x = false;
    bool skip_bad_frames = false;
    double offset_scale = 1.0;
    bool verbose = false;
};

struct GesturesArgs {
    std::string input = "-";
    std::string output = "-";
    bool mirror_x = false;
    mocap::DetectorConfig detector;
    bool verbose = false;
};

struct SynthArgs {
    std::string kind = "standing";  // standing | rotation | gesture name
    std::string output = "-";
    std::string truth_out;  // derived from output when empty
    std::string rig_out;    // also write the matching default rig
    std::string side = "right";
    std::string single_bone;
    double duration = 2.0;
    double fps = 30.0;
    std::uint64_t seed = 1;
    double stature = 1.75;
    double rise = 0.30;
    double noise = 0.0;
    double degrees = 90.0;
    bool verbose = false;
};

struct ValidateArgs {
    std::string input = "-";
};

struct ServeArgs {
    std::string rig;
    std::uint16_t port = 9907;
    double smoothing = 0.0;
    long rest_frame = 0;
    bool mirror_x = false;
    bool skip_bad_frames = false;
    bool verbose = false;
};

int cmd_retarget(const RetargetArgs& args);
int cmd_gestures(const GesturesArgs& args);
int cmd_synth(const SynthArgs& args);
int cmd_validate(const ValidateArgs& args);
int cmd_serve(const ServeArgs& args);

// 0 success, 1 usage, 2 input/IO error, 3 validation findings
int exit_code_for(const std::exception& error);

}  // namespace mocapkit
