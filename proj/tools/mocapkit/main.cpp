#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "mocap/errors.hpp"

namespace {

using nlohmann::json;

json load_config(const std::string& explicit_path) {
    std::string path = explicit_path;
    if (path.empty()) {
        if (const char* env = std::getenv("RETARGET_CONFIG")) path = env;
    }
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) {
        throw mocap::Error(mocap::ErrorCode::IoError, "cannot read config " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw mocap::Error(mocap::ErrorCode::SyntaxError,
                           std::string("config: ") + e.what());
    }
}

// flags win over config keys, config keys win over defaults
template <typename T>
void from_config(const json& cfg, const CLI::App* cmd, const std::string& key,
                 T& out) {
    if (!cfg.contains(key)) return;
    const CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt && opt->count() > 0) return;
    try {
        out = cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw mocap::Error(mocap::ErrorCode::InvalidSpec,
                           "config key \"" + key + "\" has the wrong type");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markerless motion-capture retargeting toolkit"};
    app.require_subcommand(1);

    mocapkit::RetargetArgs retarget;
    mocapkit::GesturesArgs gestures;
    mocapkit::SynthArgs synth;
    mocapkit::ValidateArgs validate;
    mocapkit::ServeArgs serve;
    std::string config_path;

    CLI::App* cmd_retarget = app.add_subcommand(
        "retarget", "Apply a capture stream to a rig and write BVH");
    cmd_retarget->add_option("input", retarget.input,
                             "capture stream path, or - for stdin");
    cmd_retarget->add_option("--rig", retarget.rig, "rig definition file");
    cmd_retarget->add_option("--out", retarget.output, "BVH output path, or -");
    cmd_retarget->add_option("--poses-out", retarget.poses_out,
                             "also write one pose line per frame");
    cmd_retarget->add_option("--fps", retarget.fps, "BVH frame rate");
    cmd_retarget->add_option("--smoothing", retarget.smoothing,
                             "position EMA alpha in [0,1], 0 = off");
    cmd_retarget->add_option("--rest-frame", retarget.rest_frame,
                             "stream index of the correspondence pose");
    cmd_retarget->add_flag("--mirror-x", retarget.mirror_x,
                           "negate x at ingest (opposite handedness)");
    cmd_retarget->add_flag("--skip-bad-frames", retarget.skip_bad_frames,
                           "drop invalid frames instead of aborting");
    cmd_retarget->add_option("--offset-scale", retarget.offset_scale,
                             "scale factor for BVH offsets and positions");
    cmd_retarget->add_flag("--verbose", retarget.verbose, "print effective config");
    cmd_retarget->add_option("--config", config_path, "JSON config file");

    CLI::App* cmd_gestures = app.add_subcommand(
        "gestures", "Detect sports gestures and write a report");
    cmd_gestures->add_option("input", gestures.input,
                             "capture stream path, or - for stdin");
    cmd_gestures->add_option("--out", gestures.output, "report path, or -");
    cmd_gestures->add_flag("--mirror-x", gestures.mirror_x,
                           "negate x at ingest");
    cmd_gestures->add_option("--window", gestures.detector.window_s,
                             "detection window seconds");
    cmd_gestures->add_option("--wave-min-reversals",
                             gestures.detector.wave_min_reversals,
                             "lateral reversals required for a wave");
    cmd_gestures->add_option("--jump-min-rise-ratio",
                             gestures.detector.jump_min_rise_ratio,
                             "hip rise threshold, fraction of height");
    cmd_gestures->add_option("--speed-peak-ratio",
                             gestures.detector.speed_peak_ratio,
                             "throw/kick speed peak, heights per second");
    cmd_gestures->add_option("--sprint-min-speed-ratio",
                             gestures.detector.sprint_min_speed_ratio,
                             "sustained hip speed, heights per second");
    cmd_gestures->add_option("--heading-min-forward-ratio",
                             gestures.detector.heading_min_forward_ratio,
                             "head excursion threshold, fraction of height");
    cmd_gestures->add_flag("--verbose", gestures.verbose, "print effective config");
    cmd_gestures->add_option("--config", config_path, "JSON config file");

    CLI::App* cmd_synth = app.add_subcommand(
        "synth", "Generate a synthetic capture clip with ground truth");
    cmd_synth->add_option("--gesture", synth.kind,
                          "gesture clip kind (jump, sprint, wave, ...)");
    cmd_synth->add_flag_callback("--rotation-trace",
                                 [&synth] { synth.kind = "rotation"; },
                                 "generate a rotation-trace clip");
    cmd_synth->add_flag_callback("--standing",
                                 [&synth] { synth.kind = "standing"; },
                                 "generate the standing null clip");
    cmd_synth->add_option("--out", synth.output, "capture stream path, or -");
    cmd_synth->add_option("--truth-out", synth.truth_out,
                          "ground-truth sidecar path");
    cmd_synth->add_option("--rig-out", synth.rig_out,
                          "also write the matching default rig document");
    cmd_synth->add_option("--duration", synth.duration, "clip seconds");
    cmd_synth->add_option("--fps", synth.fps, "frames per second");
    cmd_synth->add_option("--seed", synth.seed, "deterministic seed");
    cmd_synth->add_option("--stature", synth.stature, "skeleton stature meters");
    cmd_synth->add_option("--rise", synth.rise, "programmed jump rise meters");
    cmd_synth->add_option("--noise", synth.noise, "position noise sigma meters");
    cmd_synth->add_option("--side", synth.side, "left or right for sided clips");
    cmd_synth->add_option("--single-bone", synth.single_bone,
                          "rotation trace: rotate only this bone (child joint)");
    cmd_synth->add_option("--degrees", synth.degrees,
                          "rotation trace: total single-bone ramp angle");
    cmd_synth->add_flag("--verbose", synth.verbose, "print clip summary");
    cmd_synth->add_option("--config", config_path, "JSON config file");

    CLI::App* cmd_validate = app.add_subcommand(
        "validate", "Check a capture stream and print a summary");
    cmd_validate->add_option("input", validate.input,
                             "capture stream path, or - for stdin");
    cmd_validate->add_option("--config", config_path, "JSON config file");

    CLI::App* cmd_serve = app.add_subcommand(
        "serve", "Stream poses over TCP, one line per capture line");
    cmd_serve->add_option("--rig", serve.rig, "rig definition file");
    cmd_serve->add_option("--port", serve.port, "TCP port");
    cmd_serve->add_option("--smoothing", serve.smoothing,
                          "position EMA alpha in [0,1]");
    cmd_serve->add_option("--rest-frame", serve.rest_frame,
                          "stream index of the correspondence pose");
    cmd_serve->add_flag("--mirror-x", serve.mirror_x, "negate x at ingest");
    cmd_serve->add_flag("--skip-bad-frames", serve.skip_bad_frames,
                        "drop invalid frames instead of closing");
    cmd_serve->add_flag("--verbose", serve.verbose, "print effective config");
    cmd_serve->add_option("--config", config_path, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const json cfg = load_config(config_path);
        if (cmd_retarget->parsed()) {
            from_config(cfg, cmd_retarget, "rig", retarget.rig);
            from_config(cfg, cmd_retarget, "out", retarget.output);
            from_config(cfg, cmd_retarget, "poses-out", retarget.poses_out);
            from_config(cfg, cmd_retarget, "fps", retarget.fps);
            from_config(cfg, cmd_retarget, "smoothing", retarget.smoothing);
            from_config(cfg, cmd_retarget, "rest-frame", retarget.rest_frame);
            from_config(cfg, cmd_retarget, "mirror-x", retarget.mirror_x);
            from_config(cfg, cmd_retarget, "skip-bad-frames",
                        retarget.skip_bad_frames);
            from_config(cfg, cmd_retarget, "offset-scale", retarget.offset_scale);
            if (retarget.rig.empty()) {
                std::cerr << "retarget: --rig is required\n"
                          << cmd_retarget->help();
                return 1;
            }
            return mocapkit::cmd_retarget(retarget);
        }
        if (cmd_gestures->parsed()) {
            from_config(cfg, cmd_gestures, "out", gestures.output);
            from_config(cfg, cmd_gestures, "mirror-x", gestures.mirror_x);
            from_config(cfg, cmd_gestures, "window", gestures.detector.window_s);
            from_config(cfg, cmd_gestures, "wave-min-reversals",
                        gestures.detector.wave_min_reversals);
            from_config(cfg, cmd_gestures, "jump-min-rise-ratio",
                        gestures.detector.jump_min_rise_ratio);
            from_config(cfg, cmd_gestures, "speed-peak-ratio",
                        gestures.detector.speed_peak_ratio);
            from_config(cfg, cmd_gestures, "sprint-min-speed-ratio",
                        gestures.detector.sprint_min_speed_ratio);
            from_config(cfg, cmd_gestures, "heading-min-forward-ratio",
                        gestures.detector.heading_min_forward_ratio);
            return mocapkit::cmd_gestures(gestures);
        }
        if (cmd_synth->parsed()) {
            from_config(cfg, cmd_synth, "out", synth.output);
            from_config(cfg, cmd_synth, "duration", synth.duration);
            from_config(cfg, cmd_synth, "fps", synth.fps);
            from_config(cfg, cmd_synth, "seed", synth.seed);
            from_config(cfg, cmd_synth, "stature", synth.stature);
            from_config(cfg, cmd_synth, "rise", synth.rise);
            from_config(cfg, cmd_synth, "noise", synth.noise);
            return mocapkit::cmd_synth(synth);
        }
        if (cmd_validate->parsed()) {
            return mocapkit::cmd_validate(validate);
        }
        if (cmd_serve->parsed()) {
            from_config(cfg, cmd_serve, "rig", serve.rig);
            from_config(cfg, cmd_serve, "port", serve.port);
            from_config(cfg, cmd_serve, "smoothing", serve.smoothing);
            from_config(cfg, cmd_serve, "rest-frame", serve.rest_frame);
            from_config(cfg, cmd_serve, "mirror-x", serve.mirror_x);
            from_config(cfg, cmd_serve, "skip-bad-frames", serve.skip_bad_frames);
            if (serve.rig.empty()) {
                std::cerr << "serve: --rig is required\n" << cmd_serve->help();
                return 1;
            }
            return mocapkit::cmd_serve(serve);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mocapkit::exit_code_for(e);
    }
    return 1;
}
