#include <doctest.h>

#include <sys/stat.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mocap/io_formats.hpp"
#include "mocap/synth.hpp"

using namespace mocap;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run(const std::string& command) {
    RunResult result;
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    REQUIRE(pipe);
    char chunk[4096];
    size_t n;
    while ((n = fread(chunk, 1, sizeof(chunk), pipe)) > 0) {
        result.output.append(chunk, n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string binary() { return MOCAPKIT_BIN; }

class TempDir {
  public:
    TempDir() {
        char tmpl[] = "/tmp/mocapkit_test_XXXXXX";
        root_ = mkdtemp(tmpl);
        REQUIRE(!root_.empty());
    }
    ~TempDir() {
        if (std::system(("rm -rf " + root_).c_str()) != 0) {
            std::fprintf(stderr, "failed to remove %s\n", root_.c_str());
        }
    }
    std::string path(const std::string& name) const { return root_ + "/" + name; }

  private:
    std::string root_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out);
    out << content;
}

void write_default_rig(const std::string& path) {
    const RigDefinition rig = default_rig();
    nlohmann::json doc;
    doc["name"] = "default";
    for (const RigJoint& j : rig.joints) {
        nlohmann::json entry;
        entry["name"] = j.name;
        if (j.parent >= 0) entry["parent"] = rig.joints[j.parent].name;
        entry["offset"] = {j.offset.x, j.offset.y, j.offset.z};
        doc["joints"].push_back(entry);
    }
    write_file(path, doc.dump(2));
}

}  // namespace

TEST_CASE("synth writes the stream and a truth sidecar") {
    TempDir dir;
    const std::string out = dir.path("jump.jsonl");
    const RunResult r = run(binary() + " synth --gesture jump --duration 3 --fps 30 --out " + out);
    CHECK(r.exit_code == 0);

    std::ifstream in(out);
    REQUIRE(in);
    long lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 90);

    const auto truth = nlohmann::json::parse(read_file(dir.path("jump.truth.json")));
    CHECK(truth["kind"] == "GestureClip");
    CHECK(truth["events"][0]["class"] == "Jumping");
}

TEST_CASE("synth is byte-deterministic for a fixed seed") {
    TempDir dir;
    const std::string a = dir.path("a.jsonl");
    const std::string b = dir.path("b.jsonl");
    CHECK(run(binary() + " synth --gesture kick --seed 7 --duration 2 --out " + a).exit_code == 0);
    CHECK(run(binary() + " synth --gesture kick --seed 7 --duration 2 --out " + b).exit_code == 0);
    CHECK(read_file(a) == read_file(b));
}

TEST_CASE("synth rejects a negative duration with usage exit code") {
    TempDir dir;
    const RunResult r = run(binary() + " synth --gesture jump --duration -3 --out " +
                            dir.path("x.jsonl"));
    CHECK(r.exit_code == 1);
}

TEST_CASE("retarget requires a rig") {
    const RunResult r = run(binary() + " retarget -");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("--rig") != std::string::npos);
}

TEST_CASE("retarget writes BVH and pose lines") {
    TempDir dir;
    const std::string clip = dir.path("trace.jsonl");
    const std::string rig = dir.path("rig.json");
    const std::string bvh = dir.path("out.bvh");
    const std::string poses = dir.path("poses.jsonl");
    write_default_rig(rig);
    CHECK(run(binary() + " synth --rotation-trace --duration 2 --out " + clip).exit_code == 0);

    const RunResult r = run(binary() + " retarget " + clip + " --rig " + rig +
                            " --out " + bvh + " --poses-out " + poses);
    CHECK(r.exit_code == 0);

    const std::string text = read_file(bvh);
    CHECK(text.rfind("HIERARCHY", 0) == 0);
    CHECK(text.find("Frame Time: 0.033333") != std::string::npos);

    std::istringstream pose_stream(read_file(poses));
    std::string line;
    long count = 0;
    while (std::getline(pose_stream, line)) ++count;
    CHECK(count == 60);
}

TEST_CASE("a corrupt stream line is a parse error naming the line") {
    TempDir dir;
    const std::string clip = dir.path("clip.jsonl");
    const std::string rig = dir.path("rig.json");
    write_default_rig(rig);
    CHECK(run(binary() + " synth --standing --duration 1 --out " + clip).exit_code == 0);

    std::string content = read_file(clip);
    // corrupt line 17 of 30
    size_t pos = 0;
    for (int i = 0; i < 16; ++i) pos = content.find('\n', pos) + 1;
    content.insert(pos, "{broken\n");
    // remove one good line to keep t increasing afterwards
    const size_t next = content.find('\n', pos + 8) + 1;
    const size_t after = content.find('\n', next) + 1;
    content.erase(next, after - next);
    write_file(clip, content);

    const RunResult r = run(binary() + " retarget " + clip + " --rig " + rig +
                            " --out " + dir.path("out.bvh"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("line 17") != std::string::npos);
}

TEST_CASE("no partial output is left behind on failure") {
    TempDir dir;
    const std::string clip = dir.path("bad.jsonl");
    const std::string rig = dir.path("rig.json");
    const std::string bvh = dir.path("out.bvh");
    write_default_rig(rig);
    write_file(clip, "{broken\n");
    const RunResult r = run(binary() + " retarget " + clip + " --rig " + rig +
                            " --out " + bvh);
    CHECK(r.exit_code == 2);
    struct stat st;
    CHECK(stat(bvh.c_str(), &st) != 0);
    CHECK(stat((bvh + ".tmp").c_str(), &st) != 0);
}

TEST_CASE("gestures command writes a report") {
    TempDir dir;
    const std::string clip = dir.path("jump.jsonl");
    const std::string report = dir.path("report.json");
    CHECK(run(binary() + " synth --gesture jump --duration 3 --out " + clip).exit_code == 0);
    CHECK(run(binary() + " gestures " + clip + " --out " + report).exit_code == 0);
    const auto doc = nlohmann::json::parse(read_file(report));
    REQUIRE(doc["events"].size() == 1);
    CHECK(doc["events"][0]["class"] == "Jumping");

    const std::string standing = dir.path("standing.jsonl");
    CHECK(run(binary() + " synth --standing --duration 2 --out " + standing).exit_code == 0);
    const RunResult r = run(binary() + " gestures " + standing + " --out -");
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.output)["events"].empty());
}

TEST_CASE("gestures rejects an unreadable input path") {
    const RunResult r = run(binary() + " gestures /nonexistent/input.jsonl");
    CHECK(r.exit_code == 2);
}

TEST_CASE("validate summarizes a clean clip") {
    TempDir dir;
    const std::string clip = dir.path("standing.jsonl");
    CHECK(run(binary() + " synth --standing --duration 2 --out " + clip).exit_code == 0);
    const RunResult r = run(binary() + " validate " + clip);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("frames: 60") != std::string::npos);
    CHECK(r.output.find("findings: none") != std::string::npos);
    // constant pose: every bone length variance is zero
    CHECK(r.output.find("HipCenter->Spine  0.240000 0.000000000") != std::string::npos);
}

TEST_CASE("validate reports an out-of-range coordinate with joint and line") {
    TempDir dir;
    const std::string clip = dir.path("nan.jsonl");
    CHECK(run(binary() + " synth --standing --duration 1 --out " + clip).exit_code == 0);

    std::string content = read_file(clip);
    size_t pos = 0;
    for (int i = 0; i < 2; ++i) pos = content.find('\n', pos) + 1;  // line 3
    const size_t head = content.find("\"Head\":[", pos);
    const size_t close = content.find(']', head);
    content.replace(head, close - head + 1, "\"Head\":[1e999,0,0]");
    write_file(clip, content);

    const RunResult r = run(binary() + " validate " + clip);
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("line 3") != std::string::npos);
    CHECK(r.output.find("Head") != std::string::npos);
}

TEST_CASE("validate flags an empty file") {
    TempDir dir;
    const std::string clip = dir.path("empty.jsonl");
    write_file(clip, "");
    const RunResult r = run(binary() + " validate " + clip);
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("no frames") != std::string::npos);
}

TEST_CASE("config file fills unset flags and flags win") {
    TempDir dir;
    const std::string clip = dir.path("trace.jsonl");
    const std::string rig = dir.path("rig.json");
    const std::string config = dir.path("config.json");
    write_default_rig(rig);
    CHECK(run(binary() + " synth --rotation-trace --duration 1 --out " + clip).exit_code == 0);
    write_file(config, std::string("{\"rig\":\"") + rig + "\",\"fps\":60}");

    const std::string bvh = dir.path("out.bvh");
    const RunResult r = run(binary() + " retarget " + clip + " --config " + config +
                            " --out " + bvh);
    CHECK(r.exit_code == 0);
    CHECK(read_file(bvh).find("Frame Time: 0.016667") != std::string::npos);

    const RunResult flag_wins = run(binary() + " retarget " + clip + " --config " +
                                    config + " --fps 30 --out " + bvh);
    CHECK(flag_wins.exit_code == 0);
    CHECK(read_file(bvh).find("Frame Time: 0.033333") != std::string::npos);

    // the same config travels through the environment variable
    const std::string env_bvh = dir.path("env.bvh");
    const RunResult env = run("RETARGET_CONFIG=" + config + " " + binary() +
                              " retarget " + clip + " --out " + env_bvh);
    CHECK(env.exit_code == 0);
    CHECK(read_file(env_bvh).find("Frame Time: 0.016667") != std::string::npos);

    // --verbose prints the effective (post-config) settings
    const RunResult verbose = run(binary() + " retarget " + clip + " --config " +
                                  config + " --verbose --out " + bvh);
    CHECK(verbose.exit_code == 0);
    CHECK(verbose.output.find("fps=60") != std::string::npos);
}

TEST_CASE("mirror-x ingest leaves detections intact") {
    TempDir dir;
    const std::string clip = dir.path("wave.jsonl");
    CHECK(run(binary() + " synth --gesture wave --side right --duration 4 --out " +
              clip).exit_code == 0);
    // joints keep their names; only the world handedness flips
    const RunResult r = run(binary() + " gestures " + clip + " --mirror-x --out -");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.output);
    REQUIRE(doc["events"].size() == 1);
    CHECK(doc["events"][0]["class"] == "OneHandWave");
    CHECK(doc["events"][0]["side"] == "Right");
}
