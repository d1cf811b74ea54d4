#include "mocap/gestures.hpp"

#include <algorithm>
#include <cmath>

#include "mocap/errors.hpp"

namespace mocap {
namespace {

// Signal-shaping constants. Detection thresholds proper live in
// DetectorConfig; these define the signals the thresholds apply to.
constexpr double kBaselineWindowS = 0.2;   // start-of-clip reference window
constexpr double kRegionBand = 0.25;       // region entry/exit, fraction of threshold
constexpr double kEnvelopeBand = 0.5;      // speed-peak envelope, fraction of threshold
constexpr double kWaveHysteresis = 0.01;   // lateral reversal hysteresis, heights
constexpr double kKneeOscFloor = 0.005;    // minimum knee oscillation, heights
constexpr double kKneeAntiPhaseMax = -0.1; // knee correlation must sit below this
constexpr double kKickStanceBand = 0.05;   // contralateral ankle budget, heights
constexpr double kKickExtensionRad = 0.15; // knee must open by at least this

struct JointSet {
    JointId hip, knee, ankle, shoulder, elbow, wrist, hand;
};

JointSet side_joints(Side side) {
    if (side == Side::Left) {
        return {JointId::HipLeft,    JointId::KneeLeft,  JointId::AnkleLeft,
                JointId::ShoulderLeft, JointId::ElbowLeft, JointId::WristLeft,
                JointId::HandLeft};
    }
    return {JointId::HipRight,    JointId::KneeRight,  JointId::AnkleRight,
            JointId::ShoulderRight, JointId::ElbowRight, JointId::WristRight,
            JointId::HandRight};
}

std::vector<double> central_speed(const std::vector<Vec3>& p, double dt) {
    const size_t n = p.size();
    std::vector<double> v(n, 0.0);
    if (n < 2) return v;
    for (size_t i = 0; i < n; ++i) {
        Vec3 d;
        if (i == 0) d = (p[1] - p[0]) / dt;
        else if (i == n - 1) d = (p[n - 1] - p[n - 2]) / dt;
        else d = (p[i + 1] - p[i - 1]) / (2.0 * dt);
        v[i] = d.norm();
    }
    return v;
}

double median_of_prefix(const std::vector<double>& x, size_t count) {
    std::vector<double> head(x.begin(), x.begin() + std::min(count, x.size()));
    std::sort(head.begin(), head.end());
    const size_t n = head.size();
    return n % 2 ? head[n / 2] : 0.5 * (head[n / 2 - 1] + head[n / 2]);
}

double mean_of_prefix(const std::vector<double>& x, size_t count) {
    const size_t n = std::min(count, x.size());
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += x[i];
    return s / static_cast<double>(n);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b,
               size_t begin, size_t end) {
    const double n = static_cast<double>(end - begin);
    double ma = 0, mb = 0;
    for (size_t i = begin; i < end; ++i) { ma += a[i]; mb += b[i]; }
    ma /= n; mb /= n;
    double cov = 0, va = 0, vb = 0;
    for (size_t i = begin; i < end; ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va <= 0 || vb <= 0) return 0.0;
    return cov / std::sqrt(va * vb);
}

double stddev(const std::vector<double>& a, size_t begin, size_t end) {
    const double n = static_cast<double>(end - begin);
    double m = 0;
    for (size_t i = begin; i < end; ++i) m += a[i];
    m /= n;
    double v = 0;
    for (size_t i = begin; i < end; ++i) v += (a[i] - m) * (a[i] - m);
    return std::sqrt(v / n);
}

// Interior extrema of a 1-D signal, alternating and at least `hysteresis`
// apart in value. Classic zigzag pivots; the first leg establishes the
// direction without counting as a reversal.
std::vector<size_t> direction_reversals(const std::vector<double>& x,
                                        double hysteresis) {
    std::vector<size_t> out;
    if (x.size() < 3) return out;
    int dir = 0;  // +1 rising leg, -1 falling leg
    double hi = x[0], lo = x[0];
    size_t hi_i = 0, lo_i = 0;
    for (size_t i = 1; i < x.size(); ++i) {
        if (x[i] > hi) { hi = x[i]; hi_i = i; }
        if (x[i] < lo) { lo = x[i]; lo_i = i; }
        if (dir >= 0 && hi - x[i] > hysteresis) {
            if (dir == 1) out.push_back(hi_i);
            dir = -1;
            lo = x[i];
            lo_i = i;
        } else if (dir <= 0 && x[i] - lo > hysteresis) {
            if (dir == -1) out.push_back(lo_i);
            dir = 1;
            hi = x[i];
            hi_i = i;
        }
    }
    return out;
}

struct Region {
    size_t begin = 0;
    size_t end = 0;  // exclusive
    bool closed = false;
};

// Contiguous runs where value >= level; closed = the run exits before the
// signal ends.
std::vector<Region> regions_above(const std::vector<double>& x, double level) {
    std::vector<Region> out;
    size_t i = 0;
    while (i < x.size()) {
        if (x[i] < level) { ++i; continue; }
        Region r;
        r.begin = i;
        while (i < x.size() && x[i] >= level) ++i;
        r.end = i;
        r.closed = i < x.size();
        out.push_back(r);
    }
    return out;
}

std::vector<JointId> leg_joints_both() {
    return {JointId::HipLeft,  JointId::KneeLeft,  JointId::AnkleLeft,
            JointId::HipRight, JointId::KneeRight, JointId::AnkleRight};
}

std::vector<JointId> arm_joints(Side side) {
    const JointSet s = side_joints(side);
    return {s.hand, s.wrist, s.elbow, s.shoulder};
}

void detect_sprint(const NormalizedTrajectories& n, const DetectorConfig& cfg,
                   std::vector<GestureEvent>& out) {
    std::vector<double> speed(n.size(), 0.0);
    for (size_t i = 0; i < n.size(); ++i) {
        Vec3 d;
        if (i == 0) d = (n.hip_world[1] - n.hip_world[0]) / n.dt;
        else if (i == n.size() - 1)
            d = (n.hip_world[i] - n.hip_world[i - 1]) / n.dt;
        else d = (n.hip_world[i + 1] - n.hip_world[i - 1]) / (2.0 * n.dt);
        speed[i] = std::hypot(d.x, d.z) / n.height_m;
    }
    std::vector<double> knee_l(n.size()), knee_r(n.size());
    for (size_t i = 0; i < n.size(); ++i) {
        knee_l[i] = n.rel[i][joint_index(JointId::KneeLeft)].y;
        knee_r[i] = n.rel[i][joint_index(JointId::KneeRight)].y;
    }
    for (const Region& r : regions_above(speed, cfg.sprint_min_speed_ratio)) {
        if (n.t[r.end - 1] - n.t[r.begin] < cfg.window_s) continue;
        if (stddev(knee_l, r.begin, r.end) < kKneeOscFloor) continue;
        if (stddev(knee_r, r.begin, r.end) < kKneeOscFloor) continue;
        if (pearson(knee_l, knee_r, r.begin, r.end) >= kKneeAntiPhaseMax) continue;
        GestureEvent e;
        e.cls = GestureClass::Sprinting;
        e.side = Side::NA;
        e.start_t = n.t[r.begin];
        e.end_t = n.t[r.end - 1];
        e.joints = leg_joints_both();
        e.metrics["peak_speed_heights_s"] =
            *std::max_element(speed.begin() + r.begin, speed.begin() + r.end);
        e.metrics["duration_s"] = e.end_t - e.start_t;
        out.push_back(e);
    }
}

void detect_jump(const NormalizedTrajectories& n, const DetectorConfig& cfg,
                 std::vector<GestureEvent>& out) {
    const size_t k = std::max<size_t>(1, std::llround(kBaselineWindowS / n.dt));
    std::vector<double> hip_y(n.size());
    for (size_t i = 0; i < n.size(); ++i) hip_y[i] = n.hip_world[i].y;
    const double ground = median_of_prefix(hip_y, k);
    const double thresh_m = cfg.jump_min_rise_ratio * n.height_m;
    std::vector<double> rise(n.size());
    for (size_t i = 0; i < n.size(); ++i) rise[i] = hip_y[i] - ground;
    for (const Region& r : regions_above(rise, kRegionBand * thresh_m)) {
        const double peak =
            *std::max_element(rise.begin() + r.begin, rise.begin() + r.end);
        if (peak < thresh_m || !r.closed) continue;
        GestureEvent e;
        e.cls = GestureClass::Jumping;
        e.side = Side::NA;
        e.start_t = n.t[r.begin];
        e.end_t = n.t[r.end - 1];
        e.joints = leg_joints_both();
        e.metrics["jump_height_m"] = peak;
        out.push_back(e);
    }
}

void detect_wave(const NormalizedTrajectories& n, const DetectorConfig& cfg,
                 Side side, std::vector<GestureEvent>& out) {
    const JointSet s = side_joints(side);
    std::vector<double> lat(n.size());
    std::vector<char> above(n.size());
    for (size_t i = 0; i < n.size(); ++i) {
        lat[i] = n.rel[i][joint_index(s.wrist)].x;
        above[i] = n.rel[i][joint_index(s.wrist)].y >
                   n.rel[i][joint_index(s.elbow)].y;
    }
    std::vector<size_t> reversals;
    for (size_t i : direction_reversals(lat, kWaveHysteresis)) {
        if (above[i]) reversals.push_back(i);
    }
    // chains of reversals separated by at most one window
    size_t c = 0;
    while (c < reversals.size()) {
        size_t e = c;
        while (e + 1 < reversals.size() &&
               n.t[reversals[e + 1]] - n.t[reversals[e]] <= cfg.window_s) {
            ++e;
        }
        // sliding-window count inside the chain
        bool qualifies = false;
        for (size_t i = c; i + cfg.wave_min_reversals - 1 <= e; ++i) {
            const size_t j = i + cfg.wave_min_reversals - 1;
            if (n.t[reversals[j]] - n.t[reversals[i]] <= cfg.window_s) {
                qualifies = true;
                break;
            }
        }
        if (qualifies) {
            GestureEvent ev;
            ev.cls = GestureClass::OneHandWave;
            ev.side = side;
            ev.start_t = n.t[reversals[c]];
            ev.end_t = n.t[reversals[e]];
            ev.joints = arm_joints(side);
            ev.metrics["reversals"] = static_cast<double>(e - c + 1);
            out.push_back(ev);
        }
        c = e + 1;
    }
}

void detect_throw(const NormalizedTrajectories& n, const DetectorConfig& cfg,
                  Side side, std::vector<GestureEvent>& out) {
    const JointSet s = side_joints(side);
    std::vector<Vec3> wrist(n.size());
    std::vector<double> fwd(n.size());
    for (size_t i = 0; i < n.size(); ++i) {
        wrist[i] = n.rel[i][joint_index(s.wrist)];
        // forward = toward the camera; positive once the wrist passes the
        // shoulder plane
        fwd[i] = -(n.rel[i][joint_index(s.wrist)].z -
                   n.rel[i][joint_index(s.shoulder)].z);
    }
    const std::vector<double> speed = central_speed(wrist, n.dt);
    std::vector<size_t> crossings;
    for (size_t i = 1; i < n.size(); ++i) {
        if (fwd[i - 1] < 0.0 && fwd[i] >= 0.0) crossings.push_back(i);
    }
    for (size_t i = 1; i + 1 < n.size(); ++i) {
        if (speed[i] < cfg.speed_peak_ratio) continue;
        if (speed[i] < speed[i - 1] || speed[i] < speed[i + 1]) continue;
        size_t b = i, e = i;
        const double floor = kEnvelopeBand * cfg.speed_peak_ratio;
        while (b > 0 && speed[b - 1] >= floor) --b;
        while (e + 1 < n.size() && speed[e + 1] >= floor) ++e;
        // the fast stretch itself must carry the rear-to-front crossing
        bool crossed = false;
        for (size_t c : crossings) {
            if (c >= b && c <= e) { crossed = true; break; }
        }
        if (!crossed) continue;
        GestureEvent ev;
        ev.cls = GestureClass::Throwing;
        ev.side = side;
        ev.start_t = n.t[b];
        ev.end_t = n.t[e];
        ev.joints = {s.shoulder, s.elbow, s.wrist};
        ev.metrics["peak_speed_heights_s"] = speed[i];
        out.push_back(ev);
    }
}

void detect_heading(const NormalizedTrajectories& n, const DetectorConfig& cfg,
                    std::vector<GestureEvent>& out) {
    const size_t k = std::max<size_t>(1, std::llround(kBaselineWindowS / n.dt));
    std::vector<double> head_fwd(n.size()), shoulder_fwd(n.size());
    for (size_t i = 0; i < n.size(); ++i) {
        head_fwd[i] = -n.rel[i][joint_index(JointId::Head)].z;
        shoulder_fwd[i] = -0.5 * (n.rel[i][joint_index(JointId::ShoulderLeft)].z +
                                  n.rel[i][joint_index(JointId::ShoulderRight)].z);
    }
    const double head_base = mean_of_prefix(head_fwd, k);
    const double shoulder_base = mean_of_prefix(shoulder_fwd, k);
    std::vector<double> excursion(n.size());
    for (size_t i = 0; i < n.size(); ++i) excursion[i] = head_fwd[i] - head_base;
    const double thresh = cfg.heading_min_forward_ratio;
    for (const Region& r : regions_above(excursion, kRegionBand * thresh)) {
        const double peak = *std::max_element(excursion.begin() + r.begin,
                                              excursion.begin() + r.end);
        if (peak < thresh || !r.closed) continue;
        double shoulder_peak = 0.0;
        for (size_t i = r.begin; i < r.end; ++i) {
            shoulder_peak =
                std::max(shoulder_peak, std::abs(shoulder_fwd[i] - shoulder_base));
        }
        if (shoulder_peak > 0.5 * peak) continue;
        GestureEvent e;
        e.cls = GestureClass::Heading;
        e.side = Side::NA;
        e.start_t = n.t[r.begin];
        e.end_t = n.t[r.end - 1];
        e.joints = {JointId::Head, JointId::ShoulderLeft, JointId::ShoulderRight};
        e.metrics["forward_excursion_m"] = peak * n.height_m;
        out.push_back(e);
    }
}

void detect_kick(const NormalizedTrajectories& n, const DetectorConfig& cfg,
                 Side side, std::vector<GestureEvent>& out) {
    const JointSet s = side_joints(side);
    const JointSet o = side_joints(side == Side::Left ? Side::Right : Side::Left);
    const size_t k = std::max<size_t>(1, std::llround(kBaselineWindowS / n.dt));
    std::vector<Vec3> ankle(n.size());
    std::vector<double> other_ankle_y(n.size()), knee_angle(n.size());
    for (size_t i = 0; i < n.size(); ++i) {
        ankle[i] = n.rel[i][joint_index(s.ankle)];
        other_ankle_y[i] = n.rel[i][joint_index(o.ankle)].y;
        const Vec3 thigh = n.rel[i][joint_index(s.hip)] - n.rel[i][joint_index(s.knee)];
        const Vec3 shank = n.rel[i][joint_index(s.ankle)] - n.rel[i][joint_index(s.knee)];
        const double denom = thigh.norm() * shank.norm();
        knee_angle[i] = denom > 0.0
                            ? std::acos(std::clamp(thigh.dot(shank) / denom, -1.0, 1.0))
                            : 0.0;
    }
    const double stance_base = mean_of_prefix(other_ankle_y, k);
    const std::vector<double> speed = central_speed(ankle, n.dt);
    for (size_t i = 1; i + 1 < n.size(); ++i) {
        if (speed[i] < cfg.speed_peak_ratio) continue;
        if (speed[i] < speed[i - 1] || speed[i] < speed[i + 1]) continue;
        size_t b = i, e = i;
        const double floor = kEnvelopeBand * cfg.speed_peak_ratio;
        while (b > 0 && speed[b - 1] >= floor) --b;
        while (e + 1 < n.size() && speed[e + 1] >= floor) ++e;
        bool planted = true;
        for (size_t j = b; j <= e; ++j) {
            if (std::abs(other_ankle_y[j] - stance_base) > kKickStanceBand) {
                planted = false;
                break;
            }
        }
        if (!planted) continue;
        double max_angle = knee_angle[b];
        for (size_t j = b; j <= e; ++j) max_angle = std::max(max_angle, knee_angle[j]);
        if (max_angle - knee_angle[b] < kKickExtensionRad) continue;
        GestureEvent ev;
        ev.cls = GestureClass::Kicking;
        ev.side = side;
        ev.start_t = n.t[b];
        ev.end_t = n.t[e];
        ev.joints = {s.hip, s.knee, s.ankle};
        ev.metrics["peak_speed_heights_s"] = speed[i];
        out.push_back(ev);
    }
}

int class_rank(GestureClass cls) { return static_cast<int>(cls); }

void merge_same_class_overlaps(std::vector<GestureEvent>& events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const GestureEvent& a, const GestureEvent& b) {
                         if (class_rank(a.cls) != class_rank(b.cls))
                             return class_rank(a.cls) < class_rank(b.cls);
                         return a.start_t < b.start_t;
                     });
    std::vector<GestureEvent> merged;
    for (GestureEvent& e : events) {
        if (!merged.empty() && merged.back().cls == e.cls &&
            e.start_t <= merged.back().end_t) {
            GestureEvent& prev = merged.back();
            prev.end_t = std::max(prev.end_t, e.end_t);
            if (prev.side != e.side) prev.side = Side::Both;
            for (JointId j : e.joints) {
                if (std::find(prev.joints.begin(), prev.joints.end(), j) ==
                    prev.joints.end()) {
                    prev.joints.push_back(j);
                }
            }
            for (const auto& [key, value] : e.metrics) {
                auto it = prev.metrics.find(key);
                prev.metrics[key] = it == prev.metrics.end()
                                        ? value
                                        : std::max(it->second, value);
            }
        } else {
            merged.push_back(std::move(e));
        }
    }
    events = std::move(merged);
}

void validate_config(const DetectorConfig& cfg) {
    const bool ok = cfg.window_s > 0 && cfg.wave_min_reversals > 0 &&
                    cfg.jump_min_rise_ratio > 0 && cfg.jump_min_rise_ratio < 10 &&
                    cfg.speed_peak_ratio > 0 && cfg.speed_peak_ratio < 10 &&
                    cfg.sprint_min_speed_ratio > 0 &&
                    cfg.sprint_min_speed_ratio < 10 &&
                    cfg.heading_min_forward_ratio > 0 &&
                    cfg.heading_min_forward_ratio < 10;
    if (!ok) throw Error(ErrorCode::InvalidSpec, "detector thresholds out of range");
}

}  // namespace

const char* gesture_class_name(GestureClass cls) {
    switch (cls) {
        case GestureClass::Sprinting: return "Sprinting";
        case GestureClass::Jumping: return "Jumping";
        case GestureClass::OneHandWave: return "OneHandWave";
        case GestureClass::TwoHandsWave: return "TwoHandsWave";
        case GestureClass::Throwing: return "Throwing";
        case GestureClass::Heading: return "Heading";
        case GestureClass::Kicking: return "Kicking";
    }
    return "?";
}

const char* side_name(Side side) {
    switch (side) {
        case Side::Left: return "Left";
        case Side::Right: return "Right";
        case Side::Both: return "Both";
        case Side::NA: return "NA";
    }
    return "?";
}

std::optional<GestureClass> parse_gesture_class(std::string_view name) {
    for (int i = 0; i <= static_cast<int>(GestureClass::Kicking); ++i) {
        const auto cls = static_cast<GestureClass>(i);
        if (name == gesture_class_name(cls)) return cls;
    }
    return std::nullopt;
}

NormalizedTrajectories normalize_trajectories(const std::vector<Frame>& frames) {
    if (frames.size() < 2) {
        throw Error(ErrorCode::TooShort, "need at least 2 frames");
    }
    const SkeletonTopology& topo = kinect20_topology();
    for (size_t i = 0; i < frames.size(); ++i) {
        const ValidationReport report = validate_frame(frames[i], topo);
        if (!report.ok()) {
            throw Error(ErrorCode::NonFinite, "frame " + std::to_string(i) + ": " +
                                                  report.findings.front().message);
        }
        if (i > 0 && frames[i].t <= frames[i - 1].t) {
            throw Error(ErrorCode::NonMonotonicTime,
                        "frame " + std::to_string(i));
        }
    }

    const Frame& f0 = frames.front();
    const double height =
        (f0.position(JointId::Spine) - f0.position(JointId::HipCenter)).norm() +
        (f0.position(JointId::ShoulderCenter) - f0.position(JointId::Spine)).norm() +
        (f0.position(JointId::Head) - f0.position(JointId::ShoulderCenter)).norm();

    NormalizedTrajectories out;
    out.height_m = height;
    const size_t n = frames.size();
    out.dt = (frames.back().t - f0.t) / static_cast<double>(n - 1);
    out.t.resize(n);
    out.rel.resize(n);
    out.hip_world.resize(n);

    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        const double ti = f0.t + static_cast<double>(i) * out.dt;
        out.t[i] = ti;
        while (k + 1 < n - 1 && frames[k + 1].t <= ti) ++k;
        const Frame& a = frames[k];
        const Frame& b = frames[k + 1];
        const double u = std::clamp((ti - a.t) / (b.t - a.t), 0.0, 1.0);
        std::array<Vec3, kJointCount> pos;
        for (int j = 0; j < kJointCount; ++j) {
            pos[j] = a.positions[j] * (1.0 - u) + b.positions[j] * u;
        }
        const Vec3 hip = pos[joint_index(JointId::HipCenter)];
        out.hip_world[i] = hip;
        for (int j = 0; j < kJointCount; ++j) {
            out.rel[i][j] = (pos[j] - hip) / height;
        }
    }
    return out;
}

std::vector<GestureEvent> detect(const std::vector<Frame>& frames,
                                 const DetectorConfig& config) {
    validate_config(config);
    const NormalizedTrajectories n = normalize_trajectories(frames);

    std::vector<GestureEvent> events;
    detect_sprint(n, config, events);
    detect_jump(n, config, events);

    std::vector<GestureEvent> waves;
    detect_wave(n, config, Side::Left, waves);
    detect_wave(n, config, Side::Right, waves);
    // simultaneous left and right waves upgrade to a two-hands wave
    std::vector<char> consumed(waves.size(), 0);
    for (size_t i = 0; i < waves.size(); ++i) {
        if (consumed[i]) continue;
        GestureEvent merged = waves[i];
        bool upgraded = false;
        for (size_t j = i + 1; j < waves.size(); ++j) {
            if (consumed[j] || waves[j].side == merged.side) continue;
            if (std::max(merged.start_t, waves[j].start_t) <
                std::min(merged.end_t, waves[j].end_t)) {
                merged.cls = GestureClass::TwoHandsWave;
                merged.side = Side::Both;
                merged.start_t = std::min(merged.start_t, waves[j].start_t);
                merged.end_t = std::max(merged.end_t, waves[j].end_t);
                consumed[j] = 1;
                upgraded = true;
            }
        }
        if (upgraded) {
            merged.joints = arm_joints(Side::Left);
            const auto right = arm_joints(Side::Right);
            merged.joints.insert(merged.joints.end(), right.begin(), right.end());
        }
        events.push_back(merged);
    }

    detect_throw(n, config, Side::Left, events);
    detect_throw(n, config, Side::Right, events);
    detect_heading(n, config, events);
    detect_kick(n, config, Side::Left, events);
    detect_kick(n, config, Side::Right, events);

    merge_same_class_overlaps(events);
    std::stable_sort(events.begin(), events.end(),
                     [](const GestureEvent& a, const GestureEvent& b) {
                         if (a.start_t != b.start_t) return a.start_t < b.start_t;
                         return class_rank(a.cls) < class_rank(b.cls);
                     });
    return events;
}

}  // namespace mocap
