#include "mocap/serve.hpp"

#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <string>

#include "mocap/errors.hpp"
#include "mocap/io_formats.hpp"

namespace mocap {
namespace {

bool send_all(int fd, const std::string& data) {
    size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent,
                                 MSG_NOSIGNAL);
        if (n <= 0) return false;
        sent += static_cast<size_t>(n);
    }
    return true;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') { out += '\\'; out += c; }
        else if (static_cast<unsigned char>(c) < 0x20) out += ' ';
        else out += c;
    }
    return out;
}

}  // namespace

PoseStreamServer::PoseStreamServer(ServeConfig config)
    : config_(std::move(config)) {}

PoseStreamServer::~PoseStreamServer() { stop(); }

void PoseStreamServer::start() {
    check_pipeline_rig(config_.rig);

    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw Error(ErrorCode::IoError, "socket failed");
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(config_.port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw Error(ErrorCode::IoError,
                    "cannot bind port " + std::to_string(config_.port));
    }
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);

    if (::listen(listen_fd_, 16) != 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw Error(ErrorCode::IoError, "listen failed");
    }
    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void PoseStreamServer::stop() {
    if (!running_.exchange(false)) {
        if (accept_thread_.joinable()) accept_thread_.join();
        return;
    }
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> sessions;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (int fd : session_fds_) ::shutdown(fd, SHUT_RDWR);
        sessions.swap(sessions_);
    }
    for (std::thread& t : sessions) {
        if (t.joinable()) t.join();
    }
}

void PoseStreamServer::accept_loop() {
    while (running_) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (!running_) break;
            continue;
        }
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        std::lock_guard<std::mutex> lock(mutex_);
        session_fds_.push_back(fd);
        sessions_.emplace_back([this, fd] { session(fd); });
    }
}

void PoseStreamServer::session(int fd) {
    std::optional<RetargetState> state;
    long index = -1;
    std::string buffer;
    char chunk[4096];

    auto handle_line = [&](const std::string& line) -> bool {
        if (line == "{\"cmd\":\"reset\"}") {
            state.reset();
            index = -1;
            return true;
        }
        try {
            Frame frame = parse_capture_line(line);
            if (config_.mirror_x) {
                for (auto& p : frame.positions) p.x = -p.x;
            }
            ++index;
            if (index < config_.options.rest_frame) return true;
            RigPose pose;
            if (!state) {
                state = init_state(frame, config_.rig, config_.options.smoothing);
                pose = identity_pose(*state, frame.t);
            } else {
                pose = retarget_step(*state, frame);
            }
            const auto positions = forward_kinematics(state->rig, pose);
            return send_all(fd, write_pose_line(pose, positions) + "\n");
        } catch (const Error& e) {
            if (config_.options.skip_bad_frames) return true;
            send_all(fd, std::string("{\"error\":\"") + json_escape(e.what()) +
                             "\"}\n");
            return false;
        }
    };

    bool open = true;
    while (open) {
        const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<size_t>(n));
        size_t start = 0;
        while (open) {
            const size_t nl = buffer.find('\n', start);
            if (nl == std::string::npos) break;
            std::string line = buffer.substr(start, nl - start);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            start = nl + 1;
            open = handle_line(line);
        }
        buffer.erase(0, start);
    }
    ::close(fd);
}

}  // namespace mocap
