#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

#include "mocap/retarget.hpp"
#include "mocap/rig.hpp"

namespace mocap {

struct ServeConfig {
    RigDefinition rig;
    RetargetOptions options;
    bool mirror_x = false;
    std::uint16_t port = 0;  // 0 picks an ephemeral port
};

// Newline-delimited TCP protocol: the client sends capture lines, the server
// answers one pose line per frame. {"cmd":"reset"} restarts the session
// state. A malformed line gets a single {"error":...} line and the
// connection closes. Every connection owns its own retarget state.
class PoseStreamServer {
  public:
    explicit PoseStreamServer(ServeConfig config);
    ~PoseStreamServer();

    PoseStreamServer(const PoseStreamServer&) = delete;
    PoseStreamServer& operator=(const PoseStreamServer&) = delete;

    // Binds and starts accepting. Throws IoError if the port is taken.
    void start();
    void stop();

    std::uint16_t port() const { return port_; }

  private:
    void accept_loop();
    void session(int fd);

    ServeConfig config_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;
    std::mutex mutex_;
    std::vector<std::thread> sessions_;
    std::vector<int> session_fds_;
};

}  // namespace mocap
