#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "orbhil/arm_endpoint.hpp"
#include "orbhil/socket.hpp"

namespace orbhil {

struct ArmServerConfig {
  std::string bind_host = "127.0.0.1";
  int port = kDefaultChaserPort;  // 0 picks an ephemeral port
  ArmEndpointConfig endpoint;
  // Lockstep: the simulation advances one tick per MOVE/SERVOJ command
  // (deterministic). Wall clock: a background thread free-runs the servo at
  // the tick period.
  bool wall_clock = false;
};

// Serves the arm wire protocol for one simulated endpoint until shutdown.
// One control connection at a time; extra connections are turned away with
// ERR code=busy. Malformed frames get ERR replies without dropping the
// connection; only a HELLO version mismatch or an unframeable byte stream
// closes it.
class ArmServer {
 public:
  explicit ArmServer(const ArmServerConfig& config);
  ~ArmServer();
  ArmServer(const ArmServer&) = delete;
  ArmServer& operator=(const ArmServer&) = delete;

  int port() const { return port_; }
  void stop();

 private:
  void accept_loop();
  void serve_connection(TcpStream& stream);
  std::string handle_payload(const std::string& payload, bool& close_connection);
  Message handle_message(const Message& msg, bool& close_connection);
  void wall_clock_loop();

  ArmServerConfig config_;
  ArmEndpointSim sim_;
  std::mutex sim_mutex_;
  TcpListener listener_;
  int port_ = 0;
  std::atomic<bool> running_{true};
  std::atomic<bool> connection_active_{false};
  std::thread accept_thread_;
  std::thread clock_thread_;
};

}  // namespace orbhil
