#pragma once

#include <memory>
#include <optional>
#include <string>

#include "orbhil/arm_endpoint.hpp"

namespace orbhil {

// Client-side handle to one arm endpoint: either an in-process simulator
// (default run mode) or a live wire-protocol connection. Request/reply per
// call; lockstep servers advance one tick per move command.
class ArmLink {
 public:
  virtual ~ArmLink() = default;

  virtual ArmFeedback move(const Pose& target, std::uint64_t seq,
                           std::optional<double> rail_velocity = std::nullopt) = 0;
  virtual ArmFeedback state() = 0;
  virtual void grip(GripperMode mode) = 0;
  virtual FtReading ft() = 0;
  virtual void bye() = 0;
};

class LoopbackArmLink final : public ArmLink {
 public:
  explicit LoopbackArmLink(const ArmEndpointConfig& config) : sim_(config) {}

  ArmFeedback move(const Pose& target, std::uint64_t seq,
                   std::optional<double> rail_velocity) override;
  ArmFeedback state() override { return sim_.feedback(); }
  void grip(GripperMode mode) override { sim_.command_grip(mode); }
  FtReading ft() override { return sim_.ft_reading(); }
  void bye() override {}

  ArmEndpointSim& sim() { return sim_; }

 private:
  ArmEndpointSim sim_;
};

class TcpArmLink final : public ArmLink {
 public:
  // Connects and performs the HELLO/ACK handshake; throws Error(Connect) or
  // Error(Protocol).
  TcpArmLink(const std::string& host, int port, double timeout_s = 2.0);

  ArmFeedback move(const Pose& target, std::uint64_t seq,
                   std::optional<double> rail_velocity) override;
  ArmFeedback state() override;
  void grip(GripperMode mode) override;
  FtReading ft() override;
  void bye() override;

 private:
  Message request(const Message& msg);

  TcpStream stream_;
  FrameDecoder decoder_;
  double timeout_s_;
};

std::unique_ptr<ArmLink> connect_arm(const std::string& address, double timeout_s = 2.0);

}  // namespace orbhil
