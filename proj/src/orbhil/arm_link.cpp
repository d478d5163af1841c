#include "orbhil/arm_link.hpp"

#include "orbhil/errors.hpp"
#include "orbhil/socket.hpp"

namespace orbhil {

namespace {

ArmFeedback parse_feedback(const Message& msg) {
  if (msg.verb != "STATE") raise(ErrorCode::Protocol, "expected STATE, got " + msg.verb);
  ArmFeedback fb;
  fb.sequence = msg.require_u64("seq");
  fb.command_sequence = msg.require_u64("cmd_seq");
  fb.time = msg.require_double("t");
  fb.tool_pose = parse_pose_fields(msg);
  for (int i = 0; i < 6; ++i) fb.joints[i] = msg.require_double("j" + std::to_string(i + 1));
  fb.gripper_aperture_mm = msg.require_double("grip");
  if (!parse_gripper_mode(msg.require("gmode"), fb.gripper_mode))
    raise(ErrorCode::Protocol, "bad gmode field");
  fb.rail_position = msg.require_double("rail");
  return fb;
}

}  // namespace

ArmFeedback LoopbackArmLink::move(const Pose& target, std::uint64_t seq,
                                  std::optional<double> rail_velocity) {
  sim_.command_move(target, seq, rail_velocity);
  sim_.step();
  return sim_.feedback();
}

TcpArmLink::TcpArmLink(const std::string& host, int port, double timeout_s)
    : timeout_s_(timeout_s) {
  stream_ = TcpStream::connect(host, port, timeout_s);
  Message hello;
  hello.verb = "HELLO";
  hello.add_u64("v", kProtocolVersion);
  hello.add("role", "controller");
  const Message ack = request(hello);
  if (ack.verb != "ACK")
    raise(ErrorCode::Protocol, "handshake rejected: " + encode_payload(ack));
}

Message TcpArmLink::request(const Message& msg) {
  stream_.send_all(encode_frame(msg));
  const double deadline = timeout_s_;
  double waited = 0.0;
  while (true) {
    if (auto payload = decoder_.next()) {
      const Message reply = parse_payload(*payload);
      if (reply.verb == "ERR")
        raise(ErrorCode::Protocol, "server error: " + encode_payload(reply));
      return reply;
    }
    auto chunk = stream_.recv_some(4096, 0.2);
    if (chunk) {
      if (chunk->empty()) raise(ErrorCode::Connect, "server closed the connection");
      decoder_.feed(chunk->data(), chunk->size());
    } else {
      waited += 0.2;
      if (waited >= deadline) raise(ErrorCode::Connect, "reply timed out");
    }
  }
}

ArmFeedback TcpArmLink::move(const Pose& target, std::uint64_t seq,
                             std::optional<double> rail_velocity) {
  Message msg;
  msg.verb = "MOVE";
  msg.add_u64("seq", seq);
  msg.add_double("t", 0.0);
  add_pose_fields(msg, target);
  if (rail_velocity) msg.add_double("railv", *rail_velocity);
  const Message ack = request(msg);
  if (ack.verb != "ACK") raise(ErrorCode::Protocol, "MOVE not acknowledged");
  return state();
}

ArmFeedback TcpArmLink::state() {
  Message msg;
  msg.verb = "STATE";
  return parse_feedback(request(msg));
}

void TcpArmLink::grip(GripperMode mode) {
  Message msg;
  msg.verb = "GRIP";
  msg.add("mode", gripper_mode_name(mode));
  request(msg);
}

FtReading TcpArmLink::ft() {
  Message msg;
  msg.verb = "FT";
  const Message reply = request(msg);
  if (reply.verb != "FT") raise(ErrorCode::Protocol, "expected FT reply");
  FtReading ft;
  ft.sequence = reply.require_u64("seq");
  ft.force = Vec3(reply.require_double("fx"), reply.require_double("fy"),
                  reply.require_double("fz"));
  ft.torque = Vec3(reply.require_double("tx"), reply.require_double("ty"),
                   reply.require_double("tz"));
  return ft;
}

void TcpArmLink::bye() {
  try {
    Message msg;
    msg.verb = "BYE";
    request(msg);
  } catch (const Error&) {
    // Shutdown path; the connection may already be gone.
  }
  stream_.close();
}

std::unique_ptr<ArmLink> connect_arm(const std::string& address, double timeout_s) {
  const auto [host, port] = split_host_port(address);
  return std::make_unique<TcpArmLink>(host, port, timeout_s);
}

}  // namespace orbhil
