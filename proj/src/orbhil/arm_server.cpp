#include "orbhil/arm_server.hpp"

#include <chrono>

#include "orbhil/errors.hpp"

namespace orbhil {

namespace {

Message err_message(const std::string& code, const std::string& detail) {
  Message m;
  m.verb = "ERR";
  m.add("code", code);
  if (!detail.empty()) {
    std::string cleaned;
    for (char c : detail) cleaned += (c == ' ' ? '-' : c);
    m.add("msg", cleaned.substr(0, 200));
  }
  return m;
}

Message feedback_message(const ArmFeedback& fb) {
  Message m;
  m.verb = "STATE";
  m.add_u64("seq", fb.sequence);
  m.add_u64("cmd_seq", fb.command_sequence);
  m.add_double("t", fb.time);
  add_pose_fields(m, fb.tool_pose);
  for (int i = 0; i < 6; ++i) m.add_double("j" + std::to_string(i + 1), fb.joints[i]);
  m.add_double("grip", fb.gripper_aperture_mm);
  m.add("gmode", gripper_mode_name(fb.gripper_mode));
  m.add_double("rail", fb.rail_position);
  return m;
}

}  // namespace

ArmServer::ArmServer(const ArmServerConfig& config)
    : config_(config), sim_(config.endpoint) {
  listener_ = TcpListener::bind(config_.bind_host, config_.port);
  port_ = listener_.port();
  accept_thread_ = std::thread([this] { accept_loop(); });
  if (config_.wall_clock) clock_thread_ = std::thread([this] { wall_clock_loop(); });
}

ArmServer::~ArmServer() { stop(); }

void ArmServer::stop() {
  const bool was_running = running_.exchange(false);
  if (!was_running) return;
  listener_.close();
  if (accept_thread_.joinable()) accept_thread_.join();
  if (clock_thread_.joinable()) clock_thread_.join();
}

void ArmServer::accept_loop() {
  while (running_) {
    std::optional<TcpStream> client;
    try {
      client = listener_.accept(0.2);
    } catch (const Error&) {
      break;  // listener closed during shutdown
    }
    if (!client) continue;
    if (connection_active_.exchange(true)) {
      // One control connection at a time.
      try {
        client->send_all(encode_frame(err_message("busy", "control connection already active")));
      } catch (const Error&) {}
      connection_active_ = false;
      continue;
    }
    serve_connection(*client);
    connection_active_ = false;
  }
}

void ArmServer::serve_connection(TcpStream& stream) {
  FrameDecoder decoder;
  while (running_) {
    std::optional<std::string> chunk;
    try {
      chunk = stream.recv_some(4096, 0.2);
    } catch (const Error&) {
      return;
    }
    if (!chunk) continue;          // poll timeout, check shutdown flag
    if (chunk->empty()) return;    // orderly close
    decoder.feed(chunk->data(), chunk->size());

    while (true) {
      std::optional<std::string> payload;
      try {
        payload = decoder.next();
      } catch (const Error& e) {
        // Oversized frame: the byte stream cannot be resynchronized.
        try {
          stream.send_all(encode_frame(err_message("bad-frame", e.what())));
        } catch (const Error&) {}
        return;
      }
      if (!payload) break;

      bool close_connection = false;
      const std::string reply = handle_payload(*payload, close_connection);
      try {
        stream.send_all(reply);
      } catch (const Error&) {
        return;
      }
      if (close_connection) return;
    }
  }
}

std::string ArmServer::handle_payload(const std::string& payload, bool& close_connection) {
  try {
    const Message msg = parse_payload(payload);
    return encode_frame(handle_message(msg, close_connection));
  } catch (const Error& e) {
    return encode_frame(err_message(e.code() == ErrorCode::Protocol ? "malformed" : error_code_name(e.code()),
                                    e.what()));
  } catch (const std::exception& e) {
    return encode_frame(err_message("internal", e.what()));
  }
}

Message ArmServer::handle_message(const Message& msg, bool& close_connection) {
  std::lock_guard<std::mutex> lock(sim_mutex_);

  if (msg.verb == "HELLO") {
    const auto v = msg.require_u64("v");
    if (v != static_cast<std::uint64_t>(kProtocolVersion)) {
      close_connection = true;
      return err_message("version-mismatch",
                         "server speaks v" + std::to_string(kProtocolVersion));
    }
    Message ack;
    ack.verb = "ACK";
    ack.add_u64("v", kProtocolVersion);
    ack.add("role", config_.endpoint.rail_enabled ? "chaser" : "target");
    return ack;
  }
  if (msg.verb == "MOVE") {
    const std::uint64_t seq = msg.require_u64("seq");
    const Pose target = parse_pose_fields(msg);
    std::optional<double> railv = msg.get_double("railv");
    sim_.command_move(target, seq, railv);
    if (!config_.wall_clock) sim_.step();
    Message ack;
    ack.verb = "ACK";
    ack.add_u64("seq", seq);
    return ack;
  }
  if (msg.verb == "SERVOJ") {
    const std::uint64_t seq = msg.require_u64("seq");
    ArmJoints joints;
    for (int i = 0; i < 6; ++i) joints[i] = msg.require_double("j" + std::to_string(i + 1));
    sim_.command_joints(joints, seq);
    if (!config_.wall_clock) sim_.step();
    Message ack;
    ack.verb = "ACK";
    ack.add_u64("seq", seq);
    return ack;
  }
  if (msg.verb == "STATE") {
    return feedback_message(sim_.feedback());
  }
  if (msg.verb == "GRIP") {
    GripperMode mode;
    const std::string m = msg.require("mode");
    if (!parse_gripper_mode(m == "close" ? "closed" : m, mode))
      return err_message("bad-grip-mode", m);
    sim_.command_grip(mode);
    Message ack;
    ack.verb = "ACK";
    ack.add("grip", gripper_mode_name(mode));
    return ack;
  }
  if (msg.verb == "FT") {
    const FtReading ft = sim_.ft_reading();
    Message reply;
    reply.verb = "FT";
    reply.add_u64("seq", ft.sequence);
    reply.add_double("fx", ft.force.x());
    reply.add_double("fy", ft.force.y());
    reply.add_double("fz", ft.force.z());
    reply.add_double("tx", ft.torque.x());
    reply.add_double("ty", ft.torque.y());
    reply.add_double("tz", ft.torque.z());
    return reply;
  }
  if (msg.verb == "BYE") {
    close_connection = true;
    Message ack;
    ack.verb = "ACK";
    ack.add("bye", "1");
    return ack;
  }
  return err_message("unknown-verb", msg.verb);
}

void ArmServer::wall_clock_loop() {
  using clock = std::chrono::steady_clock;
  const auto period =
      std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(config_.endpoint.tick_period));
  auto next = clock::now() + period;
  while (running_) {
    {
      std::lock_guard<std::mutex> lock(sim_mutex_);
      sim_.step();
    }
    std::this_thread::sleep_until(next);
    next += period;
  }
}

}  // namespace orbhil
