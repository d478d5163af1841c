#include "orbhil/protocol.hpp"

#include <charconv>

#include "orbhil/errors.hpp"

namespace orbhil {

namespace {

bool valid_verb(const std::string& v) {
  if (v.empty() || v.size() > 16) return false;
  for (char c : v)
    if (c < 'A' || c > 'Z') return false;
  return true;
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.size() > 32) return false;
  for (char c : k)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  return true;
}

bool valid_value(const std::string& v) {
  if (v.empty() || v.size() > 256) return false;
  for (unsigned char c : v)
    if (c <= 0x20 || c == 0x7f) return false;
  return true;
}

}  // namespace

void Message::add(const std::string& key, const std::string& value) {
  fields.emplace_back(key, value);
}

void Message::add_double(const std::string& key, double value) {
  fields.emplace_back(key, format_double(value));
}

void Message::add_u64(const std::string& key, std::uint64_t value) {
  fields.emplace_back(key, std::to_string(value));
}

const std::string* Message::find(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return &v;
  return nullptr;
}

std::string Message::require(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) raise(ErrorCode::Protocol, "missing field '" + key + "' in " + verb);
  return *v;
}

double Message::require_double(const std::string& key) const {
  double out;
  if (!parse_double(require(key), out) || !std::isfinite(out))
    raise(ErrorCode::Protocol, "field '" + key + "' is not a finite number");
  return out;
}

std::uint64_t Message::require_u64(const std::string& key) const {
  const std::string s = require(key);
  std::uint64_t out = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    raise(ErrorCode::Protocol, "field '" + key + "' is not an unsigned integer");
  return out;
}

std::optional<double> Message::get_double(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) return std::nullopt;
  double out;
  if (!parse_double(*v, out) || !std::isfinite(out))
    raise(ErrorCode::Protocol, "field '" + key + "' is not a finite number");
  return out;
}

std::string encode_payload(const Message& msg) {
  std::string out = msg.verb;
  for (const auto& [k, v] : msg.fields) {
    out += ' ';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

std::string encode_frame(const Message& msg) {
  const std::string payload = encode_payload(msg);
  const auto len = static_cast<std::uint32_t>(payload.size());
  std::string frame;
  frame.reserve(4 + payload.size());
  frame.push_back(static_cast<char>((len >> 24) & 0xff));
  frame.push_back(static_cast<char>((len >> 16) & 0xff));
  frame.push_back(static_cast<char>((len >> 8) & 0xff));
  frame.push_back(static_cast<char>(len & 0xff));
  frame += payload;
  return frame;
}

Message parse_payload(const std::string& payload) {
  if (payload.empty() || payload.size() > kMaxFrameBytes)
    raise(ErrorCode::Protocol, "empty or oversized payload");

  Message msg;
  size_t pos = 0;
  auto next_token = [&]() -> std::string {
    if (pos >= payload.size()) return {};
    const size_t sp = payload.find(' ', pos);
    std::string tok = sp == std::string::npos ? payload.substr(pos)
                                              : payload.substr(pos, sp - pos);
    pos = sp == std::string::npos ? payload.size() : sp + 1;
    return tok;
  };

  msg.verb = next_token();
  if (!valid_verb(msg.verb)) raise(ErrorCode::Protocol, "invalid verb token");
  while (pos < payload.size()) {
    const std::string tok = next_token();
    const size_t eq = tok.find('=');
    if (eq == std::string::npos)
      raise(ErrorCode::Protocol, "field token without '='");
    const std::string key = tok.substr(0, eq);
    const std::string value = tok.substr(eq + 1);
    if (!valid_key(key)) raise(ErrorCode::Protocol, "invalid field key");
    if (!valid_value(value)) raise(ErrorCode::Protocol, "invalid field value");
    msg.fields.emplace_back(key, value);
  }
  return msg;
}

void FrameDecoder::feed(const char* data, size_t size) {
  buffer_.append(data, size);
}

std::optional<std::string> FrameDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  const auto b = reinterpret_cast<const unsigned char*>(buffer_.data());
  const std::uint32_t len = (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
                            (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
  if (len > kMaxFrameBytes)
    raise(ErrorCode::Protocol, "frame length " + std::to_string(len) + " exceeds limit");
  if (buffer_.size() < 4 + static_cast<size_t>(len)) return std::nullopt;
  std::string payload = buffer_.substr(4, len);
  buffer_.erase(0, 4 + static_cast<size_t>(len));
  return payload;
}

void add_pose_fields(Message& msg, const Pose& pose) {
  msg.add_double("x", pose.position.x());
  msg.add_double("y", pose.position.y());
  msg.add_double("z", pose.position.z());
  msg.add_double("qw", pose.orientation.w());
  msg.add_double("qx", pose.orientation.x());
  msg.add_double("qy", pose.orientation.y());
  msg.add_double("qz", pose.orientation.z());
}

Pose parse_pose_fields(const Message& msg) {
  Pose pose;
  pose.position = Vec3(msg.require_double("x"), msg.require_double("y"),
                       msg.require_double("z"));
  const Quat q(msg.require_double("qw"), msg.require_double("qx"), msg.require_double("qy"),
               msg.require_double("qz"));
  if (std::abs(q.norm() - 1.0) > 1e-6)
    raise(ErrorCode::Protocol, "pose quaternion is not unit norm");
  pose.orientation = q.normalized();
  return pose;
}

}  // namespace orbhil
