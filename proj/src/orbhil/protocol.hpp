#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbhil/math.hpp"

namespace orbhil {

// Wire format, bit-exact:
//   frame   := length payload
//   length  := 4-byte big-endian unsigned payload byte count
//   payload := UTF-8 "VERB key=value key=value ..."
// Single spaces separate tokens; keys are lowercase [a-z0-9_]; values contain
// no spaces or control bytes; floats are serialized as the shortest decimal
// that round-trips. Encoders emit fields in the documented order per verb:
//   HELLO  v role
//   ACK    seq | v role | grip | bye        (echoes what it acknowledges)
//   MOVE   seq t x y z qw qx qy qz [railv]
//   SERVOJ seq t j1 j2 j3 j4 j5 j6
//   STATE  seq cmd_seq t x y z qw qx qy qz j1..j6 grip gmode rail
//   GRIP   mode [width]
//   FT     seq fx fy fz tx ty tz
//   ERR    code [msg]
//   BYE    (no fields)
inline constexpr int kProtocolVersion = 1;
inline constexpr std::uint32_t kMaxFrameBytes = 65536;
inline constexpr int kDefaultChaserPort = 7051;
inline constexpr int kDefaultTargetPort = 7101;

struct Message {
  std::string verb;
  std::vector<std::pair<std::string, std::string>> fields;

  void add(const std::string& key, const std::string& value);
  void add_double(const std::string& key, double value);
  void add_u64(const std::string& key, std::uint64_t value);

  const std::string* find(const std::string& key) const;
  // Throw Error(Protocol) naming the key when absent or malformed.
  std::string require(const std::string& key) const;
  double require_double(const std::string& key) const;
  std::uint64_t require_u64(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
};

// Payload text (no length prefix).
std::string encode_payload(const Message& msg);
// Full frame: big-endian length followed by the payload.
std::string encode_frame(const Message& msg);

// Throws Error(Protocol) on any malformed payload.
Message parse_payload(const std::string& payload);

// Incremental frame splitter for a byte stream. Oversized length prefixes
// poison the stream (it cannot resync) and raise Error(Protocol).
class FrameDecoder {
 public:
  void feed(const char* data, size_t size);
  std::optional<std::string> next();

 private:
  std::string buffer_;
};

// Pose field helpers shared by client and server.
void add_pose_fields(Message& msg, const Pose& pose);
Pose parse_pose_fields(const Message& msg);

}  // namespace orbhil
