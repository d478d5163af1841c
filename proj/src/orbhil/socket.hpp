#pragma once

#include <memory>
#include <optional>
#include <string>

namespace orbhil {

// Thin RAII wrappers over POSIX stream sockets, just enough for the arm
// protocol: blocking connect with timeout, exact sends, and poll-based reads
// so server threads can shut down cleanly.

class TcpStream {
 public:
  TcpStream() = default;
  explicit TcpStream(int fd) : fd_(fd) {}
  ~TcpStream();
  TcpStream(TcpStream&& other) noexcept;
  TcpStream& operator=(TcpStream&& other) noexcept;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  static TcpStream connect(const std::string& host, int port, double timeout_s);

  bool valid() const { return fd_ >= 0; }
  void send_all(const std::string& bytes);           // throws Error(Connect) on failure
  // Up to `max` bytes; empty string on orderly peer close; nullopt on poll
  // timeout. Throws Error(Connect) on socket errors.
  std::optional<std::string> recv_some(size_t max, double timeout_s);
  void close();

 private:
  int fd_ = -1;
};

class TcpListener {
 public:
  TcpListener() = default;
  ~TcpListener();
  TcpListener(TcpListener&& other) noexcept;
  TcpListener& operator=(TcpListener&& other) noexcept;
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  // Binds and listens; port 0 picks an ephemeral port. Throws Error(Connect).
  static TcpListener bind(const std::string& host, int port);

  int port() const { return port_; }
  std::optional<TcpStream> accept(double timeout_s);  // nullopt on timeout
  void close();
  bool valid() const { return fd_ >= 0; }

 private:
  int fd_ = -1;
  int port_ = 0;
};

// "host:port" split; throws Error(InvalidArgument) on malformed input.
std::pair<std::string, int> split_host_port(const std::string& address);

}  // namespace orbhil
