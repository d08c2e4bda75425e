#pragma once

#include "hghz/protocol.hpp"

namespace hghz {

// Loopback-TCP transport for the identical serialized Message format:
// 4-byte big-endian length prefix + JSON body.

std::string frame_message(const Message& m);
Message unframe_message(const std::string& body);

// Serves one connection on 127.0.0.1, receives `expect` framed messages and
// echoes them back. Returns the bound port.
class LoopbackEcho {
  public:
    LoopbackEcho();
    ~LoopbackEcho();
    uint16_t port() const { return port_; }
    void serve_one(size_t expect); // blocking; run from a helper thread

  private:
    int listen_fd_ = -1;
    uint16_t port_ = 0;
};

// Connects, sends all messages, reads back the echoes.
std::vector<Message> send_and_receive(uint16_t port, const std::vector<Message>& msgs);

} // namespace hghz
