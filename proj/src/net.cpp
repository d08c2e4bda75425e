#include "hghz/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>

namespace hghz {

std::string frame_message(const Message& m) {
    std::string body = m.wire();
    uint32_t len = static_cast<uint32_t>(body.size());
    std::string out;
    out.push_back(static_cast<char>((len >> 24) & 0xff));
    out.push_back(static_cast<char>((len >> 16) & 0xff));
    out.push_back(static_cast<char>((len >> 8) & 0xff));
    out.push_back(static_cast<char>(len & 0xff));
    out += body;
    return out;
}

Message unframe_message(const std::string& body) {
    nlohmann::json j = nlohmann::json::parse(body);
    Message m;
    m.round = j.at("round").get<int>();
    m.sender = j.at("from").get<std::string>();
    m.receiver = j.at("to").get<std::string>();
    m.type = j.at("type").get<std::string>();
    m.payload = j.at("payload");
    m.pad = j.at("pad").get<std::string>();
    return m;
}

namespace {

void write_all(int fd, const char* data, size_t n) {
    size_t done = 0;
    while (done < n) {
        ssize_t w = ::write(fd, data + done, n - done);
        if (w <= 0) throw std::runtime_error("socket write failed");
        done += static_cast<size_t>(w);
    }
}

void read_all(int fd, char* data, size_t n) {
    size_t done = 0;
    while (done < n) {
        ssize_t r = ::read(fd, data + done, n - done);
        if (r <= 0) throw std::runtime_error("socket read failed");
        done += static_cast<size_t>(r);
    }
}

std::string read_frame(int fd) {
    char hdr[4];
    read_all(fd, hdr, 4);
    uint32_t len = static_cast<uint32_t>(static_cast<uint8_t>(hdr[0])) << 24 |
                   static_cast<uint32_t>(static_cast<uint8_t>(hdr[1])) << 16 |
                   static_cast<uint32_t>(static_cast<uint8_t>(hdr[2])) << 8 |
                   static_cast<uint32_t>(static_cast<uint8_t>(hdr[3]));
    if (len > (1u << 26)) throw std::runtime_error("oversized frame");
    std::string body(len, '\0');
    read_all(fd, body.data(), len);
    return body;
}

} // namespace

LoopbackEcho::LoopbackEcho() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error("socket failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
        throw std::runtime_error("bind failed");
    if (::listen(listen_fd_, 1) != 0) throw std::runtime_error("listen failed");
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

LoopbackEcho::~LoopbackEcho() {
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void LoopbackEcho::serve_one(size_t expect) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) throw std::runtime_error("accept failed");
    try {
        for (size_t i = 0; i < expect; ++i) {
            std::string body = read_frame(fd);
            Message m = unframe_message(body); // validate before echoing
            std::string framed = frame_message(m);
            write_all(fd, framed.data(), framed.size());
        }
    } catch (...) {
        ::close(fd);
        throw;
    }
    ::close(fd);
}

std::vector<Message> send_and_receive(uint16_t port, const std::vector<Message>& msgs) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw std::runtime_error("socket failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd);
        throw std::runtime_error("connect failed");
    }
    std::vector<Message> back;
    try {
        for (const auto& m : msgs) {
            std::string framed = frame_message(m);
            write_all(fd, framed.data(), framed.size());
            back.push_back(unframe_message(read_frame(fd)));
        }
    } catch (...) {
        ::close(fd);
        throw;
    }
    ::close(fd);
    return back;
}

} // namespace hghz
