#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcf/wire.hpp"

namespace qcf::shell {

class TransportError : public std::runtime_error {
public:
    explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

// Ordered, at-most-once byte stream between two protocol endpoints.
class Endpoint {
public:
    virtual ~Endpoint() = default;
    virtual void send_bytes(const std::vector<std::uint8_t>& bytes) = 0;
    virtual void recv_exact(std::uint8_t* buf, std::size_t len) = 0;  // throws on loss/close
};

inline void send_message(Endpoint& endpoint, const coinflip::ProtocolMessage& msg) {
    endpoint.send_bytes(encode_frame(msg));
}

inline coinflip::ProtocolMessage recv_message(Endpoint& endpoint) {
    std::uint8_t header[5];
    endpoint.recv_exact(header, sizeof header);
    const std::uint8_t tag = header[0];
    const std::uint32_t bit_count = (static_cast<std::uint32_t>(header[1]) << 24) |
                                    (static_cast<std::uint32_t>(header[2]) << 16) |
                                    (static_cast<std::uint32_t>(header[3]) << 8) |
                                    static_cast<std::uint32_t>(header[4]);
    if (tag > 4) throw FramingError("unknown message tag " + std::to_string(tag));
    if (bit_count > kMaxPayloadBits) throw FramingError("payload too large");
    std::vector<std::uint8_t> payload((bit_count + 7) / 8);
    if (!payload.empty()) endpoint.recv_exact(payload.data(), payload.size());
    const auto bits = Bits::unpack(payload, bit_count);
    if (!bits) throw FramingError("nonzero padding bits");
    return message_from_payload(tag, *bits);
}

// --- in-process transport ---------------------------------------------------

namespace detail {

struct ByteQueue {
    std::mutex mutex;
    std::condition_variable cv;
    std::deque<std::uint8_t> data;
    bool closed = false;

    void push(const std::vector<std::uint8_t>& bytes) {
        {
            std::lock_guard<std::mutex> lock(mutex);
            if (closed) throw TransportError("peer endpoint closed");
            data.insert(data.end(), bytes.begin(), bytes.end());
        }
        cv.notify_all();
    }

    void pop_exact(std::uint8_t* buf, std::size_t len) {
        std::unique_lock<std::mutex> lock(mutex);
        cv.wait(lock, [&] { return data.size() >= len || closed; });
        if (data.size() < len) throw TransportError("connection closed mid-frame");
        for (std::size_t i = 0; i < len; ++i) {
            buf[i] = data.front();
            data.pop_front();
        }
    }

    void close() {
        {
            std::lock_guard<std::mutex> lock(mutex);
            closed = true;
        }
        cv.notify_all();
    }
};

}  // namespace detail

class LoopbackEndpoint final : public Endpoint {
public:
    LoopbackEndpoint(std::shared_ptr<detail::ByteQueue> out, std::shared_ptr<detail::ByteQueue> in)
        : out_(std::move(out)), in_(std::move(in)) {}
    ~LoopbackEndpoint() override { out_->close(); }

    void send_bytes(const std::vector<std::uint8_t>& bytes) override { out_->push(bytes); }
    void recv_exact(std::uint8_t* buf, std::size_t len) override { in_->pop_exact(buf, len); }

private:
    std::shared_ptr<detail::ByteQueue> out_, in_;
};

struct LoopbackPair {
    std::unique_ptr<LoopbackEndpoint> first, second;
};

inline LoopbackPair make_loopback() {
    auto q1 = std::make_shared<detail::ByteQueue>();
    auto q2 = std::make_shared<detail::ByteQueue>();
    return LoopbackPair{std::make_unique<LoopbackEndpoint>(q1, q2),
                        std::make_unique<LoopbackEndpoint>(q2, q1)};
}

// --- TCP transport -----------------------------------------------------------

class TcpEndpoint final : public Endpoint {
public:
    explicit TcpEndpoint(int fd) : fd_(fd) {}
    TcpEndpoint(TcpEndpoint&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    TcpEndpoint& operator=(TcpEndpoint&& other) noexcept {
        if (this != &other) {
            close_fd();
            fd_ = other.fd_;
            other.fd_ = -1;
        }
        return *this;
    }
    TcpEndpoint(const TcpEndpoint&) = delete;
    TcpEndpoint& operator=(const TcpEndpoint&) = delete;
    ~TcpEndpoint() override { close_fd(); }

    static TcpEndpoint connect_to(const std::string& host, std::uint16_t port) {
        addrinfo hints{};
        hints.ai_family = AF_UNSPEC;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* res = nullptr;
        const std::string service = std::to_string(port);
        if (getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0 || !res)
            throw TransportError("cannot resolve " + host);
        int fd = -1;
        for (addrinfo* ai = res; ai; ai = ai->ai_next) {
            fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
            if (fd < 0) continue;
            if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
            ::close(fd);
            fd = -1;
        }
        freeaddrinfo(res);
        if (fd < 0) throw TransportError("cannot connect to " + host + ":" + service);
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        return TcpEndpoint(fd);
    }

    void send_bytes(const std::vector<std::uint8_t>& bytes) override {
        std::size_t sent = 0;
        while (sent < bytes.size()) {
            const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
            if (n <= 0) throw TransportError("send failed: " + std::string(std::strerror(errno)));
            sent += static_cast<std::size_t>(n);
        }
    }

    void recv_exact(std::uint8_t* buf, std::size_t len) override {
        std::size_t got = 0;
        while (got < len) {
            const ssize_t n = ::recv(fd_, buf + got, len - got, 0);
            if (n == 0) throw TransportError("connection closed by peer");
            if (n < 0) throw TransportError("recv failed: " + std::string(std::strerror(errno)));
            got += static_cast<std::size_t>(n);
        }
    }

private:
    void close_fd() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }
    int fd_ = -1;
};

class TcpListener {
public:
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;
    TcpListener(TcpListener&& other) noexcept : fd_(other.fd_), port_(other.port_) {
        other.fd_ = -1;
    }
    ~TcpListener() {
        if (fd_ >= 0) ::close(fd_);
    }

    // Binds IPv4; port 0 requests an ephemeral port, see port().
    static TcpListener bind_to(const std::string& host, std::uint16_t port) {
        const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0) throw TransportError("cannot create socket");
        const int one = 1;
        ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        if (host.empty() || host == "0.0.0.0") {
            addr.sin_addr.s_addr = htonl(INADDR_ANY);
        } else if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
            ::close(fd);
            throw TransportError("bad listen address " + host);
        }
        if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
            ::close(fd);
            throw TransportError("cannot bind " + host + ":" + std::to_string(port));
        }
        if (::listen(fd, 4) != 0) {
            ::close(fd);
            throw TransportError("cannot listen");
        }
        sockaddr_in bound{};
        socklen_t len = sizeof bound;
        ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
        return TcpListener(fd, ntohs(bound.sin_port));
    }

    std::uint16_t port() const { return port_; }

    TcpEndpoint accept_one() {
        const int client = ::accept(fd_, nullptr, nullptr);
        if (client < 0) throw TransportError("accept failed");
        const int one = 1;
        ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        return TcpEndpoint(client);
    }

private:
    TcpListener(int fd, std::uint16_t port) : fd_(fd), port_(port) {}
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

}  // namespace qcf::shell
