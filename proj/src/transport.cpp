#include "fedqnn/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>

#include "fedqnn/aggregate.hpp"
#include "fedqnn/errors.hpp"

namespace fedqnn::fed {

void InProcessTransport::send(std::vector<std::uint8_t> frame) {
    {
        std::lock_guard lock(mutex_);
        queue_.push_back(std::move(frame));
    }
    cv_.notify_one();
}

std::optional<std::vector<std::uint8_t>> InProcessTransport::recv(
    std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    if (!cv_.wait_for(lock, timeout, [&] { return !queue_.empty(); })) {
        return std::nullopt;
    }
    auto frame = std::move(queue_.front());
    queue_.pop_front();
    return frame;
}

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
    throw TransportError(what + ": " + std::strerror(errno));
}

}  // namespace

LoopbackTransport::LoopbackTransport() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw_errno("socket");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;  // ephemeral
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        throw_errno("bind");
    }
    if (::listen(listen_fd_, 64) < 0) throw_errno("listen");
    socklen_t len = sizeof addr;
    if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len) < 0) {
        throw_errno("getsockname");
    }
    port_ = ntohs(addr.sin_port);
}

LoopbackTransport::~LoopbackTransport() {
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void LoopbackTransport::send(std::vector<std::uint8_t> frame) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw_errno("socket");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port_);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        ::close(fd);
        throw_errno("connect");
    }
    std::size_t sent = 0;
    while (sent < frame.size()) {
        const ssize_t n = ::send(fd, frame.data() + sent, frame.size() - sent, 0);
        if (n < 0) {
            ::close(fd);
            throw_errno("send");
        }
        sent += static_cast<std::size_t>(n);
    }
    ::close(fd);
}

std::optional<std::vector<std::uint8_t>> LoopbackTransport::recv(
    std::chrono::milliseconds timeout) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (ready < 0) throw_errno("poll");
    if (ready == 0) return std::nullopt;

    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) throw_errno("accept");

    std::vector<std::uint8_t> frame;
    std::uint8_t buf[4096];
    for (;;) {
        const ssize_t n = ::read(fd, buf, sizeof buf);
        if (n < 0) {
            ::close(fd);
            throw_errno("read");
        }
        if (n == 0) break;
        frame.insert(frame.end(), buf, buf + n);
        if (frame.size() > kMaxFrameBytes + 8) {
            ::close(fd);
            throw TransportError("incoming frame exceeds 1 MiB");
        }
    }
    ::close(fd);
    return frame;
}

}  // namespace fedqnn::fed
