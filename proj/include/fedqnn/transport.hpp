#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace fedqnn::fed {

// Carries encoded frames from clients to the server. send() may be called
// from any thread; recv() is driven by the single server coordinator.
class Transport {
  public:
    virtual ~Transport() = default;

    virtual void send(std::vector<std::uint8_t> frame) = 0;

    // Next raw frame, or nullopt once `timeout` elapses with nothing queued.
    virtual std::optional<std::vector<std::uint8_t>> recv(
        std::chrono::milliseconds timeout) = 0;
};

// Thread-safe FIFO of frames within one process.
class InProcessTransport final : public Transport {
  public:
    void send(std::vector<std::uint8_t> frame) override;
    std::optional<std::vector<std::uint8_t>> recv(
        std::chrono::milliseconds timeout) override;

  private:
    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<std::vector<std::uint8_t>> queue_;
};

// Loopback TCP transport: one connection per frame. The constructor binds
// 127.0.0.1 on an ephemeral port; send() connects to that port, writes the
// frame, and closes; recv() accepts one connection and reads it to EOF.
class LoopbackTransport final : public Transport {
  public:
    LoopbackTransport();
    ~LoopbackTransport() override;

    LoopbackTransport(const LoopbackTransport&) = delete;
    LoopbackTransport& operator=(const LoopbackTransport&) = delete;

    std::uint16_t port() const { return port_; }

    void send(std::vector<std::uint8_t> frame) override;
    std::optional<std::vector<std::uint8_t>> recv(
        std::chrono::milliseconds timeout) override;

  private:
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
};

}  // namespace fedqnn::fed
