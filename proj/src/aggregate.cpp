#include "fedqnn/aggregate.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <set>
#include <string>

#include "fedqnn/errors.hpp"

namespace fedqnn::fed {

GlobalModel fedavg_aggregate(std::span<const ClientUpdate> updates,
                             bool weighted) {
    if (updates.empty()) {
        throw ProtocolError("fedavg: no updates to aggregate");
    }
    const std::uint32_t round = updates.front().round;
    const std::size_t p = updates.front().params.size();
    std::set<std::uint32_t> ids;
    for (const auto& u : updates) {
        if (u.round != round) {
            throw ProtocolError("fedavg: mixed rounds (" +
                                std::to_string(u.round) + " vs " +
                                std::to_string(round) + ")");
        }
        if (u.params.size() != p) {
            throw ProtocolError("fedavg: parameter length mismatch");
        }
        if (!ids.insert(u.client_id).second) {
            throw ProtocolError("fedavg: duplicate client_id " +
                                std::to_string(u.client_id));
        }
    }

    // Accumulate in client_id order so the floating-point sum — and thus the
    // model — is exactly independent of arrival order.
    std::vector<std::size_t> order(updates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return updates[a].client_id < updates[b].client_id;
    });

    GlobalModel model;
    model.round = round;
    model.params.assign(p, 0.0);
    double total_weight = 0.0;
    for (std::size_t i : order) {
        const auto& u = updates[i];
        const double w = weighted ? static_cast<double>(u.num_samples) : 1.0;
        total_weight += w;
        for (std::size_t j = 0; j < p; ++j) {
            model.params[j] += w * u.params[j];
        }
    }
    for (double& v : model.params) v /= total_weight;
    return model;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
    return static_cast<std::uint32_t>(in[at]) |
           (static_cast<std::uint32_t>(in[at + 1]) << 8) |
           (static_cast<std::uint32_t>(in[at + 2]) << 16) |
           (static_cast<std::uint32_t>(in[at + 3]) << 24);
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xff));
    }
}

double get_f64(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
    }
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

std::vector<std::uint8_t> serialize_update(const ClientUpdate& update) {
    std::vector<std::uint8_t> out;
    out.reserve(16 + 8 * update.params.size());
    put_u32(out, update.round);
    put_u32(out, update.client_id);
    put_u32(out, static_cast<std::uint32_t>(update.params.size()));
    for (double v : update.params) put_f64(out, v);
    put_u32(out, update.num_samples);
    return out;
}

ClientUpdate deserialize_update(std::span<const std::uint8_t> payload) {
    if (payload.size() < 16) {
        throw TransportError("update payload too short");
    }
    ClientUpdate update;
    update.round = get_u32(payload, 0);
    update.client_id = get_u32(payload, 4);
    const std::uint32_t p = get_u32(payload, 8);
    if (payload.size() != 16 + std::size_t{8} * p) {
        throw TransportError("update payload length inconsistent with P=" +
                             std::to_string(p));
    }
    update.params.reserve(p);
    for (std::uint32_t j = 0; j < p; ++j) {
        update.params.push_back(get_f64(payload, 12 + std::size_t{8} * j));
    }
    update.num_samples = get_u32(payload, 12 + std::size_t{8} * p);
    return update;
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> payload) {
    if (payload.size() > kMaxFrameBytes) {
        throw TransportError("frame payload exceeds 1 MiB");
    }
    std::vector<std::uint8_t> out;
    out.reserve(payload.size() + 8);
    const std::uint32_t len = static_cast<std::uint32_t>(payload.size());
    out.push_back(static_cast<std::uint8_t>((len >> 24) & 0xff));
    out.push_back(static_cast<std::uint8_t>((len >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((len >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(len & 0xff));
    out.insert(out.end(), payload.begin(), payload.end());
    const std::uint32_t crc = crc32_of(payload);
    out.push_back(static_cast<std::uint8_t>((crc >> 24) & 0xff));
    out.push_back(static_cast<std::uint8_t>((crc >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((crc >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(crc & 0xff));
    return out;
}

std::vector<std::uint8_t> decode_frame(std::span<const std::uint8_t> frame) {
    if (frame.size() < 8) {
        throw TransportError("frame truncated: " + std::to_string(frame.size()) +
                             " bytes");
    }
    const std::uint32_t len = (static_cast<std::uint32_t>(frame[0]) << 24) |
                              (static_cast<std::uint32_t>(frame[1]) << 16) |
                              (static_cast<std::uint32_t>(frame[2]) << 8) |
                              static_cast<std::uint32_t>(frame[3]);
    if (len > kMaxFrameBytes) {
        throw TransportError("frame length exceeds 1 MiB");
    }
    if (frame.size() != std::size_t{len} + 8) {
        throw TransportError("frame length field does not match frame size");
    }
    const auto payload = frame.subspan(4, len);
    const std::uint32_t stated = (static_cast<std::uint32_t>(frame[4 + len]) << 24) |
                                 (static_cast<std::uint32_t>(frame[5 + len]) << 16) |
                                 (static_cast<std::uint32_t>(frame[6 + len]) << 8) |
                                 static_cast<std::uint32_t>(frame[7 + len]);
    if (stated != crc32_of(payload)) {
        throw TransportError("frame CRC mismatch");
    }
    return {payload.begin(), payload.end()};
}

}  // namespace fedqnn::fed
