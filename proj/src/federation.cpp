#include "fedqnn/federation.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <thread>

#include "fedqnn/errors.hpp"

namespace fedqnn::fed {

RoundMetrics evaluate_global(const qnn::CircuitSpec& spec,
                             const qnn::ParameterVector& params,
                             const EvalSet& eval) {
    if (eval.features.empty()) {
        throw ConfigError("evaluate_global: empty test set");
    }
    RoundMetrics metrics;
    int correct = 0;
    double loss_sum = 0.0;
    for (std::size_t i = 0; i < eval.features.size(); ++i) {
        const auto scores = qnn::forward(spec, params, eval.features[i]);
        if (qnn::decide_label(scores) == eval.labels[i]) ++correct;
        const auto report = training::mse_loss(scores, eval.targets[i]);
        loss_sum += report.mse;
    }
    metrics.accuracy =
        static_cast<double>(correct) / static_cast<double>(eval.features.size());
    metrics.loss = loss_sum / static_cast<double>(eval.features.size());
    return metrics;
}

void client_train_and_send(const ClientHandle& client, const GlobalModel& global,
                           const qnn::CircuitSpec& spec,
                           const ServerConfig& config, Transport& transport) {
    const auto trained = training::train_local(
        client.data, spec, global.params, config.adam, config.local_iterations);
    ClientUpdate update;
    update.round = global.round;
    update.client_id = client.id;
    update.params = trained.params;
    update.num_samples = static_cast<std::uint32_t>(client.data.size());
    transport.send(encode_frame(serialize_update(update)));
}

GlobalModel collect_and_aggregate(std::uint32_t round, std::size_t num_clients,
                                  Transport& transport,
                                  const ServerConfig& config) {
    std::vector<ClientUpdate> updates;
    updates.reserve(num_clients);
    std::set<std::uint32_t> seen;

    while (updates.size() < num_clients) {
        auto frame = transport.recv(config.update_timeout);
        if (!frame) break;  // timeout
        // Any framing or checksum failure poisons the whole round in strict
        // mode; no partially-aggregated model is ever produced. Tolerant mode
        // drops the bad frame and treats its sender as a straggler.
        ClientUpdate update;
        try {
            auto payload = decode_frame(*frame);
            update = deserialize_update(payload);
        } catch (const TransportError&) {
            if (config.tolerate_stragglers) continue;
            throw;
        }
        if (update.round != round) {
            throw ProtocolError("update for round " + std::to_string(update.round) +
                                " received during round " + std::to_string(round));
        }
        if (!seen.insert(update.client_id).second) {
            throw ProtocolError("duplicate update from client " +
                                std::to_string(update.client_id));
        }
        updates.push_back(std::move(update));
    }

    if (updates.size() < num_clients) {
        const std::size_t quorum = (num_clients + 1) / 2;
        if (!config.tolerate_stragglers || updates.size() < quorum) {
            throw ProtocolError("round " + std::to_string(round) + " incomplete: " +
                                std::to_string(updates.size()) + "/" +
                                std::to_string(num_clients) + " updates");
        }
    }

    // Fixed aggregation order keeps floating-point sums independent of
    // arrival order.
    std::sort(updates.begin(), updates.end(),
              [](const ClientUpdate& a, const ClientUpdate& b) {
                  return a.client_id < b.client_id;
              });
    GlobalModel model = fedavg_aggregate(updates, config.weighted_average);
    model.round = round + 1;
    return model;
}

std::pair<GlobalModel, RoundMetrics> run_round(const GlobalModel& global,
                                               std::span<const ClientHandle> clients,
                                               const qnn::CircuitSpec& spec,
                                               Transport& transport,
                                               const EvalSet& eval,
                                               const ServerConfig& config) {
    if (clients.empty()) {
        throw ConfigError("run_round: no clients registered");
    }

    if (config.run_clients_concurrently) {
        std::vector<std::thread> workers;
        workers.reserve(clients.size());
        std::vector<std::exception_ptr> errors(clients.size());
        for (std::size_t i = 0; i < clients.size(); ++i) {
            workers.emplace_back([&, i] {
                try {
                    client_train_and_send(clients[i], global, spec, config,
                                          transport);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    } else {
        for (const auto& client : clients) {
            client_train_and_send(client, global, spec, config, transport);
        }
    }

    GlobalModel next =
        collect_and_aggregate(global.round, clients.size(), transport, config);
    const RoundMetrics metrics = evaluate_global(spec, next.params, eval);
    return {std::move(next), metrics};
}

}  // namespace fedqnn::fed
