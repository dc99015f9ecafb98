#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "fedqnn/aggregate.hpp"
#include "fedqnn/training.hpp"
#include "fedqnn/transport.hpp"

namespace fedqnn::fed {

// One registered client: its id and private data shard. The shard never
// leaves the client; only serialized ClientUpdate frames cross the transport.
struct ClientHandle {
    std::uint32_t id = 0;
    training::LocalDataset data;
};

// Held-out test set the coordinator evaluates the global model on.
struct EvalSet {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    std::vector<std::vector<double>> targets;  // regression targets for loss
};

struct RoundMetrics {
    double accuracy = 0.0;
    double loss = 0.0;
};

struct ServerConfig {
    bool weighted_average = false;
    bool tolerate_stragglers = false;
    std::chrono::milliseconds update_timeout{5000};
    int local_iterations = 1;
    training::AdamConfig adam;
    bool run_clients_concurrently = true;
};

// Evaluate a parameter vector on the test set: argmax/threshold accuracy and
// MSE loss against the regression targets.
RoundMetrics evaluate_global(const qnn::CircuitSpec& spec,
                             const qnn::ParameterVector& params,
                             const EvalSet& eval);

// One federated round: broadcast the current global parameters, train every
// client locally, collect the updates over `transport`, aggregate, evaluate.
// Strict mode requires all K updates; tolerate_stragglers accepts >= ceil(K/2)
// after the timeout. Aggregation is a barrier: nothing is averaged until the
// collected updates are validated.
std::pair<GlobalModel, RoundMetrics> run_round(const GlobalModel& global,
                                               std::span<const ClientHandle> clients,
                                               const qnn::CircuitSpec& spec,
                                               Transport& transport,
                                               const EvalSet& eval,
                                               const ServerConfig& config);

// Client half of a round, usable standalone (e.g. against a remote server):
// train on the shard and push the resulting update frame into the transport.
void client_train_and_send(const ClientHandle& client, const GlobalModel& global,
                           const qnn::CircuitSpec& spec,
                           const ServerConfig& config, Transport& transport);

// Server half: collect, validate and aggregate updates for `round`, expecting
// `num_clients` of them.
GlobalModel collect_and_aggregate(std::uint32_t round, std::size_t num_clients,
                                  Transport& transport,
                                  const ServerConfig& config);

}  // namespace fedqnn::fed
