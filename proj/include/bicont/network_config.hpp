#pragma once

// JSON network description:
//
//   {
//     "vertices": 2,                      // count, or an array of names
//     "edges": [{"tail": 0, "head": 1}, {"tail": 1, "head": 0}],
//     "weights": [{"into_edge": 1, "from_edge": 0, "w": 1.0}, ...],
//     "velocities": [1.0, 1.0],
//     "absorption": 0.0,                  // number, per-edge numbers, or
//                                         // per-edge arrays of n_cells+1 samples
//     "grid": {"n_cells": 400},
//     "initial": [{"profile": "sin2"}, 0.0]   // optional
//   }
//
// Vertex and edge indices are 0-based. Without "weights" the outflow of each
// vertex is split evenly over its outgoing edges. Initial data per edge is a
// constant, an array of samples, or {"profile": "sin2" | "sin" | "constant",
// "amplitude": a}.

#include <filesystem>
#include <optional>

#include "json.hpp"

#include "bicont/network.hpp"

namespace bicont {

struct NetworkConfig {
    Network network;
    std::optional<EdgeState> initial;
};

/// Throws NetworkValidationError naming the violated invariant, including
/// column stochasticity.
NetworkConfig network_config_from_json(const nlohmann::json& config);

NetworkConfig load_network_config(const std::filesystem::path& path);

}  // namespace bicont
