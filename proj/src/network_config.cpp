#include "bicont/network_config.hpp"

#include <cmath>
#include <fstream>
#include <string>

namespace bicont {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

const json& require(const json& config, const char* key) {
    if (!config.contains(key)) {
        throw NetworkValidationError("config schema", std::string("key '") + key + "'",
                                     "missing");
    }
    return config.at(key);
}

std::vector<double> per_edge_numbers(const json& node, std::size_t n_edges, const char* key) {
    if (node.is_number()) {
        return std::vector<double>(n_edges, node.get<double>());
    }
    if (!node.is_array() || node.size() != n_edges) {
        throw NetworkValidationError("config schema", std::string("key '") + key + "'",
                                     "expected a number or one entry per edge");
    }
    return node.get<std::vector<double>>();
}

GridFunction edge_profile(const json& node, const Grid& grid, const std::string& where) {
    if (node.is_number()) {
        const double value = node.get<double>();
        return GridFunction::sample(grid, [value](double) { return value; });
    }
    if (node.is_array()) {
        auto values = node.get<std::vector<double>>();
        if (values.size() != grid.size()) {
            throw NetworkValidationError("n_cells + 1 samples per edge", where,
                                         std::to_string(values.size()) + " samples given");
        }
        return GridFunction(grid, std::move(values));
    }
    if (node.is_object()) {
        const auto profile = node.value("profile", std::string("constant"));
        const double amplitude = node.value("amplitude", 1.0);
        if (profile == "sin2") {
            return GridFunction::sample(grid, [amplitude](double x) {
                const double s = std::sin(kPi * x);
                return amplitude * s * s;
            });
        }
        if (profile == "sin") {
            return GridFunction::sample(
                grid, [amplitude](double x) { return amplitude * std::sin(kPi * x); });
        }
        if (profile == "constant") {
            return GridFunction::sample(grid, [amplitude](double) { return amplitude; });
        }
        throw NetworkValidationError("known initial profile", where, "profile '" + profile + "'");
    }
    throw NetworkValidationError("config schema", where, "expected number, array or object");
}

NetworkConfig parse(const json& config) {
    const auto& vertices = require(config, "vertices");
    const std::size_t n_vertices =
        vertices.is_array() ? vertices.size() : vertices.get<std::size_t>();

    std::vector<Edge> edges;
    for (const auto& e : require(config, "edges")) {
        edges.push_back({e.at("tail").get<std::size_t>(), e.at("head").get<std::size_t>()});
    }

    std::vector<WeightEntry> weights;
    if (config.contains("weights")) {
        for (const auto& w : config.at("weights")) {
            weights.push_back({w.at("into_edge").get<std::size_t>(),
                               w.at("from_edge").get<std::size_t>(), w.at("w").get<double>()});
        }
    } else {
        weights = uniform_weights(n_vertices, edges);
    }

    const auto velocities = per_edge_numbers(require(config, "velocities"), edges.size(),
                                             "velocities");

    std::size_t n_cells = 400;
    if (config.contains("grid")) {
        n_cells = config.at("grid").at("n_cells").get<std::size_t>();
    }
    const Grid grid(0.0, 1.0, n_cells);

    std::vector<GridFunction> absorption;
    const json zero = 0.0;
    const json& q = config.contains("absorption") ? config.at("absorption") : zero;
    if (q.is_number()) {
        absorption.assign(edges.size(), edge_profile(q, grid, "absorption"));
    } else if (q.is_array() && q.size() == edges.size()) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            absorption.push_back(edge_profile(q[j], grid, "absorption of edge " + std::to_string(j)));
        }
    } else {
        throw NetworkValidationError("config schema", "key 'absorption'",
                                     "expected a number or one entry per edge");
    }

    Network network(n_vertices, std::move(edges), std::move(weights), velocities,
                    std::move(absorption));
    build_adjacency(network);

    std::optional<EdgeState> initial;
    if (config.contains("initial")) {
        const auto& init = config.at("initial");
        if (!init.is_array() || init.size() != network.n_edges()) {
            throw NetworkValidationError("config schema", "key 'initial'",
                                         "expected one entry per edge");
        }
        EdgeState state{{}, 0.0};
        for (std::size_t j = 0; j < init.size(); ++j) {
            state.edges.push_back(
                edge_profile(init[j], grid, "initial data of edge " + std::to_string(j)));
        }
        initial = std::move(state);
    }
    return {std::move(network), std::move(initial)};
}

}  // namespace

NetworkConfig network_config_from_json(const nlohmann::json& config) {
    try {
        return parse(config);
    } catch (const nlohmann::json::exception& e) {
        throw NetworkValidationError("config schema", "network config", e.what());
    }
}

NetworkConfig load_network_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw NetworkValidationError("readable config file", path.string(), "cannot open");
    }
    nlohmann::json config;
    try {
        in >> config;
    } catch (const nlohmann::json::exception& e) {
        throw NetworkValidationError("config schema", path.string(), e.what());
    }
    return network_config_from_json(config);
}

}  // namespace bicont
