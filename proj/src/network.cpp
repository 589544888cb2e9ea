#include "bicont/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include "bicont/detail/exponential_weights.hpp"
#include "bicont/format.hpp"

namespace bicont {

NetworkValidationError::NetworkValidationError(std::string invariant, std::string location,
                                               const std::string& detail)
    : std::invalid_argument(invariant + " violated at " + location + ": " + detail),
      invariant_(std::move(invariant)),
      location_(std::move(location)) {}

namespace {

std::string edge_name(std::size_t j) { return "edge " + std::to_string(j); }

}  // namespace

Network::Network(std::size_t n_vertices, std::vector<Edge> edges, std::vector<WeightEntry> weights,
                 std::vector<double> velocities, std::vector<GridFunction> absorption)
    : n_vertices_(n_vertices),
      edges_(std::move(edges)),
      weights_(std::move(weights)),
      velocities_(std::move(velocities)),
      absorption_(std::move(absorption)) {
    if (edges_.empty()) {
        throw NetworkValidationError("non-empty edge set", "network", "no edges");
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t j = 0; j < edges_.size(); ++j) {
        const auto& e = edges_[j];
        if (e.tail >= n_vertices_ || e.head >= n_vertices_) {
            throw NetworkValidationError("vertex index in range", edge_name(j),
                                         "vertex index >= " + std::to_string(n_vertices_));
        }
        if (e.tail == e.head) {
            throw NetworkValidationError("simple graph (no loops)", edge_name(j), "loop");
        }
        if (!seen.insert({e.tail, e.head}).second) {
            throw NetworkValidationError("simple graph (no multiple edges)", edge_name(j),
                                         "duplicate directed edge");
        }
    }
    std::set<std::pair<std::size_t, std::size_t>> weighted;
    for (const auto& entry : weights_) {
        const std::string where =
            "weight (into_edge " + std::to_string(entry.into_edge) + ", from_edge " +
            std::to_string(entry.from_edge) + ")";
        if (entry.into_edge >= edges_.size() || entry.from_edge >= edges_.size()) {
            throw NetworkValidationError("edge index in range", where, "unknown edge");
        }
        if (!(entry.w >= 0.0 && entry.w <= 1.0)) {
            throw NetworkValidationError("0 <= w_ij <= 1", where, "w = " + format_real(entry.w));
        }
        if (edges_[entry.from_edge].head != edges_[entry.into_edge].tail) {
            throw NetworkValidationError("weights only between adjacent edges", where,
                                         "from_edge does not end where into_edge starts");
        }
        if (!weighted.insert({entry.into_edge, entry.from_edge}).second) {
            throw NetworkValidationError("one weight per edge pair", where, "duplicate weight");
        }
    }
    if (velocities_.size() != edges_.size()) {
        throw NetworkValidationError("one velocity per edge", "velocities",
                                     std::to_string(velocities_.size()) + " given for " +
                                         std::to_string(edges_.size()) + " edges");
    }
    for (std::size_t j = 0; j < velocities_.size(); ++j) {
        if (!(velocities_[j] > 0.0) || !std::isfinite(velocities_[j])) {
            throw NetworkValidationError("0 < c_min <= c_j <= c_max < inf", edge_name(j),
                                         "c = " + format_real(velocities_[j]));
        }
    }
    if (absorption_.size() != edges_.size()) {
        throw NetworkValidationError("one absorption profile per edge", "absorption",
                                     std::to_string(absorption_.size()) + " given for " +
                                         std::to_string(edges_.size()) + " edges");
    }
    for (std::size_t j = 0; j < absorption_.size(); ++j) {
        const Grid& g = absorption_[j].grid();
        if (g.a() != 0.0 || g.b() != 1.0 || !(g == absorption_.front().grid())) {
            throw NetworkValidationError("shared edge grid on [0,1]", edge_name(j),
                                         "absorption sampled on a different grid");
        }
    }
}

double Network::c_min() const noexcept {
    return *std::min_element(velocities_.begin(), velocities_.end());
}

double Network::c_max() const noexcept {
    return *std::max_element(velocities_.begin(), velocities_.end());
}

std::vector<WeightEntry> uniform_weights(std::size_t n_vertices, const std::vector<Edge>& edges) {
    std::vector<std::vector<std::size_t>> outgoing(n_vertices);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].tail < n_vertices) {
            outgoing[edges[i].tail].push_back(i);
        }
    }
    std::vector<WeightEntry> weights;
    for (std::size_t j = 0; j < edges.size(); ++j) {
        if (edges[j].head >= n_vertices) {
            continue;
        }
        const auto& out = outgoing[edges[j].head];
        for (std::size_t i : out) {
            weights.push_back({i, j, 1.0 / static_cast<double>(out.size())});
        }
    }
    return weights;
}

std::vector<GridFunction> zero_absorption(std::size_t n_edges, std::size_t n_cells) {
    return std::vector<GridFunction>(n_edges, GridFunction::zero(Grid(0.0, 1.0, n_cells)));
}

Eigen::MatrixXd build_adjacency(const Network& net) {
    const auto m = static_cast<Eigen::Index>(net.n_edges());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
    for (const auto& entry : net.weights()) {
        b(static_cast<Eigen::Index>(entry.into_edge), static_cast<Eigen::Index>(entry.from_edge)) =
            entry.w;
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        const double sum = b.col(j).sum();
        if (std::abs(sum - 1.0) > 1e-12) {
            throw NetworkValidationError("column sum = 1 (no absorption at vertices)",
                                         "column of " + edge_name(static_cast<std::size_t>(j)),
                                         "column sum " + format_real(sum) + " != 1");
        }
    }
    return b;
}

Eigen::MatrixXd weighted_bc(const Network& net, const Eigen::MatrixXd& adjacency) {
    const auto& c = net.velocities();
    Eigen::MatrixXd out = adjacency;
    for (Eigen::Index j = 0; j < out.rows(); ++j) {
        for (Eigen::Index k = 0; k < out.cols(); ++k) {
            out(j, k) = adjacency(j, k) * c[static_cast<std::size_t>(k)] /
                        c[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

EdgeState EdgeState::operator+(const EdgeState& other) const {
    if (edges.size() != other.edges.size()) {
        throw std::invalid_argument("edge states have different edge counts");
    }
    EdgeState out{{}, time};
    out.edges.reserve(edges.size());
    for (std::size_t j = 0; j < edges.size(); ++j) {
        out.edges.push_back(edges[j] + other.edges[j]);
    }
    return out;
}

EdgeState operator*(double s, const EdgeState& state) {
    EdgeState out{{}, state.time};
    out.edges.reserve(state.edges.size());
    for (const auto& f : state.edges) {
        out.edges.push_back(s * f);
    }
    return out;
}

EdgeState zero_state(const Network& net) {
    return {std::vector<GridFunction>(net.n_edges(), GridFunction::zero(net.grid())), 0.0};
}

namespace {

void require_matching_state(const Network& net, const EdgeState& state) {
    if (state.edges.size() != net.n_edges()) {
        throw std::invalid_argument("edge state has " + std::to_string(state.edges.size()) +
                                    " edges, network has " + std::to_string(net.n_edges()));
    }
    for (const auto& f : state.edges) {
        if (!(f.grid() == net.grid())) {
            throw std::invalid_argument("edge state does not live on the network grid");
        }
    }
}

// Incoming couplings of every edge: (k, Bc_jk) with Bc_jk != 0.
std::vector<std::vector<std::pair<std::size_t, double>>> couplings(const Eigen::MatrixXd& bc) {
    std::vector<std::vector<std::pair<std::size_t, double>>> out(
        static_cast<std::size_t>(bc.rows()));
    for (Eigen::Index j = 0; j < bc.rows(); ++j) {
        for (Eigen::Index k = 0; k < bc.cols(); ++k) {
            if (bc(j, k) != 0.0) {
                out[static_cast<std::size_t>(j)].emplace_back(static_cast<std::size_t>(k),
                                                              bc(j, k));
            }
        }
    }
    return out;
}

// ∫_0^x q for the piecewise-linear interpolant of q.
class AbsorptionIntegral {
public:
    explicit AbsorptionIntegral(const GridFunction& q) : q_(q), cumulative_(q.size(), 0.0) {
        const auto v = q.values();
        const double h = q.grid().h();
        for (std::size_t i = 1; i < v.size(); ++i) {
            cumulative_[i] = cumulative_[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
            zero_ = zero_ && v[i] == 0.0;
        }
        zero_ = zero_ && v[0] == 0.0;
    }

    bool zero() const noexcept { return zero_; }

    double up_to(double x) const noexcept {
        const double h = q_.grid().h();
        const double pos = std::clamp(x / h, 0.0, static_cast<double>(q_.grid().n_cells()));
        auto k = static_cast<std::size_t>(pos);
        if (k >= q_.grid().n_cells()) {
            return cumulative_.back();
        }
        const double theta = pos - static_cast<double>(k);
        return cumulative_[k] + h * (theta * q_[k] + 0.5 * theta * theta * (q_[k + 1] - q_[k]));
    }

    double between(double x0, double x1) const noexcept { return up_to(x1) - up_to(x0); }

private:
    const GridFunction& q_;
    std::vector<double> cumulative_;
    bool zero_ = true;
};

}  // namespace

EdgeState network_apply(const Network& net, const EdgeState& state) {
    require_matching_state(net, state);
    EdgeState out{{}, state.time};
    out.edges.reserve(net.n_edges());
    for (std::size_t j = 0; j < net.n_edges(); ++j) {
        const auto& f = state.edges[j];
        const auto df = differentiate(f);
        std::vector<double> v(f.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = net.velocities()[j] * df[i] + net.absorption()[j][i] * f[i];
        }
        out.edges.emplace_back(f.grid(), std::move(v));
    }
    return out;
}

EdgeState step_characteristics(const Network& net, const EdgeState& state, double t) {
    require_matching_state(net, state);
    if (!(t >= 0.0)) {
        throw std::invalid_argument("characteristics step needs t >= 0, got " + format_real(t));
    }
    if (t == 0.0) {
        return state;
    }
    const auto bc = weighted_bc(net, build_adjacency(net));
    const auto incoming = couplings(bc);
    std::vector<AbsorptionIntegral> absorbed;
    absorbed.reserve(net.n_edges());
    for (const auto& q : net.absorption()) {
        absorbed.emplace_back(q);
    }
    const auto& c = net.velocities();
    const auto max_crossings = static_cast<std::size_t>(std::ceil(t * net.c_max())) + 2;

    // Value of u_j at position x, `remaining` time units after state.time.
    std::function<double(std::size_t, double, double, std::size_t)> trace =
        [&](std::size_t j, double x, double remaining, std::size_t crossings) -> double {
        const double reach = x + c[j] * remaining;
        if (reach <= 1.0 + 1e-12) {
            const double source = std::min(reach, 1.0);
            const double value = state.edges[j].interpolate(source);
            if (absorbed[j].zero()) {
                return value;
            }
            return value * std::exp(absorbed[j].between(x, source) / c[j]);
        }
        if (crossings + 1 > max_crossings) {
            throw std::runtime_error("characteristic trace exceeded " +
                                     std::to_string(max_crossings) + " vertex crossings");
        }
        const double at_tail = remaining - (1.0 - x) / c[j];
        double inflow = 0.0;
        for (const auto& [k, coupling] : incoming[j]) {
            inflow += coupling * trace(k, 0.0, at_tail, crossings + 1);
        }
        if (absorbed[j].zero()) {
            return inflow;
        }
        return inflow * std::exp(absorbed[j].between(x, 1.0) / c[j]);
    };

    const Grid& grid = net.grid();
    EdgeState out{{}, state.time + t};
    out.edges.reserve(net.n_edges());
    for (std::size_t j = 0; j < net.n_edges(); ++j) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = trace(j, grid.node(i), t, 0);
        }
        out.edges.emplace_back(grid, std::move(v));
    }
    return out;
}

EdgeState step_upwind(const Network& net, const EdgeState& state, double dt) {
    require_matching_state(net, state);
    const double h = net.grid().h();
    if (!(dt > 0.0) || net.c_max() * dt / h > 1.0 + 1e-12) {
        throw std::invalid_argument("upwind step violates CFL c_max dt / h <= 1 with dt = " +
                                    format_real(dt) + " (limit " + format_real(h / net.c_max()) +
                                    ")");
    }
    const auto bc = weighted_bc(net, build_adjacency(net));
    const auto incoming = couplings(bc);
    const std::size_t n = net.grid().n_cells();

    std::vector<std::vector<double>> next(net.n_edges());
    for (std::size_t j = 0; j < net.n_edges(); ++j) {
        const auto u = state.edges[j].values();
        const auto q = net.absorption()[j].values();
        const double nu = net.velocities()[j] * dt / h;
        auto& v = next[j];
        v.resize(u.size());
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = u[i] + nu * (u[i + 1] - u[i]) + dt * q[i] * u[i];
        }
    }
    for (std::size_t j = 0; j < net.n_edges(); ++j) {
        double inflow = 0.0;
        for (const auto& [k, coupling] : incoming[j]) {
            inflow += coupling * next[k][0];
        }
        next[j][n] = inflow;
    }
    EdgeState out{{}, state.time + dt};
    out.edges.reserve(net.n_edges());
    for (auto& v : next) {
        out.edges.emplace_back(net.grid(), std::move(v));
    }
    return out;
}

NetworkResolvent network_resolvent(const Network& net, double lambda, const EdgeState& g,
                                   double max_condition) {
    require_matching_state(net, g);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("network resolvent requires lambda > 0, got " +
                                    format_real(lambda));
    }
    const auto bc = weighted_bc(net, build_adjacency(net));
    const auto m = static_cast<Eigen::Index>(net.n_edges());
    const Grid& grid = net.grid();
    const std::size_t n = grid.n_cells();
    const double h = grid.h();

    // Backward sweep from x = 1: f_j(x_i) = decay_j(i) f_j(1) + particular_j(i).
    std::vector<std::vector<double>> decay(net.n_edges(), std::vector<double>(n + 1));
    std::vector<std::vector<double>> particular(net.n_edges(), std::vector<double>(n + 1));
    Eigen::VectorXd mu(m);
    Eigen::VectorXd w(m);
    for (std::size_t j = 0; j < net.n_edges(); ++j) {
        const double c = net.velocities()[j];
        const auto q = net.absorption()[j].values();
        const auto gj = g.edges[j].values();
        decay[j][n] = 1.0;
        particular[j][n] = 0.0;
        double phi = 0.0;
        for (std::size_t i = n; i-- > 0;) {
            const double z = h * (lambda - 0.5 * (q[i] + q[i + 1])) / c;
            const double e = std::exp(-z);
            phi += z;
            decay[j][i] = e * decay[j][i + 1];
            particular[j][i] = e * particular[j][i + 1] +
                               (h / c) * (detail::near_weight(z) * gj[i] +
                                          detail::far_weight(z) * gj[i + 1]);
        }
        const auto idx = static_cast<Eigen::Index>(j);
        mu(idx) = std::exp(phi);
        w(idx) = mu(idx) * particular[j][0];
    }

    Eigen::MatrixXd coupling = mu.asDiagonal();
    coupling -= bc;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(coupling);
    const auto& sv = svd.singularValues();
    const double condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                     : std::numeric_limits<double>::infinity();
    if (!(condition <= max_condition)) {
        throw std::runtime_error("network resolvent coupling matrix has condition number " +
                                 format_real(condition) + "; increase lambda");
    }
    const Eigen::VectorXd head_values = coupling.partialPivLu().solve(w);
    const Eigen::VectorXd tail_values = bc * head_values;

    NetworkResolvent result;
    result.condition_number = condition;
    result.neumann_warning = mu.minCoeff() <= bc.cwiseAbs().colwise().sum().maxCoeff();
    result.value.time = g.time;
    result.value.edges.reserve(net.n_edges());
    for (std::size_t j = 0; j < net.n_edges(); ++j) {
        const double f1 = tail_values(static_cast<Eigen::Index>(j));
        std::vector<double> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            v[i] = decay[j][i] * f1 + particular[j][i];
        }
        result.value.edges.emplace_back(grid, std::move(v));
    }

    Eigen::VectorXd f0(m);
    Eigen::VectorXd f1(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        f0(j) = result.value.edges[static_cast<std::size_t>(j)][0];
        f1(j) = result.value.edges[static_cast<std::size_t>(j)][n];
    }
    result.boundary_residual = (f1 - bc * f0).cwiseAbs().maxCoeff();
    const auto af = network_apply(net, result.value);
    result.equation_residual = supnorm_l1(lambda * result.value + (-1.0) * af + (-1.0) * g);
    return result;
}

double total_mass(const EdgeState& state) {
    double mass = 0.0;
    for (const auto& f : state.edges) {
        mass += integrate(f);
    }
    return mass;
}

double supnorm_l1(const EdgeState& state) {
    if (state.edges.empty()) {
        return 0.0;
    }
    const std::size_t nodes = state.edges.front().size();
    double best = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        double sum = 0.0;
        for (const auto& f : state.edges) {
            sum += std::abs(f[i]);
        }
        best = std::max(best, sum);
    }
    return best;
}

Semigroup<EdgeState> network_semigroup(const Network& net) {
    // With a common velocity Bc = B is column-stochastic and the sup-l1 norm
    // cannot grow; with mixed velocities Bc rescales densities by c_k / c_j.
    bool contraction = net.c_min() == net.c_max();
    for (const auto& q : net.absorption()) {
        for (double v : q.values()) {
            contraction = contraction && v <= 0.0;
        }
    }
    return {"network_characteristics",
            [net](double t, const EdgeState& f) { return step_characteristics(net, f, t); },
            contraction};
}

}  // namespace bicont
