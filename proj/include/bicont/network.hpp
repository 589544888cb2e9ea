#pragma once

// Transport flows on finite weighted directed metric graphs.
//
// Every edge is the unit interval, parametrized against its direction:
// tail at x = 1, head at x = 0. Material on edge j moves towards x = 0 with
// velocity c_j and obeys
//
//   d/dt u_j = c_j d/dx u_j + q_j u_j,
//   u_j(1, t) = sum_k Bc_jk u_k(0, t),       Bc = C^{-1} B C,
//
// where B is the column-stochastic weighted adjacency matrix of the line
// graph: B_ij = w_ij whenever edge j ends at the vertex where edge i starts.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bicont/grid.hpp"
#include "bicont/semigroups.hpp"

namespace bicont {

/// Names the violated invariant and where it was violated.
class NetworkValidationError : public std::invalid_argument {
public:
    NetworkValidationError(std::string invariant, std::string location, const std::string& detail);

    const std::string& invariant() const noexcept { return invariant_; }
    const std::string& location() const noexcept { return location_; }

private:
    std::string invariant_;
    std::string location_;
};

struct Edge {
    std::size_t tail = 0;
    std::size_t head = 0;
};

/// w_ij: share of the material arriving through edge `from_edge` (j) that
/// leaves through edge `into_edge` (i).
struct WeightEntry {
    std::size_t into_edge = 0;
    std::size_t from_edge = 0;
    double w = 0.0;
};

class Network {
public:
    /// Checks simplicity, index ranges, 0 <= w <= 1, adjacency of every
    /// weighted pair, positive finite velocities and the absorption grids.
    /// Column stochasticity is checked by build_adjacency.
    Network(std::size_t n_vertices, std::vector<Edge> edges, std::vector<WeightEntry> weights,
            std::vector<double> velocities, std::vector<GridFunction> absorption);

    std::size_t n_vertices() const noexcept { return n_vertices_; }
    std::size_t n_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<WeightEntry>& weights() const noexcept { return weights_; }
    const std::vector<double>& velocities() const noexcept { return velocities_; }
    const std::vector<GridFunction>& absorption() const noexcept { return absorption_; }
    const Grid& grid() const noexcept { return absorption_.front().grid(); }

    double c_min() const noexcept;
    double c_max() const noexcept;

private:
    std::size_t n_vertices_;
    std::vector<Edge> edges_;
    std::vector<WeightEntry> weights_;
    std::vector<double> velocities_;
    std::vector<GridFunction> absorption_;
};

/// Splits the outflow of every vertex evenly over its outgoing edges.
std::vector<WeightEntry> uniform_weights(std::size_t n_vertices, const std::vector<Edge>& edges);

/// q ≡ 0 on every edge.
std::vector<GridFunction> zero_absorption(std::size_t n_edges, std::size_t n_cells);

/// |E| x |E| matrix B. Throws NetworkValidationError naming the first
/// column whose sum differs from 1 by more than 1e-12.
Eigen::MatrixXd build_adjacency(const Network& net);

/// C^{-1} B C.
Eigen::MatrixXd weighted_bc(const Network& net, const Eigen::MatrixXd& adjacency);

/// u_j(., t) on the shared edge grid.
struct EdgeState {
    std::vector<GridFunction> edges;
    double time = 0.0;

    EdgeState operator+(const EdgeState& other) const;
    friend EdgeState operator*(double s, const EdgeState& state);
};

EdgeState zero_state(const Network& net);

/// A f = (c_j f_j' + q_j f_j)_j.
EdgeState network_apply(const Network& net, const EdgeState& state);

/// Exact method-of-characteristics evolution by t (values between nodes by
/// linear interpolation). Throws std::runtime_error if a trace needs more
/// than ceil(t c_max) + 2 vertex crossings.
EdgeState step_characteristics(const Network& net, const EdgeState& state, double t);

/// One explicit first-order upwind step. Throws std::invalid_argument when
/// c_max dt / h > 1.
EdgeState step_upwind(const Network& net, const EdgeState& state, double dt);

struct NetworkResolvent {
    EdgeState value;
    /// 2-norm condition number of diag(mu) - Bc.
    double condition_number = 0.0;
    /// min_j mu_j <= ||Bc||_col: the Neumann series argument for the
    /// coupling solve does not apply.
    bool neumann_warning = false;
    /// max_j |f_j(1) - (Bc f(0))_j|.
    double boundary_residual = 0.0;
    /// sup-l1 norm of lambda f - A f - g (discretization error).
    double equation_residual = 0.0;
};

/// Solves (lambda - A) f = g with f(1) = Bc f(0). Throws std::runtime_error if
/// the coupling matrix condition number exceeds max_condition.
NetworkResolvent network_resolvent(const Network& net, double lambda, const EdgeState& g,
                                   double max_condition = 1e12);

/// sum_j ∫_0^1 u_j.
double total_mass(const EdgeState& state);

/// max over nodes x of sum_j |u_j(x)|.
double supnorm_l1(const EdgeState& state);

inline double state_norm(const EdgeState& state) { return supnorm_l1(state); }

/// Characteristics semigroup. Flagged as a contraction for the sup-l1 norm
/// only when all velocities agree and q <= 0.
Semigroup<EdgeState> network_semigroup(const Network& net);

}  // namespace bicont
