// Trajectory integration with boundary-event detection.
//
// Trajectories of v through X are integrated with an adaptive
// Dormand-Prince 5(4) scheme; face crossings are bracketed and refined by
// bisection with sub-integration, and near-tangencies (local minima of F
// inside a guard band) are refined and classified by jet order.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "traverse/strata.hpp"

namespace traverse {

struct IntegrationStalled : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotTraversing : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GenericityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class EventKind { TransversalIn, TransversalOut, InteriorTangency };

struct BoundaryEvent {
    double t = 0;
    Point location;
    int face = 0;
    int multiplicity = 1;
    EventKind kind = EventKind::TransversalIn;
};

struct Trajectory {
    std::vector<BoundaryEvent> events;  // ordered along the flow
    bool singleton = false;
    std::vector<double> times;          // integration path (for transport)
    std::vector<Point> path;

    std::vector<int> type() const;      // omega = (m(a_1), ..., m(a_p))
    int reduced_multiplicity() const;   // sum of (m(a_i) - 1)
};

int reduced_multiplicity(const Trajectory& traj);

struct FlowOptions {
    double tol = 1e-7;           // jet classification tolerance
    double rk_tol = 1e-11;       // local error tolerance
    double time_cap_factor = 1e3;
    double arm_threshold = 1e-5; // face must clear this before events fire
};

// Integrate forward from a genuine entry point (odd-multiplicity jet with
// the domain ahead) or detect a singleton (even jet, negative leading
// coefficient). Throws std::invalid_argument for interior-tangency starts;
// use integrate_through for those.
Trajectory integrate_trajectory(const Scene& scene, const Point& entry,
                                const FlowOptions& opts = {});

// Full trajectory through an arbitrary boundary point: handles singletons,
// interior tangency points (integrates backward to the entry first) and
// exit points.
Trajectory integrate_through(const Scene& scene, const Point& a,
                             const FlowOptions& opts = {});

// All admissible multiplicity sequences with reduced multiplicity <= n:
// p = 1 with even m, or p > 1 with odd endpoints and even interior.
std::vector<std::vector<int>> admissible_types(int n);

std::string format_type(const std::vector<int>& type);

// Linearized flow along a trajectory: invertible maps from each event's
// tangent fiber to the exit fiber (variational equation).
struct TransportMaps {
    std::vector<Eigen::MatrixXd> to_exit;  // one per event, last = identity
};
TransportMaps linearized_transport(const Scene& scene, const Trajectory& traj);

struct TraversalityReport {
    int stacked_rank = 0;
    int expected_rank = 0;  // sum of (m_i - 1)
    double min_singular_value = 0;
    bool pass = false;
    std::string reason;
};

// Transports the tangency constraints of every event to the exit fiber and
// checks that the stacked normal covectors have full rank sum(m_i - 1) <= n.
// Throws GenericityViolation when sum(m_i - 1) > n.
TraversalityReport check_traversally_generic(const Scene& scene, const Trajectory& traj,
                                             double tol);

}  // namespace traverse
