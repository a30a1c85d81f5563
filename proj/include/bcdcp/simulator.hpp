#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcdcp/model.hpp"
#include "bcdcp/rng.hpp"

namespace bcdcp::sim {

enum class EventKind { ExternalJoint, SelfLine1, SelfLine2 };

const char* kind_name(EventKind k);

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::ExternalJoint;
    // ExternalJoint carries (mark1, mark2); SelfLine1 carries (mark1, severity1);
    // SelfLine2 carries (mark2, severity2).
    std::optional<double> mark1, mark2;
    std::optional<double> severity1, severity2;
};

struct StateSnapshot {
    double lambda1 = 0.0, lambda2 = 0.0;
    std::int64_t n1 = 0, n2 = 0;
    double l1 = 0.0, l2 = 0.0;
};

struct GridPoint {
    double t = 0.0;
    StateSnapshot state;
};

enum class RecordMode { Full, TerminalOnly };

struct Path {
    std::vector<Event> events;
    std::vector<StateSnapshot> states;  // post-event snapshots, aligned with events
    std::vector<GridPoint> grid;        // uniform grid samples (Full mode, grid_dt > 0)
    StateSnapshot terminal;             // state at the horizon after decay
    double horizon = 0.0;
    std::uint64_t seed = 0;
    bool extinct = false;  // process ran out of events before the horizon
};

// Mutable simulation state for the event-by-event interface.
struct SimState {
    double t = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;  // post-jump intensities at time t
    std::int64_t n1 = 0, n2 = 0;
    double l1 = 0.0, l2 = 0.0;
};

// One step of the exact clock-race simulation: draws the external waiting
// time Exp(rho), each line's self-excited waiting time via the inverse-decay
// construction, takes the minimum, decays the intensities and applies the
// winning jump. Returns nullopt when no clock can fire (extinct process).
std::optional<Event> next_event(SimState& state, const BcdcpModel& model, Rng& rng);

// Full path to the horizon. Events strictly beyond T are discarded; the
// terminal snapshot reports the decayed state at T.
Path simulate_path(const BcdcpModel& model, double horizon, Rng rng,
                   RecordMode mode = RecordMode::Full, double grid_dt = 0.0,
                   std::uint64_t seed_label = 0);

struct McEstimate {
    std::string label;
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t paths = 0;
    double horizon = 0.0;
    double burn_in = 0.0;
};

struct McOptions {
    std::int64_t paths = 10000;
    double horizon = 1.0;
    // burn_in < 0 selects the default 20 / min(delta - mu1_self) relaxation
    // horizon; burn_in = 0 starts the window at the model's lambda0.
    double burn_in = -1.0;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency
};

// Path-parallel Monte Carlo with one counter-based substream per path index.
// After the burn-in the loss counters reset while the intensities carry over
// (approximate stationary start); estimates are accumulated in path order
// with compensated summation, so results do not depend on the thread count.
std::vector<McEstimate> monte_carlo(const BcdcpModel& model, const McOptions& opt);

double default_burn_in(const BcdcpModel& model);

// CSV export with header t,kind,lambda1,lambda2,N1,N2,L1,L2; one row per
// event plus kind="grid" rows, full shortest-round-trip precision, LF endings.
std::string path_to_csv(const Path& path);

}  // namespace bcdcp::sim
