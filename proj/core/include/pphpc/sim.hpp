#ifndef PPHPC_SIM_HPP
#define PPHPC_SIM_HPP

#include <cstdint>
#include <vector>

#include "pphpc/params.hpp"
#include "pphpc/rng.hpp"

namespace pphpc {

enum class AgentKind : std::uint8_t { Prey, Predator };

struct Agent {
  AgentKind kind;
  std::int64_t energy;  // >= 1 for any agent alive at a phase boundary
  std::int32_t x;
  std::int32_t y;
};

/// One line of the six canonical output series.
struct OutputRow {
  std::int64_t total_prey = 0;
  std::int64_t total_predators = 0;
  std::int64_t total_food = 0;  // cells with countdown == 0
  double mean_energy_prey = 0.0;  // 0 when no prey
  double mean_energy_predators = 0.0;  // 0 when no predators
  double mean_c = 0.0;

  bool operator==(const OutputRow&) const = default;
};

/// rows[0] is the post-initialization state; rows.size() == iterations + 1.
struct SimOutput {
  std::vector<OutputRow> rows;

  bool operator==(const SimOutput&) const = default;
};

/// Per-iteration event counts, for accounting checks.
struct StepEvents {
  std::int64_t births_prey = 0;
  std::int64_t births_predators = 0;
  std::int64_t starved_prey = 0;
  std::int64_t starved_predators = 0;
  std::int64_t predation_deaths = 0;
};

/// Simulation state: toroidal grid of food countdowns plus the live agent
/// population. Confined to one thread; distinct replications are
/// independent.
///
/// RNG consumption order is fixed: initialization draws (x, y, energy) per
/// prey, then per predator, then one countdown per cell in row-major order.
/// Each iteration draws one direction per agent (move phase), the action
/// shuffle, then per visited agent the feeding victim choice (predators on
/// occupied cells) and the reproduction percent draw (only when energy
/// exceeds the threshold). Agent storage preserves insertion order between
/// shuffles, so trajectories depend only on (params, seed).
class World {
 public:
  /// Places init_prey prey and init_predators predators uniformly at random
  /// (with replacement across agents); initial energy is uniform in
  /// {1, ..., 2*gain} for the agent's kind ({1} when gain == 0); each cell
  /// countdown is uniform in {0, ..., cell_food_restart}.
  World(const SimParams& params, std::uint64_t seed);

  /// Every agent moves to a uniformly chosen orthogonal neighbor (torus
  /// wrap) and pays its kind's energy loss; agents at energy <= 0 are
  /// removed at the end of the phase.
  void move_phase();

  /// Cells with countdown > 0 count down by one.
  void grow_food_phase();

  /// Agents alive at phase start act in shuffled order: feed, then
  /// reproduce. State updates are immediate, so a predator can eat prey
  /// born earlier in the same phase; newborns themselves act only from the
  /// next iteration.
  void act_phase();

  /// One full iteration: move, grow food, act.
  void step();

  OutputRow collect_outputs() const;

  const SimParams& params() const { return params_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const std::vector<std::int32_t>& countdowns() const { return countdown_; }
  std::int64_t iteration() const { return iteration_; }

  /// Events of the most recent step (move + act phases).
  const StepEvents& last_events() const { return events_; }

 private:
  std::size_t cell_index(std::int32_t x, std::int32_t y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(params_.grid_x) + x;
  }
  void remove_dead();

  SimParams params_;
  std::vector<std::int32_t> countdown_;  // row-major grid_y x grid_x
  std::vector<Agent> agents_;
  Rng rng_;
  std::int64_t iteration_ = 0;
  StepEvents events_;
};

/// Runs the full schedule: an initial output row, then `iterations`
/// repetitions of (move, grow food, act, collect). Deterministic in
/// (params, seed).
SimOutput run_simulation(const SimParams& params, std::uint64_t seed);

}  // namespace pphpc

#endif
