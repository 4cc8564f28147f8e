#include "pphpc/params.hpp"

namespace pphpc {

const std::array<const char*, SimParams::kFieldCount>& SimParams::field_names() {
  static const std::array<const char*, kFieldCount> names = {
      "grid_x",
      "grid_y",
      "init_prey",
      "init_predators",
      "iterations",
      "prey_gain",
      "predator_gain",
      "prey_loss",
      "predator_loss",
      "prey_repro_threshold",
      "predator_repro_threshold",
      "prey_repro_prob",
      "predator_repro_prob",
      "cell_food_restart",
  };
  return names;
}

std::int64_t& SimParams::field(std::size_t i) {
  std::int64_t* fields[kFieldCount] = {
      &grid_x,        &grid_y,        &init_prey,
      &init_predators, &iterations,    &prey_gain,
      &predator_gain, &prey_loss,     &predator_loss,
      &prey_repro_threshold, &predator_repro_threshold,
      &prey_repro_prob, &predator_repro_prob, &cell_food_restart,
  };
  return *fields[i];
}

std::int64_t SimParams::field(std::size_t i) const {
  return const_cast<SimParams*>(this)->field(i);
}

void SimParams::validate() const {
  auto require = [](bool ok, const char* field, const char* msg) {
    if (!ok) throw ParamError(field, msg);
  };
  require(grid_x >= 1, "grid_x", "must be >= 1");
  require(grid_y >= 1, "grid_y", "must be >= 1");
  require(init_prey >= 0, "init_prey", "must be >= 0");
  require(init_predators >= 0, "init_predators", "must be >= 0");
  require(iterations >= 0, "iterations", "must be >= 0");
  require(prey_gain >= 0, "prey_gain", "must be >= 0");
  require(predator_gain >= 0, "predator_gain", "must be >= 0");
  require(prey_loss >= 1, "prey_loss", "must be >= 1");
  require(predator_loss >= 1, "predator_loss", "must be >= 1");
  require(prey_repro_threshold >= 1, "prey_repro_threshold", "must be >= 1");
  require(predator_repro_threshold >= 1, "predator_repro_threshold",
          "must be >= 1");
  require(prey_repro_prob >= 0 && prey_repro_prob <= 100, "prey_repro_prob",
          "must be in [0, 100]");
  require(predator_repro_prob >= 0 && predator_repro_prob <= 100,
          "predator_repro_prob", "must be in [0, 100]");
  require(cell_food_restart >= 1, "cell_food_restart", "must be >= 1");
}

}  // namespace pphpc
