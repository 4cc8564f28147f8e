#include "pphpc/sim.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace pphpc {

World::World(const SimParams& params, std::uint64_t seed)
    : params_(params), rng_(seed) {
  params_.validate();

  const auto gx = static_cast<std::uint64_t>(params_.grid_x);
  const auto gy = static_cast<std::uint64_t>(params_.grid_y);

  agents_.reserve(static_cast<std::size_t>(params_.init_prey + params_.init_predators));
  auto place = [&](AgentKind kind, std::int64_t count, std::int64_t gain) {
    const std::uint64_t energy_span =
        gain > 0 ? static_cast<std::uint64_t>(2 * gain) : 1;
    for (std::int64_t i = 0; i < count; ++i) {
      Agent a;
      a.kind = kind;
      a.x = static_cast<std::int32_t>(rng_.below(gx));
      a.y = static_cast<std::int32_t>(rng_.below(gy));
      a.energy = 1 + static_cast<std::int64_t>(rng_.below(energy_span));
      agents_.push_back(a);
    }
  };
  place(AgentKind::Prey, params_.init_prey, params_.prey_gain);
  place(AgentKind::Predator, params_.init_predators, params_.predator_gain);

  countdown_.resize(gx * gy);
  const auto c_span = static_cast<std::uint64_t>(params_.cell_food_restart) + 1;
  for (auto& c : countdown_) c = static_cast<std::int32_t>(rng_.below(c_span));
}

void World::remove_dead() {
  std::erase_if(agents_, [](const Agent& a) { return a.energy <= 0; });
}

void World::move_phase() {
  events_ = StepEvents{};
  const auto gx = static_cast<std::int32_t>(params_.grid_x);
  const auto gy = static_cast<std::int32_t>(params_.grid_y);
  for (Agent& a : agents_) {
    switch (rng_.below(4)) {
      case 0: a.x = (a.x + 1) % gx; break;
      case 1: a.x = (a.x + gx - 1) % gx; break;
      case 2: a.y = (a.y + 1) % gy; break;
      default: a.y = (a.y + gy - 1) % gy; break;
    }
    a.energy -= a.kind == AgentKind::Prey ? params_.prey_loss : params_.predator_loss;
    if (a.energy <= 0) {
      if (a.kind == AgentKind::Prey)
        ++events_.starved_prey;
      else
        ++events_.starved_predators;
    }
  }
  remove_dead();
}

void World::grow_food_phase() {
  for (auto& c : countdown_)
    if (c > 0) --c;
}

void World::act_phase() {
  const std::size_t n0 = agents_.size();
  agents_.reserve(2 * n0);

  // Prey present on each cell, kept exact as prey die or are born so that
  // victim choice is uniform over the living.
  std::vector<std::vector<std::uint32_t>> prey_at(countdown_.size());
  for (std::size_t i = 0; i < n0; ++i)
    if (agents_[i].kind == AgentKind::Prey)
      prey_at[cell_index(agents_[i].x, agents_[i].y)].push_back(
          static_cast<std::uint32_t>(i));

  std::vector<std::uint32_t> order(n0);
  std::iota(order.begin(), order.end(), 0u);
  rng_.shuffle(order);

  for (std::uint32_t idx : order) {
    if (agents_[idx].energy <= 0) continue;  // eaten earlier this phase
    const std::size_t cell = cell_index(agents_[idx].x, agents_[idx].y);

    if (agents_[idx].kind == AgentKind::Prey) {
      if (countdown_[cell] == 0) {
        agents_[idx].energy += params_.prey_gain;
        countdown_[cell] = static_cast<std::int32_t>(params_.cell_food_restart);
      }
    } else {
      auto& victims = prey_at[cell];
      if (!victims.empty()) {
        const std::size_t pick = static_cast<std::size_t>(rng_.below(victims.size()));
        agents_[victims[pick]].energy = 0;
        victims.erase(victims.begin() + static_cast<std::ptrdiff_t>(pick));
        agents_[idx].energy += params_.predator_gain;
        ++events_.predation_deaths;
      }
    }

    const bool prey = agents_[idx].kind == AgentKind::Prey;
    const std::int64_t threshold =
        prey ? params_.prey_repro_threshold : params_.predator_repro_threshold;
    if (agents_[idx].energy > threshold) {
      const std::int64_t prob = prey ? params_.prey_repro_prob : params_.predator_repro_prob;
      if (static_cast<std::int64_t>(rng_.below(100)) < prob) {
        Agent child;
        child.kind = agents_[idx].kind;
        child.energy = agents_[idx].energy / 2;
        child.x = agents_[idx].x;
        child.y = agents_[idx].y;
        agents_[idx].energy -= child.energy;
        agents_.push_back(child);
        if (prey) {
          prey_at[cell].push_back(static_cast<std::uint32_t>(agents_.size() - 1));
          ++events_.births_prey;
        } else {
          ++events_.births_predators;
        }
      }
    }
  }
  remove_dead();
}

void World::step() {
  move_phase();
  grow_food_phase();
  act_phase();
  ++iteration_;
}

OutputRow World::collect_outputs() const {
  OutputRow row;
  std::int64_t prey_energy = 0;
  std::int64_t predator_energy = 0;
  for (const Agent& a : agents_) {
    if (a.kind == AgentKind::Prey) {
      ++row.total_prey;
      prey_energy += a.energy;
    } else {
      ++row.total_predators;
      predator_energy += a.energy;
    }
  }
  std::int64_t c_sum = 0;
  for (auto c : countdown_) {
    if (c == 0) ++row.total_food;
    c_sum += c;
  }
  if (row.total_prey > 0)
    row.mean_energy_prey =
        static_cast<double>(prey_energy) / static_cast<double>(row.total_prey);
  if (row.total_predators > 0)
    row.mean_energy_predators = static_cast<double>(predator_energy) /
                                static_cast<double>(row.total_predators);
  row.mean_c = static_cast<double>(c_sum) / static_cast<double>(countdown_.size());
  return row;
}

SimOutput run_simulation(const SimParams& params, std::uint64_t seed) {
  World world(params, seed);
  SimOutput out;
  out.rows.reserve(static_cast<std::size_t>(params.iterations) + 1);
  out.rows.push_back(world.collect_outputs());
  for (std::int64_t i = 0; i < params.iterations; ++i) {
    world.step();
    out.rows.push_back(world.collect_outputs());
  }
  return out;
}

}  // namespace pphpc
