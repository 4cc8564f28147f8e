#ifndef PPHPC_PARAMS_HPP
#define PPHPC_PARAMS_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pphpc {

/// A model parameter failed validation. what() names the offending field.
class ParamError : public std::invalid_argument {
 public:
  ParamError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// The 14 integer model parameters, in canonical order. This order is also
/// the positional-argument order of the candidate contract and the key order
/// of parameter files.
struct SimParams {
  std::int64_t grid_x = 100;
  std::int64_t grid_y = 100;
  std::int64_t init_prey = 400;
  std::int64_t init_predators = 200;
  std::int64_t iterations = 4000;
  std::int64_t prey_gain = 4;
  std::int64_t predator_gain = 20;
  std::int64_t prey_loss = 1;
  std::int64_t predator_loss = 1;
  std::int64_t prey_repro_threshold = 2;
  std::int64_t predator_repro_threshold = 2;
  std::int64_t prey_repro_prob = 4;
  std::int64_t predator_repro_prob = 5;
  std::int64_t cell_food_restart = 10;

  static constexpr std::size_t kFieldCount = 14;
  static const std::array<const char*, kFieldCount>& field_names();

  std::int64_t& field(std::size_t i);
  std::int64_t field(std::size_t i) const;

  /// Throws ParamError naming the first offending field.
  void validate() const;

  bool operator==(const SimParams&) const = default;
};

}  // namespace pphpc

#endif
