// Reference simulator wrapped in the external candidate contract:
//   pphpc_candidate --check            -> prints the handshake line
//   pphpc_candidate p1 ... p14 seed    -> output CSV on stdout
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "pphpc/io.hpp"
#include "pphpc/sim.hpp"

int main(int argc, char** argv) {
  if (argc == 2 && std::string(argv[1]) == "--check") {
    std::cout << "pphpc-candidate 1\n";
    return 0;
  }
  if (argc != 16) {
    std::cerr << "usage: pphpc_candidate --check | <14 params> <seed>\n";
    return 2;
  }
  try {
    pphpc::SimParams params;
    for (std::size_t i = 0; i < pphpc::SimParams::kFieldCount; ++i)
      params.field(i) = std::stoll(argv[1 + i]);
    const auto seed = static_cast<std::uint64_t>(std::stoull(argv[15]));
    params.validate();
    pphpc::write_output_csv(pphpc::run_simulation(params, seed), std::cout);
  } catch (const std::exception& e) {
    std::cerr << "pphpc_candidate: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
