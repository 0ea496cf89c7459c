// Writes the T1-T4 proof fixtures (instances with p, q) into a directory.

#include <fstream>
#include <iostream>

#include "gkl/derivations.hpp"
#include "gkl/io.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make-proof-fixtures DIR\n";
    return 1;
  }
  using namespace gkl;
  const auto p = Formula::var("p"), q = Formula::var("q");
  const std::pair<const char*, Proof> proofs[] = {
      {"t1", derivations::t1(p)},
      {"t2", derivations::t2(p)},
      {"t3", derivations::t3(p)},
      {"t4", derivations::t4(p, q)},
  };
  for (const auto& [name, proof] : proofs) {
    const auto v = check_proof(proof);
    if (!v.accepted) {
      std::cerr << name << ": " << v.message << "\n";
      return 1;
    }
    const std::string path = std::string(argv[1]) + "/" + name + ".json";
    std::ofstream(path) << io::proof_to_json(proof).dump(1) << "\n";
    std::cout << path << ": " << proof.steps.size() << " steps, " << render(v.conclusion()) << "\n";
  }
  return 0;
}
