// Fuse two precise sources on a three-atom frame, first on the free model
// and then with θ1∩θ2 forced empty.

#include <iostream>

#include "dsmfuse/dsmfuse.hpp"

int main() {
  using namespace dsmfuse;
  const Frame frame({"A", "B", "C"});
  const PreciseMass m1(frame, {{"A", 0.5}, {"B", 0.3}, {"A n B", 0.2}});
  const PreciseMass m2(frame, {{"A", 0.1}, {"C", 0.6}, {"A u B", 0.3}});

  const PreciseMass sources[] = {m1, m2};
  const PreciseResult classic = dsm_classic_precise(sources);
  std::cout << "classic (free model)\n";
  for (const auto& [p, v] : classic.masses.values()) {
    std::cout << "  " << render(p, frame) << " = " << v << '\n';
  }

  const Proposition ab = parse_proposition("A n B", frame);
  const HybridModel model = build_model(frame, {&ab, 1});
  const PreciseResult hybrid = dsm_hybrid_precise(sources, model);
  std::cout << "hybrid (A n B empty)\n";
  for (const auto& [p, v] : hybrid.masses.values()) {
    if (hybrid.is_forced_empty(p)) continue;
    std::cout << "  " << render(p, frame) << " = " << v << '\n';
  }
  std::cout << "total " << hybrid.completeness.lower_sum << '\n';
}
