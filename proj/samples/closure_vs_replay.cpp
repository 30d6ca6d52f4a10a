// Plays the closure learner and the halving baseline against the same replay
// adversary on a class read from the command line (default two_intervals:8).

#include <iostream>
#include <string>

#include "replay/adversaries.hpp"
#include "replay/class_io.hpp"
#include "replay/dimensions.hpp"
#include "replay/learners.hpp"

int main(int argc, char** argv) {
  using namespace replay;
  const std::string spec = argc > 1 ? argv[1] : "two_intervals:8";
  const HypothesisClass H = load_class(spec);
  const auto ext = extended_threshold_dimension(H);
  std::cout << spec << ": |H| = " << H.size() << ", TDim = " << threshold_dimension(H).value
            << ", ExtTDim = " << ext.value << "\n";

  for (const char* name : {"closure_extdim", "halving", "greedy_proper"}) {
    auto learner = make_learner(name, H);
    WitnessChainAdversary adversary;
    const GameTranscript tr = run_game(*learner, adversary, H, {64, CommitMode::WorstCase});
    std::cout << "  " << name << ": " << tr.mistakes << " mistakes in 64 rounds";
    if (auto t = tr.first_trap_round()) std::cout << ", trap from round " << *t;
    std::cout << "\n";
  }
}
