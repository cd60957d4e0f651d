#include "dfwer/simulation.hpp"

namespace dfwer {

std::vector<SimResult> estimate_serial(const SimConfig& cfg, std::span<const ProcedureId> procedures) {
  cfg.validate();
  std::vector<SimTally> tallies(procedures.size());
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    tally_replicate(generate_replicate(cfg, r), procedures, cfg.alpha, tallies);
  }
  return summarize(cfg, procedures, tallies);
}

}  // namespace dfwer
