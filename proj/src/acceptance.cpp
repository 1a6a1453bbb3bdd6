#include "knotstrata/acceptance.hpp"

#include <ostream>
#include <stdexcept>

namespace knotstrata {

std::vector<CriterionResult> run_acceptance(std::ostream& out,
                                            const RunConfig& cfg) {
  (void)out;
  (void)cfg;
  throw std::logic_error("run_acceptance: not implemented yet");
}

}  // namespace knotstrata
