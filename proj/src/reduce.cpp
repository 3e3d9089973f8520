#include "pcsp/reduce.hpp"

namespace pcsp {

const char* reduce_step_name(ReduceStep s) {
  switch (s) {
    case ReduceStep::Isolated: return "isolated";
    case ReduceStep::Split: return "split";
    case ReduceStep::Type1: return "type1";
    case ReduceStep::Type2: return "type2";
    case ReduceStep::Type3: return "type3";
  }
  return "unknown";
}

}  // namespace pcsp
