#include "optopix/reference_data.hpp"

namespace optopix::reference {

const std::vector<BridgeMeasurement>& bridge_measurements() {
  static const std::vector<BridgeMeasurement> rows = {
      {0.20e-3, 382.0, 81e-6, 31e-3},
      {0.25e-3, 269.0, 106e-6, 29e-3},
      {0.40e-3, 184.0, 126e-6, 23e-3},
      {0.55e-3, 145.0, 99e-6, 14e-3},
      {0.75e-3, 95.0, 102e-6, 10e-3},
  };
  return rows;
}

}  // namespace optopix::reference
