#pragma once

/// Oracle and property checks that need no coupled simulation.

#include <string>
#include <vector>

namespace sharpib {

struct PropertyResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// "<=" or ">=": how value is compared with threshold.
  std::string comparison = "<=";
  bool passed = false;
};

/// h^2 <spread(F), u> against sum F . U w on random data; relative mismatch.
PropertyResult check_spread_interpolate_adjoint(unsigned seed);
/// max |sum_k phi(r - k) - 1| for the IB4 kernel over random offsets.
PropertyResult check_kernel_partition_of_unity(unsigned seed);
/// Fitted nodal L2 rate of the harmonic solve of log r on an annulus.
PropertyResult check_harmonic_annulus_rate();
/// Worst relative mismatch between the block stress and a central-difference
/// gradient of its strain energy at 100 random F.
PropertyResult check_block_stress_gradient(unsigned seed);
/// Worst relative mismatch of the inflating-ring pressure jumps at r_in, r_out.
PropertyResult check_inflating_ring_jumps();
/// Relative error of the kinetic-energy decay of a Taylor-Green vortex at N.
PropertyResult check_taylor_green_decay(int N = 64);

std::vector<PropertyResult> run_property_suite(unsigned seed = 20240521);

}  // namespace sharpib
