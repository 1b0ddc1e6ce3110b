#pragma once

#include <string>
#include <vector>

#include "minsurf/wdata.hpp"

namespace minsurf::gallery {

/// f = (1/2 (1 - z^2), i/2 (1 + z^2), z); g = z, one end, k = 1.
WeierstrassData enneper();

/// Catenoid with its ends at z = -1 and z = infinity: g = z + 1,
/// phi_3 = dz / (z + 1). Shifted so that the basepoint (0, 0) is regular.
WeierstrassData catenoid();

/// g = z^2, phi_3 = z^2 dz; k = 2, one end.
WeierstrassData doubled_enneper();

/// Name lookup for the three surfaces above.
WeierstrassData by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace minsurf::gallery
