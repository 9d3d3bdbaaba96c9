#pragma once

namespace nasch {

// Physical core count from /proc/cpuinfo (unique physical id / core id
// pairs), falling back to the logical CPU count elsewhere. Returns 0
// when nothing can be determined.
unsigned detect_physical_cores();

}  // namespace nasch
