#include "sysinfo.hpp"

#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <utility>

namespace nasch {

unsigned detect_physical_cores() {
  std::ifstream cpuinfo("/proc/cpuinfo");
  if (cpuinfo) {
    std::set<std::pair<long, long>> cores;
    long physical_id = -1;
    long core_id = -1;
    bool saw_topology = false;
    std::string line;
    while (std::getline(cpuinfo, line)) {
      if (line.rfind("physical id", 0) == 0) {
        physical_id = std::stol(line.substr(line.find(':') + 1));
      } else if (line.rfind("core id", 0) == 0) {
        core_id = std::stol(line.substr(line.find(':') + 1));
        cores.emplace(physical_id, core_id);
        saw_topology = true;
      } else if (line.empty()) {
        physical_id = -1;
        core_id = -1;
      }
    }
    if (saw_topology && !cores.empty()) {
      return static_cast<unsigned>(cores.size());
    }
  }
  return std::thread::hardware_concurrency();
}

}  // namespace nasch
