#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fraclab {

std::string version();

/// (component, version) pairs for the library and the numerical back ends it was built against.
std::vector<std::pair<std::string, std::string>> component_versions();

} // namespace fraclab
