#pragma once

#include <json.hpp>
#include <string>

namespace vecscope {

// Compact JSON with object keys in byte order and doubles in shortest
// round-trip form (at most 17 significant digits). Identical values always
// produce identical bytes. Throws InvalidArgument on NaN or infinity.
std::string canonical_json(const nlohmann::json& value);

}  // namespace vecscope
