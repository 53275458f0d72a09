#include "vecscope/canonical_json.hpp"

#include <cmath>

#include "vecscope/error.hpp"

namespace vecscope {

namespace {

void require_finite(const nlohmann::json& value) {
  if (value.is_number_float()) {
    if (!std::isfinite(value.get<double>())) {
      throw InvalidArgument("cannot serialise a non-finite number to JSON");
    }
  } else if (value.is_structured()) {
    for (const auto& child : value) require_finite(child);
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& value) {
  require_finite(value);
  // nlohmann::json objects are std::map backed, so keys come out sorted.
  return value.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

}  // namespace vecscope
