#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "gale/instance_io.hpp"

namespace gale {

// Static SVG of a 2D-renderable instance: triangle Sperner lattices, three
// coverings (directly or through housing/cake reductions) and cubes with
// d <= 2. The optional solution document adds a marker. NotRenderable otherwise.
std::string plot_svg(const AnyInstance& inst, const std::optional<nlohmann::json>& solution = std::nullopt,
                     int resolution = 48);

}  // namespace gale
