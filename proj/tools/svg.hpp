#pragma once

#include <string>

#include "advlab/simlab.hpp"

namespace advlab::tool {

/// Minimal static line chart: one polyline per (method, eps) series, log x
/// axis when the x variable is lambda.
void write_svg(const std::string& path, const AggregateCurve& curve,
               const std::string& title);

}  // namespace advlab::tool
