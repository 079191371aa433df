#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace causal_econf {

enum class PlotKind { ErrorVsAlpha, RegionSize, Sweep };

/// Parses "error-vs-alpha" | "region-size" | "sweep"; throws Config otherwise.
PlotKind parse_plot_kind(std::string_view name);

/// Renders a report (from `check` or `region`) as a standalone SVG document.
/// Throws MissingField when the report lacks what the plot kind needs.
std::string render_plot(const nlohmann::json& report, PlotKind kind);

}  // namespace causal_econf
