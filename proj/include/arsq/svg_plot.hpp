#pragma once

#include <string>

#include "arsq/csv_io.hpp"

namespace arsq {

// Standalone SVG documents rendered from the CSV artifacts. Each throws
// SchemaError when the table does not match the expected schema or has no
// data rows.

// Total reward and 10-episode running average vs evaluation episode;
// exactly two data polylines.
std::string render_rewards_svg(const CsvTable& rewards);

// Four panels over time: position, velocity, body rates, rotor speeds.
std::string render_motion_svg(const CsvTable& trace);

// Flight path as an x-y projection and a t-z profile.
std::string render_trajectory_svg(const CsvTable& trace);

}  // namespace arsq
