#pragma once

#include <string>
#include <vector>

#include "run_spec.hpp"

namespace abx::cli {

/** Writes the CSV (and SVG when requested) for one figure id; returns the written paths. */
std::vector<std::string> make_figure(const RunSpec& spec);

const std::vector<std::string>& figure_ids();

}  // namespace abx::cli
