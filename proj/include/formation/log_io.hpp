#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "formation/simulation.hpp"

namespace formation {

/// Column names in output order. One row per logged step; vehicle columns
/// repeat with the prefix v<i>_ for i = 1..n.
std::vector<std::string> csv_columns(std::size_t n);

/// Writes the header and every decimate-th step (the last step is always
/// written). Floats use 17 significant digits. Throws std::invalid_argument
/// when decimate is 0.
void write_csv(std::ostream& os, const SimLog& log, std::size_t decimate = 1);

}  // namespace formation
