// Plain-text key/value system configs.
//
//   # comment
//   kind = linear | product-rotation | mane
//   matrix = 100 1 0        (one line per row, integers)
//   rotation = 0.618...     (product-rotation)
//   q = 0 0 0               (mane)
//   rho = 0.05              (mane)
//   rho_inner = 0.025       (mane)
//   strength = 0.1          (mane)
//
// Reals are written with 17 significant digits, so save/load round-trips exactly.
#pragma once

#include <string>

#include "phlab/systems.hpp"

namespace phlab {

SystemSpec system_from_config(const std::string& text);
std::string system_to_config(const SystemSpec& system);

SystemSpec load_system(const std::string& path);
void save_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// "%.17g"
std::string format_real(double v);

}  // namespace phlab
