#pragma once

#include <string>

#include "ordstat/models.hpp"

namespace ordstat {

/// Model definition file, TOML. Exactly the keys `kind`, `family`,
/// `params` (array of numbers) and `theta` (array of 2 numbers) are
/// accepted; anything else is rejected.
Model parse_model_toml(const std::string& text);

Model load_model_file(const std::string& path);

} // namespace ordstat
