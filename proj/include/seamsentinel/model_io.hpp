#pragma once

#include <filesystem>

#include "seamsentinel/classify.hpp"

namespace seam {

// Versioned self-describing text format, magic line "SEAMSENTINEL-MODEL v1".
// Loading rejects unknown versions and malformed payloads.
void save_model(const AnyModel& model, const std::filesystem::path& path);
AnyModel load_model(const std::filesystem::path& path);

const std::string& model_config_hash(const AnyModel& model);
const std::string& model_id_of(const AnyModel& model);

}  // namespace seam
