#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "oup/kappa.hpp"

namespace oup {

/// {"p": int, "phi": [real], "sigma2": real, "mu": real}. Rates are never
/// serialized; they are always derived from phi.
nlohmann::json model_to_json(const OuModel& model);

/// Throws ParseError on a malformed document or when p != phi.size().
OuModel model_from_json(const nlohmann::json& doc);

OuModel read_model(const std::filesystem::path& path);
void write_model(const std::filesystem::path& path, const OuModel& model);

}  // namespace oup
