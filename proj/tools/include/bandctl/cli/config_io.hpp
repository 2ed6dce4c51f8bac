// SPDX-License-Identifier: MIT
#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "bandctl/model.hpp"

namespace bandctl::cli {

using json = nlohmann::json;

/// Parses a config document. Shape errors throw Error(InvalidParameter);
/// model invariants are left to validate().
ModelConfig model_from_json(const json& doc);
json model_to_json(const ModelConfig& m);

ModelConfig load_model(const std::filesystem::path& path);

}  // namespace bandctl::cli
