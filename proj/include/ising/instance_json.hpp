#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ising/instance.hpp"

namespace ising {

// {"beta": b, "vertices": n, "edges": [[u,v,J],...], "field": [x | "+inf" | "-inf", ...]}
nlohmann::json field_to_json(ExtendedField f);
ExtendedField field_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const IsingInstance& instance);
// Throws ValidationError naming the offending key or element.
IsingInstance instance_from_json(const nlohmann::json& j);

// Throws std::runtime_error (file missing / unreadable) or ValidationError.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace ising
