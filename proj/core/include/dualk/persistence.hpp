#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "dualk/avica.hpp"
#include "dualk/classifier.hpp"
#include "dualk/ipca.hpp"

namespace dualk {

inline constexpr int kModelFormatVersion = 1;

using AnyModel = std::variant<AvicaModel, IpcaModel, OneVsAllModel>;

std::string serialize_model(const AnyModel& model);
// Throws VersionError, CorruptFileError or SchemaError; never returns a
// partially loaded model.
AnyModel deserialize_model(std::string_view text);

void save_model(const std::filesystem::path& path, const AnyModel& model);
AnyModel load_model(const std::filesystem::path& path);

AvicaModel load_avica_model(const std::filesystem::path& path);

// Throws SchemaError describing the first violated invariant.
void validate_model(const AvicaModel& model);
void validate_model(const IpcaModel& model);
void validate_model(const OneVsAllModel& model);

}  // namespace dualk
