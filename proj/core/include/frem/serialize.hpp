#pragma once

#include "frem/estimator.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace frem {

inline constexpr int kModelFormatVersion = 1;

//! Versioned JSON container holding grid, curves, responses, dimension
//! estimate, bandwidths and recovery settings. Doubles round-trip exactly.
std::string model_to_json(const FremModel& model);
//! ParseError on malformed JSON, SchemaError on missing or mistyped fields
//! or an unsupported version.
FremModel model_from_json(std::string_view text);

void save_model(const FremModel& model, const std::filesystem::path& path);
FremModel load_model(const std::filesystem::path& path);

//! Whole file as a string; IoError if it cannot be read.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace frem
