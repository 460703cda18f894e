#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "arnli/learn.hpp"
#include "arnli/pipeline.hpp"

namespace arnli::learn {

inline constexpr char kModelMagic[8] = {'A', 'R', 'N', 'L', 'I', 'M', 'D', 'L'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

// A trained classifier together with everything needed to featurize raw
// sentence pairs. Layout on disk: docs/model_format.md.
struct Model {
  pipeline::FeaturePipeline pipeline;
  Estimator estimator;

  Label predict(std::string_view premise, std::string_view hypothesis) const;
  std::array<double, kNumLabels> scores(std::string_view premise, std::string_view hypothesis) const;
};

std::string serialize_model(const Model& model);
// Throws FormatError for bad magic, truncation, checksum mismatch or trailing
// bytes, and VersionError for an unsupported format version.
Model deserialize_model(std::string_view bytes);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace arnli::learn
