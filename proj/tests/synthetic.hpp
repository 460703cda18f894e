#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "arnli/corpus.hpp"
#include "arnli/sparse.hpp"

namespace arnli::testing {

// Seeded Arabic sentence pairs whose labels follow simple surface cues
// (dropped phrase, inserted negation, changed year or city, unrelated
// sentence). About half are Neutral.
std::vector<corpus::LabeledPair> synthetic_corpus(std::size_t n, std::uint64_t seed);

// Writes the corpus as CSV and returns the path.
std::filesystem::path write_synthetic_csv(const std::filesystem::path& dir, std::size_t n,
                                          std::uint64_t seed);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

std::string read_file(const std::filesystem::path& p);

// Uniform blobs around (3, 3) and (-3, -3); separable by x0 + x1 = 0.
void separable_blobs(std::size_t n, std::uint64_t seed, FeatureMatrix& x, std::vector<Label>& y);

}  // namespace arnli::testing
