#pragma once

#include <filesystem>
#include <utility>

#include "zsl/types.hpp"

namespace zsl {

// Bundle directory layout (format version 1):
//   metadata.json    shapes, class names, 0-based split index lists
//   features.zfb     N x d_v float32 matrix
//   attributes.zfb   (K+L) x d_a float32 matrix
//   labels.zfb       N class indices
inline constexpr int kBundleVersion = 1;

struct Bundle {
    FeatureDataset dataset;
    AttributeMatrix attributes;
};

Bundle load_bundle(const std::filesystem::path& dir);

/// Validates both types before touching the filesystem.
void save_bundle(const FeatureDataset& dataset, const AttributeMatrix& attrs,
                 const std::filesystem::path& dir);

}  // namespace zsl
