#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

namespace zsl::zfb {

// Matrix container: 4 magic bytes, u64 rows, u64 cols (little endian), then
// rows*cols row-major IEEE-754 values. "ZFB1" holds float32, "ZFB8" float64.
// Label container: "ZFL1", u64 count, then count u32 values.

enum class Precision { Float32, Float64 };

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                  Precision precision = Precision::Float32);

/// Reads either precision; float32 payloads are promoted to double.
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

void write_labels(const std::filesystem::path& path, const std::vector<std::uint32_t>& labels);
std::vector<std::uint32_t> read_labels(const std::filesystem::path& path);

}  // namespace zsl::zfb
