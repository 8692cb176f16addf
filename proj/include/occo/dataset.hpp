// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "occo/cloud.hpp"
#include "occo/occlusion.hpp"

namespace occo {

struct CompletionSample {
  std::uint32_t object_id = 0;
  std::uint16_t view_id = 0;
  PointCloud occluded;
  PointCloud coarse;
  PointCloud fine;
};

// A pre-training object: a mesh to sample, or a dense cloud to resample.
struct ObjectSource {
  std::string name;
  std::variant<TriMesh, PointCloud> geometry;
  std::optional<int> label;
};

struct GenerationConfig {
  std::size_t views_per_object = 10;
  std::size_t n_input = 1024;
  std::size_t n_coarse = 1024;
  std::size_t n_fine = 16384;
  CameraIntrinsics intrinsics;
  double standoff = 3.0;
  double eps_depth = kDefaultDepthEpsilon;
  std::uint64_t seed = 0;
};

struct SampleRecord {
  std::uint32_t object_id = 0;
  std::uint16_t view_id = 0;
  std::uint64_t seed = 0;
  std::array<double, 3> euler{};  // yaw, pitch, roll
  std::size_t visible = 0;
  double visible_fraction = 0.0;
};

struct SkippedObject {
  std::uint32_t object_id = 0;
  std::string name;
  std::string reason;
};

struct GeneratedDataset {
  std::vector<CompletionSample> samples;
  std::vector<SampleRecord> records;
  std::vector<SkippedObject> skipped;
  GenerationConfig config;

  double mean_visible_fraction() const;
};

/// Per object: n_fine surface samples (fine target, which also fixes the
/// unit-sphere frame), the first n_coarse of a seeded permutation of them
/// (coarse target) and n_input fresh samples occluded from each view. Every
/// (object, view) draws from its own derived seed, so objects are generated
/// in parallel with output identical to a serial run. Objects failing with
/// DegenerateMesh or AllOccluded are skipped; EmptyDataset if all are.
GeneratedDataset generate_dataset(std::span<const ObjectSource> objects, const GenerationConfig& config);
GeneratedDataset generate_dataset(std::span<const TriMesh> meshes, const GenerationConfig& config);

// Binary container: "OCCO", u16 version, u32 record count, then per record
// u32 object id, u16 view id, u32 x3 counts and xyz-interleaved f32 points
// (occluded, coarse, fine). Little-endian throughout.
inline constexpr std::uint16_t kDatasetVersion = 1;
std::vector<char> encode_dataset(std::span<const CompletionSample> samples);
std::vector<CompletionSample> decode_dataset(std::span<const char> bytes);

void save_dataset(const std::filesystem::path& path, std::span<const CompletionSample> samples);
std::vector<CompletionSample> load_dataset(const std::filesystem::path& path);

// Seeds, camera and per-sample visibility; the creation time sits under
// "created" so the rest of the document is reproducible.
nlohmann::json manifest_json(const GeneratedDataset& data, std::span<const std::string> object_names);

// Rounds every coordinate to binary32, as a save/load cycle would.
void round_to_float(std::vector<CompletionSample>& samples);

}  // namespace occo
