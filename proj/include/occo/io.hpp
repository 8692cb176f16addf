// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "occo/cloud.hpp"

namespace occo {

// ASCII OFF. Polygons are fan-triangulated; ModelNet's glued "OFF<nv> <nf> <ne>"
// first line is accepted.
TriMesh parse_off(std::string_view text);
std::string write_off(const TriMesh& mesh);

// ASCII PLY with float/double x, y, z vertex properties. Values declared as
// float are rounded to binary32 on read, so write -> parse is exact.
PointCloud parse_ply(std::string_view text);
std::string write_ply(const PointCloud& cloud);

std::string read_text_file(const std::filesystem::path& path);
std::vector<char> read_binary_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Whitespace-separated integers, one per point.
std::vector<int> parse_labels(std::string_view text);

}  // namespace occo
