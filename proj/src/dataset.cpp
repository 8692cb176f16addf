// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/dataset.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <numeric>

#include "occo/error.hpp"
#include "occo/io.hpp"
#include "occo/seed.hpp"

namespace occo {
namespace {

struct ObjectResult {
  std::vector<CompletionSample> samples;
  std::vector<SampleRecord> records;
  std::optional<std::string> skip_reason;
};

PointCloud resample(const PointCloud& cloud, std::size_t n, Rng& rng) {
  if (cloud.empty()) fail(ErrorCode::EmptyCloud, "source cloud is empty");
  PointCloud out;
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.points.push_back(cloud.points[uniform_index(rng, cloud.size())]);
  return out;
}

PointCloud draw(const ObjectSource& src, std::size_t n, Rng& rng) {
  if (const auto* mesh = std::get_if<TriMesh>(&src.geometry)) return sample_mesh(*mesh, n, rng);
  return resample(std::get<PointCloud>(src.geometry), n, rng);
}

ObjectResult generate_object(const ObjectSource& src, std::uint32_t object_id, const GenerationConfig& cfg) {
  ObjectResult res;
  try {
    Rng obj_rng = make_rng(cfg.seed, "object", {object_id});
    PointCloud dense = draw(src, cfg.n_fine, obj_rng);
    const UnitSphereFrame frame = unit_sphere_frame(dense);
    PointCloud fine = frame.apply(dense);
    fine.label = src.label;

    std::vector<std::size_t> perm(fine.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(obj_rng, i)]);
    PointCloud coarse;
    coarse.label = src.label;
    for (std::size_t i = 0; i < cfg.n_coarse; ++i) coarse.points.push_back(fine.points[perm[i]]);

    for (std::size_t v = 0; v < cfg.views_per_object; ++v) {
      const auto view_id = static_cast<std::uint16_t>(v);
      const std::uint64_t seed = derive_seed(cfg.seed, "view", {object_id, view_id});
      Rng rng(seed);
      const double yaw = uniform(rng, 0.0, 2.0 * M_PI);
      const double pitch = uniform(rng, 0.0, 2.0 * M_PI);
      const double roll = uniform(rng, 0.0, 2.0 * M_PI);
      ViewSpec view;
      view.intrinsics = cfg.intrinsics;
      view.pose.rotation = euler_rotation(yaw, pitch, roll);
      view.standoff = cfg.standoff;
      PointCloud input = frame.apply(draw(src, cfg.n_input, rng));
      input.label = src.label;
      OccludedView occ = occlude(input, view, cfg.eps_depth);

      CompletionSample s{object_id, view_id, std::move(occ.cloud), coarse, fine};
      SampleRecord r{object_id, view_id, seed, {yaw, pitch, roll}, s.occluded.size(),
                     static_cast<double>(s.occluded.size()) / static_cast<double>(cfg.n_input)};
      res.samples.push_back(std::move(s));
      res.records.push_back(r);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateMesh && e.code() != ErrorCode::AllOccluded &&
        e.code() != ErrorCode::EmptyCloud)
      throw;
    res.samples.clear();
    res.records.clear();
    res.skip_reason = e.what();
  }
  return res;
}

void put_u16(std::vector<char>& out, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f32(std::vector<char>& out, double v) { put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

class Reader {
 public:
  explicit Reader(std::span<const char> bytes) : bytes_(bytes) {}

  std::uint64_t uint(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_++])) << (8 * i);
    return v;
  }
  double f32() { return std::bit_cast<float>(static_cast<std::uint32_t>(uint(4))); }
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) fail(ErrorCode::MalformedHeader, "dataset file is truncated");
  }
  bool done() const noexcept { return pos_ == bytes_.size(); }

 private:
  std::span<const char> bytes_;
  std::size_t pos_ = 0;
};

PointCloud read_points(Reader& r, std::size_t n) {
  r.need(n * 12);
  PointCloud c;
  c.points.resize(n);
  for (auto& p : c.points) {
    p.x = r.f32();
    p.y = r.f32();
    p.z = r.f32();
  }
  return c;
}

}  // namespace

double GeneratedDataset::mean_visible_fraction() const {
  if (records.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : records) s += r.visible_fraction;
  return s / static_cast<double>(records.size());
}

GeneratedDataset generate_dataset(std::span<const ObjectSource> objects, const GenerationConfig& config) {
  if (config.views_per_object < 1 || config.n_input < 1 || config.n_coarse < 1 || config.n_fine < 1)
    fail(ErrorCode::InvalidArgument, "generation counts must be >= 1");
  if (config.n_coarse > config.n_fine) fail(ErrorCode::InvalidArgument, "n_coarse cannot exceed n_fine");
  if (config.views_per_object > 65536) fail(ErrorCode::InvalidArgument, "view ids are 16-bit");
  if (objects.empty()) fail(ErrorCode::EmptyDataset, "no input objects");

  std::vector<ObjectResult> results(objects.size());
  std::vector<std::string> errors(objects.size());
  const auto n = static_cast<std::ptrdiff_t>(objects.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      results[static_cast<std::size_t>(i)] =
          generate_object(objects[static_cast<std::size_t>(i)], static_cast<std::uint32_t>(i), config);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) fail(ErrorCode::InvalidArgument, objects[i].name + ": " + errors[i]);

  GeneratedDataset out;
  out.config = config;
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto& r = results[i];
    if (r.skip_reason) {
      out.skipped.push_back({static_cast<std::uint32_t>(i), objects[i].name, *r.skip_reason});
      continue;
    }
    for (auto& s : r.samples) out.samples.push_back(std::move(s));
    for (auto& rec : r.records) out.records.push_back(rec);
  }
  if (out.samples.empty()) fail(ErrorCode::EmptyDataset, "every object was skipped");
  return out;
}

GeneratedDataset generate_dataset(std::span<const TriMesh> meshes, const GenerationConfig& config) {
  std::vector<ObjectSource> objects;
  objects.reserve(meshes.size());
  for (std::size_t i = 0; i < meshes.size(); ++i)
    objects.push_back({"mesh" + std::to_string(i), meshes[i], std::nullopt});
  return generate_dataset(objects, config);
}

std::vector<char> encode_dataset(std::span<const CompletionSample> samples) {
  std::vector<char> out{'O', 'C', 'C', 'O'};
  put_u16(out, kDatasetVersion);
  put_u32(out, static_cast<std::uint32_t>(samples.size()));
  for (const auto& s : samples) {
    put_u32(out, s.object_id);
    put_u16(out, s.view_id);
    for (const auto* c : {&s.occluded, &s.coarse, &s.fine}) put_u32(out, static_cast<std::uint32_t>(c->size()));
    for (const auto* c : {&s.occluded, &s.coarse, &s.fine})
      for (const auto& p : c->points) {
        put_f32(out, p.x);
        put_f32(out, p.y);
        put_f32(out, p.z);
      }
  }
  return out;
}

std::vector<CompletionSample> decode_dataset(std::span<const char> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "OCCO", 4) != 0)
    fail(ErrorCode::MalformedHeader, "not an OCCO dataset");
  Reader r(bytes.subspan(4));
  if (r.uint(2) != kDatasetVersion) fail(ErrorCode::MalformedHeader, "unsupported dataset version");
  const auto count = r.uint(4);
  std::vector<CompletionSample> samples;
  for (std::uint64_t i = 0; i < count; ++i) {
    CompletionSample s;
    s.object_id = static_cast<std::uint32_t>(r.uint(4));
    s.view_id = static_cast<std::uint16_t>(r.uint(2));
    const auto n_occ = r.uint(4), n_coarse = r.uint(4), n_fine = r.uint(4);
    s.occluded = read_points(r, n_occ);
    s.coarse = read_points(r, n_coarse);
    s.fine = read_points(r, n_fine);
    samples.push_back(std::move(s));
  }
  if (!r.done()) fail(ErrorCode::MalformedHeader, "trailing bytes after the last record");
  return samples;
}

void save_dataset(const std::filesystem::path& path, std::span<const CompletionSample> samples) {
  const std::vector<char> bytes = encode_dataset(samples);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot write " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<CompletionSample> load_dataset(const std::filesystem::path& path) {
  return decode_dataset(read_binary_file(path));
}

nlohmann::json manifest_json(const GeneratedDataset& data, std::span<const std::string> object_names) {
  using nlohmann::json;
  const auto& c = data.config;
  json m;
  m["format_version"] = kDatasetVersion;
  m["seed"] = c.seed;
  m["views_per_object"] = c.views_per_object;
  m["n_input"] = c.n_input;
  m["n_coarse"] = c.n_coarse;
  m["n_fine"] = c.n_fine;
  m["camera"] = {{"f", c.intrinsics.focal},
                 {"gamma", c.intrinsics.skew},
                 {"w", c.intrinsics.width},
                 {"h", c.intrinsics.height},
                 {"standoff", c.standoff},
                 {"eps_depth", c.eps_depth}};
  m["objects"] = json::array();
  for (std::size_t i = 0; i < object_names.size(); ++i) m["objects"].push_back({{"id", i}, {"name", object_names[i]}});
  m["samples"] = json::array();
  for (const auto& r : data.records)
    m["samples"].push_back({{"object_id", r.object_id},
                            {"view_id", r.view_id},
                            {"seed", r.seed},
                            {"yaw", r.euler[0]},
                            {"pitch", r.euler[1]},
                            {"roll", r.euler[2]},
                            {"visible", r.visible},
                            {"visible_fraction", r.visible_fraction}});
  m["skipped"] = json::array();
  for (const auto& s : data.skipped)
    m["skipped"].push_back({{"object_id", s.object_id}, {"name", s.name}, {"reason", s.reason}});
  m["mean_visible_fraction"] = data.mean_visible_fraction();

  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  m["created"] = stamp;
  return m;
}

namespace {

void round_cloud(PointCloud& c) {
  for (Point3& p : c.points)
    p = {static_cast<double>(static_cast<float>(p.x)), static_cast<double>(static_cast<float>(p.y)),
         static_cast<double>(static_cast<float>(p.z))};
}

}  // namespace

void round_to_float(std::vector<CompletionSample>& samples) {
  for (auto& s : samples) {
    round_cloud(s.occluded);
    round_cloud(s.coarse);
    round_cloud(s.fine);
  }
}

}  // namespace occo
