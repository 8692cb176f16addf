// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "occo/checkpoint.hpp"
#include "occo/dataset.hpp"
#include "occo/error.hpp"
#include "occo/io.hpp"
#include "occo/model.hpp"
#include "occo/probe.hpp"
#include "occo/synthetic.hpp"
#include "occo/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitArtifact = 4;

// Failure with an explicit exit code, for conditions outside the library.
struct CliFailure {
  int code;
  std::string message;
};

int exit_code(occo::ErrorCode c) {
  using occo::ErrorCode;
  switch (c) {
    case ErrorCode::NonFiniteLoss: return kExitNumeric;
    case ErrorCode::DimsMismatch:
    case ErrorCode::StaleCache:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::ConfigMismatch: return kExitArtifact;
    default: return kExitInput;
  }
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string lower_ext(const fs::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return e;
}

std::vector<fs::path> list_shapes(const fs::path& dir, bool allow_off = true) {
  if (!fs::is_directory(dir)) throw CliFailure{kExitInput, "not a directory: " + dir.string()};
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string e = lower_ext(entry.path());
    if (e == ".ply" || (allow_off && e == ".off")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw CliFailure{kExitInput, "no input shapes found in " + dir.string()};
  return out;
}

occo::ObjectSource load_source(const fs::path& p) {
  const std::string text = occo::read_text_file(p);
  if (lower_ext(p) == ".off") return {p.filename().string(), occo::parse_off(text), std::nullopt};
  occo::PointCloud c = occo::parse_ply(text);
  auto label = c.label;
  return {p.filename().string(), std::move(c), label};
}

// Unit-sphere normalised cloud: PLY as given, OFF sampled with n points.
occo::PointCloud load_cloud(const fs::path& p, std::size_t n, std::uint64_t seed, std::size_t index) {
  const occo::ObjectSource src = load_source(p);
  if (const auto* mesh = std::get_if<occo::TriMesh>(&src.geometry)) {
    occo::Rng rng = occo::make_rng(seed, "cli-sample", {index});
    return occo::normalize_unit_sphere(occo::sample_mesh(*mesh, n, rng));
  }
  return occo::normalize_unit_sphere(std::get<occo::PointCloud>(src.geometry));
}

std::vector<int> widths_from(const json& j, const std::string& key) {
  std::vector<int> w;
  for (const auto& x : j.at(key)) w.push_back(x.get<int>());
  return w;
}

// "desk", "full", or a JSON object overriding desk defaults.
occo::ModelDims parse_dims(const std::string& spec) {
  if (spec == "desk") return {};
  if (spec == "full") return occo::ModelDims::full();
  json j;
  try {
    j = json::parse(spec);
  } catch (const json::exception&) {
    throw CliFailure{kExitInput, "--dims must be desk, full or a JSON object"};
  }
  if (!j.is_object()) throw CliFailure{kExitInput, "--dims must be desk, full or a JSON object"};
  occo::ModelDims d;
  for (const auto& [key, value] : j.items()) {
    if (key == "point_mlp") d.point_mlp_widths = widths_from(j, key);
    else if (key == "embed") d.embed_dim = value.get<int>();
    else if (key == "coarse_hidden") d.coarse_hidden = widths_from(j, key);
    else if (key == "n_coarse") d.n_coarse = value.get<int>();
    else if (key == "grid") d.grid_side = value.get<int>();
    else if (key == "fold_mlp") d.fold_mlp_widths = widths_from(j, key);
    else throw CliFailure{kExitInput, "unknown dims key: " + key};
  }
  occo::validate(d);
  return d;
}

void require_checkpoint(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw CliFailure{kExitArtifact, "checkpoint not found: " + p.string()};
}

std::vector<char> read_or_fail(const fs::path& p, int code) {
  if (!fs::is_regular_file(p)) throw CliFailure{code, "file not found: " + p.string()};
  return occo::read_binary_file(p);
}

void write_bytes(const fs::path& p, const std::string& text) { occo::write_text_file(p, text); }

// Applies JSON config values to options not given on the command line.
void merge_config(CLI::App* sub, const fs::path& path) {
  json cfg;
  try {
    cfg = json::parse(occo::read_text_file(path));
  } catch (const json::exception& e) {
    throw CliFailure{kExitInput, "bad config file: " + std::string(e.what())};
  }
  if (!cfg.is_object()) throw CliFailure{kExitInput, "config file must hold a JSON object"};
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") throw CliFailure{kExitInput, "unknown config key: " + key};
    if (opt->count() > 0) continue;
    auto as_string = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_array())
      for (const auto& v : value) opt->add_result(as_string(v));
    else
      opt->add_result(as_string(value));
    opt->run_callback();
  }
}

struct GenArgs {
  std::string input, out, manifest;
  std::size_t views = 10, points = 1024, coarse = 1024, fine = 16384;
  double f = 1000, gamma = 0, w = 1600, h = 1200, standoff = 3, eps_depth = occo::kDefaultDepthEpsilon;
  std::uint64_t seed = 0;
};

int cmd_gen(const GenArgs& a) {
  const auto files = list_shapes(a.input);
  std::vector<occo::ObjectSource> objects;
  std::vector<std::string> names;
  for (const auto& p : files) {
    try {
      objects.push_back(load_source(p));
      names.push_back(p.filename().string());
    } catch (const occo::Error& e) {
      std::cerr << "skip " << p.filename().string() << ": " << e.what() << "\n";
    }
  }
  if (objects.empty()) throw CliFailure{kExitInput, "no readable input shapes"};
  occo::GenerationConfig cfg;
  cfg.views_per_object = a.views;
  cfg.n_input = a.points;
  cfg.n_coarse = a.coarse;
  cfg.n_fine = a.fine;
  cfg.intrinsics = {a.f, a.gamma, a.w, a.h};
  cfg.standoff = a.standoff;
  cfg.eps_depth = a.eps_depth;
  cfg.seed = a.seed;
  const occo::GeneratedDataset data = occo::generate_dataset(objects, cfg);
  for (const auto& s : data.skipped) std::cerr << "skip " << s.name << ": " << s.reason << "\n";
  occo::save_dataset(a.out, data.samples);
  const std::string manifest = a.manifest.empty() ? a.out + ".json" : a.manifest;
  write_bytes(manifest, occo::manifest_json(data, names).dump(2) + "\n");
  std::cout << objects.size() - data.skipped.size() << " objects, " << a.views << " views, " << data.samples.size()
            << " samples, mean visible fraction " << format("%.4f", data.mean_visible_fraction()) << "\n";
  return kExitOk;
}

struct PretrainArgs {
  std::string data, out, log, dims = "desk", resume, encoder_out;
  std::size_t epochs = 50, batch = 32, lr_every = 10;
  double lr = 1e-4, lr_decay = 0.7;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_steps;
};

int cmd_pretrain(const PretrainArgs& a) {
  const auto samples = occo::decode_dataset(read_or_fail(a.data, kExitInput));
  occo::TrainConfig cfg;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.lr0 = a.lr;
  cfg.lr_decay = a.lr_decay;
  cfg.lr_every = a.lr_every;
  cfg.seed = a.seed;
  cfg.max_steps = a.max_steps;

  occo::TrainLog log;
  auto hook = [&log](const occo::StepRecord& r, const occo::ModelParams&) { log.push_back(r); };
  const std::string log_path = a.log.empty() ? a.out + ".csv" : a.log;
  auto flush_log = [&] {
    std::string csv = occo::log_csv(log);
    if (!a.resume.empty() && fs::is_regular_file(log_path)) {
      csv.erase(0, csv.find('\n') + 1);
      std::ofstream(log_path, std::ios::app) << csv;
    } else {
      write_bytes(log_path, csv);
    }
  };

  occo::TrainResult result;
  try {
    if (!a.resume.empty()) {
      require_checkpoint(a.resume);
      const occo::Checkpoint ck = occo::load_checkpoint(a.resume);
      if (a.dims != "desk" && !(parse_dims(a.dims) == ck.params.dims))
        throw occo::Error(occo::ErrorCode::DimsMismatch, "--dims differs from the checkpoint");
      result = occo::resume(ck, samples, cfg, hook);
    } else {
      result = occo::pretrain(samples, parse_dims(a.dims), cfg, hook);
    }
  } catch (const occo::Error& e) {
    if (e.code() == occo::ErrorCode::NonFiniteLoss) flush_log();
    throw;
  }
  flush_log();
  occo::save_checkpoint(a.out, result.params, result.state);
  if (!a.encoder_out.empty()) occo::save_encoder(result.params, a.encoder_out);
  const occo::DatasetChamfer cd = occo::dataset_chamfer(samples, result.params);
  std::cout << "steps " << result.state.global_step << ", final cd_coarse " << format("%.6f", cd.cd_coarse)
            << ", cd_fine " << format("%.6f", cd.cd_fine) << "\n";
  return kExitOk;
}

struct CompleteArgs {
  std::string ckpt, in, out, truth;
};

int cmd_complete(const CompleteArgs& a) {
  require_checkpoint(a.ckpt);
  const occo::ModelParams params = occo::load_model(a.ckpt);
  const occo::PointCloud input = occo::parse_ply(occo::read_text_file(a.in));
  auto [embedding, cache] = occo::encoder_forward(input, params);
  const occo::Decoded out = occo::decode(embedding, params);
  std::string prefix = a.out;
  if (lower_ext(prefix) == ".ply") prefix.resize(prefix.size() - 4);
  write_bytes(prefix + ".coarse.ply", occo::write_ply(out.coarse));
  write_bytes(prefix + ".fine.ply", occo::write_ply(out.fine));
  std::cout << "coarse " << out.coarse.size() << " points, fine " << out.fine.size() << " points\n";
  if (!a.truth.empty()) {
    const occo::PointCloud truth = occo::parse_ply(occo::read_text_file(a.truth));
    std::cout << "cd_coarse " << format("%.17g", occo::chamfer(out.coarse, truth, false).value) << "\n";
    std::cout << "cd_fine " << format("%.17g", occo::chamfer(out.fine, truth, false).value) << "\n";
  }
  return kExitOk;
}

struct ProbeArgs {
  std::string ckpt, data, labels, out;
  int k = 0;
  std::size_t seeds = 10, points = 1024;
  double test_fraction = 1.0 / 3.0, jitter_sigma = 0.01, jitter_clip = 0.05, translate_range = 0.2;
  std::uint64_t seed = 0;
};

int cmd_probe(const ProbeArgs& a) {
  require_checkpoint(a.ckpt);
  const occo::Checkpoint ck = occo::load_checkpoint(a.ckpt);
  const auto files = list_shapes(a.data);
  const std::vector<int> labels = occo::parse_labels(occo::read_text_file(a.labels));
  if (labels.size() != files.size())
    throw CliFailure{kExitInput, "label count " + std::to_string(labels.size()) + " differs from shape count " +
                                     std::to_string(files.size())};
  std::vector<occo::PointCloud> clouds;
  for (std::size_t i = 0; i < files.size(); ++i) {
    clouds.push_back(load_cloud(files[i], a.points, a.seed, i));
    clouds.back().label = labels[i];
  }

  // Seeded split for the linear probe.
  std::vector<std::size_t> order = occo::epoch_order(clouds.size(), 0, occo::derive_seed(a.seed, "probe-split"));
  const auto n_test = static_cast<std::size_t>(static_cast<double>(clouds.size()) * a.test_fraction);
  std::vector<bool> is_test(clouds.size(), false);
  for (std::size_t i = 0; i < n_test; ++i) is_test[order[i]] = true;

  occo::Rng init_rng = occo::make_rng(a.seed, "random-init");
  const occo::ModelParams random_params = occo::init_params(ck.params.dims, init_rng);
  const std::vector<std::pair<std::string, occo::EncoderParams>> encoders = {
      {"occo", occo::encoder_of(ck.params)}, {"random", occo::encoder_of(random_params)}};
  const auto rows = occo::cumulative_rows(occo::TransformSpec::jitter(a.jitter_sigma, a.jitter_clip),
                                          occo::TransformSpec::translate(a.translate_range),
                                          occo::TransformSpec::rotate());

  std::string csv = "init,transform_row,ami_mean,ami_stderr,probe_acc\n";
  for (const auto& [name, enc] : encoders) {
    const auto table = occo::robustness_probe(enc, clouds, rows, a.seed, a.seeds, a.k);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double acc = 0.0;
      if (n_test > 0 && n_test < clouds.size()) {
        const auto moved = occo::transform_all(clouds, rows[r], occo::derive_seed(a.seed, "probe-transform"));
        const Eigen::MatrixXd x = occo::embed_all(moved, enc);
        std::vector<Eigen::Index> tr, te;
        std::vector<int> ytr, yte;
        for (std::size_t i = 0; i < clouds.size(); ++i) {
          (is_test[i] ? te : tr).push_back(static_cast<Eigen::Index>(i));
          (is_test[i] ? yte : ytr).push_back(labels[i]);
        }
        acc = occo::linear_probe(x(tr, Eigen::all), ytr, x(te, Eigen::all), yte);
      }
      csv += name + "," + table[r].name + "," + format("%.6f", table[r].mean) + "," +
             format("%.6f", table[r].stderr_) + "," + format("%.6f", acc) + "\n";
    }
  }
  if (a.out.empty()) std::cout << csv;
  else write_bytes(a.out, csv);
  return kExitOk;
}

struct DissectArgs {
  std::string ckpt, data, parts, out;
  double fraction = 0.2, threshold = 0.5;
  int concepts = 0;
};

int cmd_dissect(const DissectArgs& a) {
  require_checkpoint(a.ckpt);
  const occo::EncoderParams enc = occo::load_encoder(a.ckpt);
  const auto files = list_shapes(a.data, false);
  const fs::path parts_dir = a.parts.empty() ? fs::path(a.data) : fs::path(a.parts);
  std::vector<occo::PartCloud> objects;
  int max_part = -1;
  for (const auto& f : files) {
    occo::PartCloud pc;
    pc.cloud = occo::parse_ply(occo::read_text_file(f));
    fs::path pf = parts_dir / (f.stem().string() + ".parts");
    if (!fs::is_regular_file(pf)) pf = parts_dir / (f.stem().string() + ".txt");
    if (!fs::is_regular_file(pf)) throw CliFailure{kExitInput, "no part labels for " + f.filename().string()};
    pc.parts = occo::parse_labels(occo::read_text_file(pf));
    for (int p : pc.parts) max_part = std::max(max_part, p);
    objects.push_back(std::move(pc));
  }
  const int concepts = a.concepts > 0 ? a.concepts : max_part + 1;
  const auto layers = occo::dissect(enc, objects, concepts, a.fraction, a.threshold);

  std::string csv = "channel";
  for (int c = 0; c < concepts; ++c) csv += ",concept_" + std::to_string(c);
  csv += "\n";
  for (const auto& l : layers) {
    for (Eigen::Index k = 0; k < l.miou.rows(); ++k) {
      csv += "L" + std::to_string(l.layer) + "c" + std::to_string(k);
      for (Eigen::Index c = 0; c < l.miou.cols(); ++c) csv += "," + format("%.6f", l.miou(k, c));
      csv += "\n";
    }
    std::cout << "layer " << l.layer << ": " << l.miou.rows() << " channels, " << l.counts.total
              << " detections, " << l.counts.unique << " unique concepts\n";
  }
  if (a.out.empty()) std::cout << csv;
  else write_bytes(a.out, csv);
  return kExitOk;
}

struct LandscapeArgs {
  std::string ckpt, data, out;
  int grid = 11;
  std::uint64_t seed = 0;
  std::optional<double> alpha;
};

int cmd_landscape(const LandscapeArgs& a) {
  require_checkpoint(a.ckpt);
  const occo::Checkpoint ck = occo::load_checkpoint(a.ckpt);
  if (!ck.has_decoder) throw occo::Error(occo::ErrorCode::DimsMismatch, "landscape needs a full model checkpoint");
  const auto samples = occo::decode_dataset(read_or_fail(a.data, kExitInput));
  const double alpha = a.alpha ? *a.alpha : (ck.train ? occo::alpha_schedule(ck.train->global_step) : 1.0);
  const occo::LandscapeSlice s = occo::landscape_slice(ck.params, samples, a.grid, a.seed, alpha);
  std::string csv = "alpha,beta,loss\n";
  for (int i = 0; i < a.grid; ++i)
    for (int j = 0; j < a.grid; ++j)
      csv += format("%.17g", s.coords[static_cast<std::size_t>(i)]) + "," +
             format("%.17g", s.coords[static_cast<std::size_t>(j)]) + "," + format("%.17g", s.values(i, j)) + "\n";
  if (a.out.empty()) std::cout << csv;
  else write_bytes(a.out, csv);
  const int c = a.grid / 2;
  std::cerr << "f(0,0) = " << format("%.17g", s.values(c, c)) << " at loss weight " << alpha << "\n";
  return kExitOk;
}

struct SynthArgs {
  std::string out;
  std::size_t count = 30, points = 1024;
  std::uint64_t seed = 0;
};

int cmd_synth(const SynthArgs& a) {
  const fs::path root(a.out);
  fs::create_directories(root / "meshes");
  fs::create_directories(root / "clouds");
  std::string labels;
  for (std::size_t i = 0; i < a.count; ++i) {
    occo::Rng rng = occo::make_rng(a.seed, "synth", {i});
    const auto cls = static_cast<occo::ShapeClass>(i % occo::kShapeClassCount);
    const occo::PartMesh shape = occo::random_shape(cls, rng);
    char stem[64];
    std::snprintf(stem, sizeof stem, "%05zu_%s", i, occo::to_string(cls).c_str());
    write_bytes(root / "meshes" / (std::string(stem) + ".off"), occo::write_off(shape.mesh));
    const occo::LabeledCloud lc = occo::sample_labeled(shape, a.points, rng);
    write_bytes(root / "clouds" / (std::string(stem) + ".ply"), occo::write_ply(lc.cloud));
    std::string parts;
    for (int p : lc.parts) parts += std::to_string(p) + "\n";
    write_bytes(root / "clouds" / (std::string(stem) + ".parts"), parts);
    labels += std::to_string(static_cast<int>(cls)) + "\n";
  }
  write_bytes(root / "labels.txt", labels);
  std::cout << a.count << " shapes written to " << root.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occo: occlusion completion pre-training and probing"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  if (const char* env = std::getenv("OCCO_THREADS")) threads = std::atoi(env);
  app.add_option("--threads", threads, "Worker threads (default: OCCO_THREADS, else all cores)");
  std::string config;
  app.add_option("--config", config, "JSON file of option values; command-line flags take precedence")
      ->check(CLI::ExistingFile);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an occluded completion dataset from OFF/PLY shapes");
  g->set_help_flag("--help", "Print this help message and exit");
  g->add_option("--input", gen.input, "Directory of OFF meshes or PLY clouds")->required();
  g->add_option("--out", gen.out, "Output dataset file")->required();
  g->add_option("--manifest", gen.manifest, "Manifest path (default: <out>.json)");
  g->add_option("--views", gen.views, "Views per object")->capture_default_str();
  g->add_option("--points", gen.points, "Input points sampled per view before occlusion")->capture_default_str();
  g->add_option("--coarse", gen.coarse, "Coarse target size")->capture_default_str();
  g->add_option("--fine", gen.fine, "Fine target size")->capture_default_str();
  g->add_option("--f", gen.f, "Focal length in pixels")->capture_default_str();
  g->add_option("--gamma", gen.gamma, "Axis skew")->capture_default_str();
  g->add_option("--w", gen.w, "Image width in pixels")->capture_default_str();
  g->add_option("--h", gen.h, "Image height in pixels")->capture_default_str();
  g->add_option("--standoff", gen.standoff, "Push along +z after rotation")->capture_default_str();
  g->add_option("--eps-depth", gen.eps_depth, "Depth tolerance of the visibility test")->capture_default_str();
  g->add_option("--seed", gen.seed, "Master seed")->capture_default_str();

  PretrainArgs pre;
  auto* p = app.add_subcommand("pretrain", "Pre-train the completion model on a dataset");
  p->add_option("--data", pre.data, "Dataset file from gen")->required();
  p->add_option("--out", pre.out, "Output checkpoint (with optimizer state)")->required();
  p->add_option("--log", pre.log, "Training log CSV (default: <out>.csv)");
  p->add_option("--encoder-out", pre.encoder_out, "Also write an encoder-only checkpoint here");
  p->add_option("--epochs", pre.epochs, "Epochs")->capture_default_str();
  p->add_option("--batch", pre.batch, "Batch size")->capture_default_str();
  p->add_option("--lr", pre.lr, "Initial learning rate")->capture_default_str();
  p->add_option("--lr-decay", pre.lr_decay, "Learning-rate decay factor")->capture_default_str();
  p->add_option("--lr-every", pre.lr_every, "Epochs between decays")->capture_default_str();
  p->add_option("--dims", pre.dims, "Model dims: desk, full, or a JSON object")->capture_default_str();
  p->add_option("--seed", pre.seed, "Master seed")->capture_default_str();
  p->add_option("--max-steps", pre.max_steps, "Stop after this many global steps");
  p->add_option("--resume", pre.resume, "Continue from this checkpoint");

  CompleteArgs comp;
  auto* c = app.add_subcommand("complete", "Complete a PLY cloud with a trained model");
  c->add_option("--ckpt", comp.ckpt, "Model checkpoint")->required();
  c->add_option("--in", comp.in, "Input PLY cloud")->required();
  c->add_option("--out", comp.out, "Output prefix; writes <out>.coarse.ply and <out>.fine.ply")->required();
  c->add_option("--truth", comp.truth, "Ground-truth PLY; prints Chamfer distances");

  ProbeArgs probe;
  auto* pr = app.add_subcommand("probe", "AMI robustness table and linear probe, pretrained vs random init");
  pr->add_option("--ckpt", probe.ckpt, "Checkpoint (encoder-only or full)")->required();
  pr->add_option("--data", probe.data, "Directory of PLY clouds or OFF meshes")->required();
  pr->add_option("--labels", probe.labels, "One integer label per shape, in file-name order")->required();
  pr->add_option("--k", probe.k, "Clusters (default: number of labels)");
  pr->add_option("--seed", probe.seed, "Master seed")->capture_default_str();
  pr->add_option("--seeds", probe.seeds, "Repetitions per transform row")->capture_default_str();
  pr->add_option("--points", probe.points, "Points sampled from OFF meshes")->capture_default_str();
  pr->add_option("--test-fraction", probe.test_fraction, "Held-out share for the linear probe")->capture_default_str();
  pr->add_option("--jitter-sigma", probe.jitter_sigma, "Jitter standard deviation")->capture_default_str();
  pr->add_option("--jitter-clip", probe.jitter_clip, "Jitter clip")->capture_default_str();
  pr->add_option("--translate-range", probe.translate_range, "Translation range")->capture_default_str();
  pr->add_option("--out", probe.out, "Output CSV (default: stdout)");

  DissectArgs dis;
  auto* d = app.add_subcommand("dissect", "Network dissection of encoder channels against part labels");
  d->add_option("--ckpt", dis.ckpt, "Checkpoint (encoder-only or full)")->required();
  d->add_option("--data", dis.data, "Directory of PLY clouds")->required();
  d->add_option("--parts", dis.parts, "Directory of <name>.parts files (default: --data)");
  d->add_option("--fraction", dis.fraction, "Top activation fraction")->capture_default_str();
  d->add_option("--threshold", dis.threshold, "Detection threshold on mIoU")->capture_default_str();
  d->add_option("--concepts", dis.concepts, "Concept count (default: largest part id + 1)");
  d->add_option("--out", dis.out, "Output CSV (default: stdout)");

  LandscapeArgs land;
  auto* l = app.add_subcommand("landscape", "Filter-normalised loss landscape slice around a checkpoint");
  l->add_option("--ckpt", land.ckpt, "Full model checkpoint")->required();
  l->add_option("--data", land.data, "Dataset file from gen")->required();
  l->add_option("--grid", land.grid, "Odd grid side")->capture_default_str();
  l->add_option("--seed", land.seed, "Direction seed")->capture_default_str();
  l->add_option("--alpha", land.alpha, "Fine-loss weight (default: schedule at the checkpoint step)");
  l->add_option("--out", land.out, "Output CSV (default: stdout)");

  SynthArgs syn;
  auto* s = app.add_subcommand("synth", "Write a synthetic sphere/box/cylinder benchmark");
  s->add_option("--out", syn.out, "Output directory")->required();
  s->add_option("--count", syn.count, "Number of shapes")->capture_default_str();
  s->add_option("--points", syn.points, "Points per labelled cloud")->capture_default_str();
  s->add_option("--seed", syn.seed, "Master seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config.empty()) merge_config(sub, config);
    if (threads > 0) omp_set_num_threads(threads);
    if (sub == g) return cmd_gen(gen);
    if (sub == p) return cmd_pretrain(pre);
    if (sub == c) return cmd_complete(comp);
    if (sub == pr) return cmd_probe(probe);
    if (sub == d) return cmd_dissect(dis);
    if (sub == l) return cmd_landscape(land);
    if (sub == s) return cmd_synth(syn);
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const occo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
