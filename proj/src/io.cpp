// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "occo/error.hpp"

namespace occo {
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
  return line;
}

bool is_blank(std::string_view line) {
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

template <typename T>
std::optional<T> parse_number(std::string_view tok) {
  T value{};
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

template <typename T>
T require_number(std::string_view tok, ErrorCode code, const char* what) {
  auto v = parse_number<T>(tok);
  if (!v) fail(code, std::string("cannot parse ") + what + " '" + std::string(tok) + "'");
  return *v;
}

}  // namespace

TriMesh parse_off(std::string_view text) {
  auto lines = split_lines(text);
  std::size_t li = 0;
  auto next_content = [&]() -> std::optional<std::string_view> {
    while (li < lines.size()) {
      std::string_view line = strip_comment(lines[li++]);
      if (!is_blank(line)) return line;
    }
    return std::nullopt;
  };

  auto first = next_content();
  if (!first) fail(ErrorCode::MalformedHeader, "empty OFF input");
  std::string_view head = *first;
  while (!head.empty() && std::isspace(static_cast<unsigned char>(head.front()))) head.remove_prefix(1);
  if (head.substr(0, 3) != "OFF") fail(ErrorCode::MalformedHeader, "missing OFF magic");
  std::string_view rest = head.substr(3);
  if (!rest.empty() && !std::isdigit(static_cast<unsigned char>(rest.front())) &&
      !std::isspace(static_cast<unsigned char>(rest.front())))
    fail(ErrorCode::MalformedHeader, "unexpected text after OFF magic");

  auto counts = tokens(rest);
  if (counts.empty()) {
    auto line = next_content();
    if (!line) fail(ErrorCode::MalformedHeader, "missing OFF counts");
    counts = tokens(*line);
  }
  if (counts.size() < 2) fail(ErrorCode::MalformedHeader, "OFF counts need vertex and face totals");
  const auto nv = require_number<std::size_t>(counts[0], ErrorCode::MalformedHeader, "vertex count");
  const auto nf = require_number<std::size_t>(counts[1], ErrorCode::MalformedHeader, "face count");

  TriMesh mesh;
  mesh.vertices.reserve(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    auto line = next_content();
    if (!line) fail(ErrorCode::MalformedHeader, "file ends before vertex " + std::to_string(v));
    auto tok = tokens(*line);
    if (tok.size() < 3) fail(ErrorCode::MalformedHeader, "vertex " + std::to_string(v) + " has fewer than 3 coordinates");
    mesh.vertices.push_back({require_number<double>(tok[0], ErrorCode::MalformedHeader, "coordinate"),
                             require_number<double>(tok[1], ErrorCode::MalformedHeader, "coordinate"),
                             require_number<double>(tok[2], ErrorCode::MalformedHeader, "coordinate")});
  }

  mesh.faces.reserve(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    auto line = next_content();
    if (!line) fail(ErrorCode::MalformedHeader, "file ends before face " + std::to_string(f));
    auto tok = tokens(*line);
    if (tok.empty()) fail(ErrorCode::MalformedHeader, "empty face line");
    const auto k = require_number<std::size_t>(tok[0], ErrorCode::MalformedHeader, "face size");
    if (k < 3) fail(ErrorCode::NonTriangleFace, "face " + std::to_string(f) + " has " + std::to_string(k) + " vertices");
    if (tok.size() < k + 1) fail(ErrorCode::MalformedHeader, "face " + std::to_string(f) + " is truncated");
    std::vector<std::uint32_t> idx(k);
    for (std::size_t j = 0; j < k; ++j) {
      idx[j] = require_number<std::uint32_t>(tok[j + 1], ErrorCode::MalformedHeader, "face index");
      if (idx[j] >= nv)
        fail(ErrorCode::IndexOutOfRange, "face " + std::to_string(f) + " references vertex " + std::to_string(idx[j]));
    }
    for (std::size_t j = 1; j + 1 < k; ++j) {
      Face tri{idx[0], idx[j], idx[j + 1]};
      // Fans over polygons with repeated corners produce slivers; drop them.
      if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) continue;
      mesh.faces.push_back(tri);
    }
  }
  return mesh;
}

std::string write_off(const TriMesh& mesh) {
  std::string out = "OFF\n" + std::to_string(mesh.vertices.size()) + " " + std::to_string(mesh.faces.size()) + " 0\n";
  char buf[96];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
    out += buf;
  }
  for (const auto& f : mesh.faces) out += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " + std::to_string(f[2]) + "\n";
  return out;
}

PointCloud parse_ply(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty() || tokens(lines[0]) != std::vector<std::string_view>{"ply"})
    fail(ErrorCode::MalformedHeader, "missing ply magic");

  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> property_types;
    std::vector<std::string> property_names;
    bool has_list = false;
  };
  std::vector<Element> elements;
  std::optional<int> label;
  std::size_t li = 1;
  bool ended = false;
  bool format_ok = false;
  for (; li < lines.size(); ++li) {
    auto tok = tokens(lines[li]);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") {
      ended = true;
      ++li;
      break;
    }
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii") fail(ErrorCode::MalformedHeader, "only ascii PLY is supported");
      format_ok = true;
    } else if (tok[0] == "comment" || tok[0] == "obj_info") {
      if (tok[0] == "comment" && tok.size() >= 3 && tok[1] == "occo_label") label = parse_number<int>(tok[2]);
    } else if (tok[0] == "element") {
      if (tok.size() != 3) fail(ErrorCode::MalformedHeader, "bad element line");
      Element e;
      e.name = std::string(tok[1]);
      e.count = require_number<std::size_t>(tok[2], ErrorCode::MalformedHeader, "element count");
      elements.push_back(std::move(e));
    } else if (tok[0] == "property") {
      if (elements.empty()) fail(ErrorCode::MalformedHeader, "property before element");
      if (tok.size() >= 2 && tok[1] == "list") {
        elements.back().has_list = true;
        elements.back().property_types.emplace_back("list");
        elements.back().property_names.emplace_back(tok.back());
      } else {
        if (tok.size() != 3) fail(ErrorCode::MalformedHeader, "bad property line");
        elements.back().property_types.emplace_back(tok[1]);
        elements.back().property_names.emplace_back(tok[2]);
      }
    } else {
      fail(ErrorCode::MalformedHeader, "unknown header keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!ended || !format_ok) fail(ErrorCode::MalformedHeader, "incomplete PLY header");

  PointCloud cloud;
  cloud.label = label;
  bool saw_vertex = false;
  for (const Element& e : elements) {
    if (e.name != "vertex") {
      // Skip one line per entry of elements we do not carry (faces, edges).
      for (std::size_t i = 0; i < e.count; ++i) {
        while (li < lines.size() && is_blank(lines[li])) ++li;
        if (li >= lines.size()) fail(ErrorCode::MalformedHeader, "file ends inside element " + e.name);
        ++li;
      }
      continue;
    }
    saw_vertex = true;
    if (e.has_list) fail(ErrorCode::MalformedHeader, "list properties on vertices are not supported");
    int axis_col[3] = {-1, -1, -1};
    bool axis_float[3] = {false, false, false};
    for (std::size_t p = 0; p < e.property_names.size(); ++p) {
      const std::string& n = e.property_names[p];
      const std::string& t = e.property_types[p];
      int axis = n == "x" ? 0 : (n == "y" ? 1 : (n == "z" ? 2 : -1));
      if (axis < 0) continue;
      axis_col[axis] = static_cast<int>(p);
      axis_float[axis] = (t == "float" || t == "float32");
    }
    for (int a = 0; a < 3; ++a)
      if (axis_col[a] < 0) fail(ErrorCode::MissingCoordinateProperty, std::string("vertex element lacks ") + "xyz"[a]);

    cloud.points.reserve(e.count);
    for (std::size_t i = 0; i < e.count; ++i) {
      while (li < lines.size() && is_blank(lines[li])) ++li;
      if (li >= lines.size()) fail(ErrorCode::MalformedHeader, "file ends before vertex " + std::to_string(i));
      auto tok = tokens(lines[li++]);
      if (tok.size() < e.property_names.size()) fail(ErrorCode::MalformedHeader, "vertex " + std::to_string(i) + " is truncated");
      double xyz[3];
      for (int a = 0; a < 3; ++a) {
        double v = require_number<double>(tok[static_cast<std::size_t>(axis_col[a])], ErrorCode::MalformedHeader, "coordinate");
        xyz[a] = axis_float[a] ? static_cast<double>(static_cast<float>(v)) : v;
      }
      cloud.points.push_back({xyz[0], xyz[1], xyz[2]});
    }
  }
  if (!saw_vertex) fail(ErrorCode::MissingCoordinateProperty, "no vertex element");
  return cloud;
}

std::string write_ply(const PointCloud& cloud) {
  std::string out = "ply\nformat ascii 1.0\n";
  if (cloud.label) out += "comment occo_label " + std::to_string(*cloud.label) + "\n";
  out += "element vertex " + std::to_string(cloud.size()) + "\n";
  out += "property float x\nproperty float y\nproperty float z\nend_header\n";
  char buf[96];
  for (const auto& p : cloud.points) {
    std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", static_cast<double>(static_cast<float>(p.x)),
                  static_cast<double>(static_cast<float>(p.y)), static_cast<double>(static_cast<float>(p.z)));
    out += buf;
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<char> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::IoError, "short write to " + path.string());
}

std::vector<int> parse_labels(std::string_view text) {
  std::vector<int> labels;
  for (auto line : split_lines(text))
    for (auto tok : tokens(line)) labels.push_back(require_number<int>(tok, ErrorCode::MalformedHeader, "label"));
  return labels;
}

}  // namespace occo
