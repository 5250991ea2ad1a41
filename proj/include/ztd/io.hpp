// Copyright 2026 The ZTD Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// File formats: the ZTDM tensor container, JSON-lines polygon records and
// the ICDAR-style quad and polygon annotation text formats.

#pragma once

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ztd/errors.hpp"
#include "ztd/geometry.hpp"
#include "ztd/mask.hpp"
#include "ztd/scene.hpp"
#include "ztd/svd_prep.hpp"

namespace ztd {

// ---------------------------------------------------------------------------
// Tensor container
// ---------------------------------------------------------------------------

enum class DType : std::uint8_t { u8 = 0, f32 = 1 };

inline constexpr char kContainerMagic[4] = {'Z', 'T', 'D', 'M'};
inline constexpr std::uint16_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderSize = 4 + 2 + 1 + 4 + 4 + 4;

/// Channel-major, row-major tensor. Exactly one of `u8` and `f32` holds
/// channels * height * width values, matching `dtype`.
struct Container {
  DType dtype = DType::u8;
  std::uint32_t channels = 1;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::vector<std::uint8_t> u8;
  std::vector<float> f32;

  std::size_t count() const {
    return static_cast<std::size_t>(channels) * height * width;
  }
  friend bool operator==(const Container&, const Container&) = default;
};

namespace detail {

inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}

inline std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + k])) << (8 * k);
  return v;
}

inline void check_container(const Container& c) {
  if (c.channels == 0 || c.height == 0 || c.width == 0) {
    throw FormatError("container dimensions must be positive");
  }
  const std::size_t want = c.count();
  const std::size_t have = c.dtype == DType::u8 ? c.u8.size() : c.f32.size();
  const std::size_t other = c.dtype == DType::u8 ? c.f32.size() : c.u8.size();
  if (have != want || other != 0) throw FormatError("container payload does not match its dimensions");
}

inline std::uint32_t to_u32(int v) { return static_cast<std::uint32_t>(v); }

}  // namespace detail

inline std::string encode_container(const Container& c) {
  detail::check_container(c);
  std::string out(kContainerMagic, 4);
  detail::put_u16(out, kContainerVersion);
  out.push_back(static_cast<char>(c.dtype));
  detail::put_u32(out, c.channels);
  detail::put_u32(out, c.height);
  detail::put_u32(out, c.width);
  if (c.dtype == DType::u8) {
    out.append(reinterpret_cast<const char*>(c.u8.data()), c.u8.size());
  } else {
    out.reserve(out.size() + 4 * c.f32.size());
    for (float v : c.f32) detail::put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

inline Container decode_container(std::string_view in) {
  if (in.size() < 4 || std::memcmp(in.data(), kContainerMagic, 4) != 0) {
    throw FormatError("bad container magic");
  }
  if (in.size() < kContainerHeaderSize) throw FormatError("truncated container header");
  const auto version = static_cast<std::uint16_t>(static_cast<unsigned char>(in[4]) |
                                                  static_cast<unsigned char>(in[5]) << 8);
  if (version != kContainerVersion) {
    throw FormatError("unsupported container version " + std::to_string(version));
  }
  const auto dtype = static_cast<unsigned char>(in[6]);
  if (dtype > 1) throw FormatError("unknown container dtype " + std::to_string(dtype));
  Container c;
  c.dtype = static_cast<DType>(dtype);
  c.channels = detail::get_u32(in, 7);
  c.height = detail::get_u32(in, 11);
  c.width = detail::get_u32(in, 15);
  if (c.channels == 0 || c.height == 0 || c.width == 0) {
    throw FormatError("container dimensions must be positive");
  }
  const std::size_t elem = c.dtype == DType::u8 ? 1 : 4;
  const std::size_t payload = in.size() - kContainerHeaderSize;
  const std::uint64_t want = static_cast<std::uint64_t>(c.channels) * c.height * c.width * elem;
  if (want > payload) throw FormatError("truncated container payload");
  if (want < payload) throw FormatError("trailing bytes after container payload");
  const char* data = in.data() + kContainerHeaderSize;
  if (c.dtype == DType::u8) {
    c.u8.assign(reinterpret_cast<const std::uint8_t*>(data), reinterpret_cast<const std::uint8_t*>(data) + payload);
  } else {
    c.f32.resize(payload / 4);
    for (std::size_t i = 0; i < c.f32.size(); ++i) {
      c.f32[i] = std::bit_cast<float>(detail::get_u32(in, kContainerHeaderSize + 4 * i));
    }
  }
  return c;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError("cannot write " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw FormatError("write failed for " + path.string());
}

inline Container read_container(const std::filesystem::path& path) {
  return decode_container(read_file(path));
}

inline void write_container(const std::filesystem::path& path, const Container& c) {
  write_file(path, encode_container(c));
}

inline Container to_container(const TriStateMask& m) {
  Container c{DType::u8, 1, detail::to_u32(m.height()), detail::to_u32(m.width()), {}, {}};
  c.u8.reserve(m.size());
  for (Tri v : m.cells()) c.u8.push_back(static_cast<std::uint8_t>(v));
  return c;
}

template <typename Tag>
Container to_container(const Raster<std::uint8_t, Tag>& m) {
  const auto cells = m.cells();
  return {DType::u8, 1, detail::to_u32(m.height()), detail::to_u32(m.width()),
          {cells.begin(), cells.end()}, {}};
}

inline Container to_container(const ProbabilityMap& m) {
  const auto cells = m.cells();
  return {DType::f32, 1, detail::to_u32(m.height()), detail::to_u32(m.width()),
          {}, {cells.begin(), cells.end()}};
}

inline Container to_container(const FeatureGrid& g) {
  return {DType::f32, detail::to_u32(g.channels()), detail::to_u32(g.height()),
          detail::to_u32(g.width()), {}, {g.values().begin(), g.values().end()}};
}

namespace detail {

inline void require_plane(const Container& c, DType dtype, const char* what) {
  check_container(c);
  if (c.dtype != dtype) throw FormatError(std::string(what) + ": wrong container dtype");
  if (c.channels != 1) throw FormatError(std::string(what) + ": expected one channel");
  constexpr auto kMax = static_cast<std::uint32_t>(std::numeric_limits<int>::max());
  if (c.height > kMax || c.width > kMax) throw FormatError(std::string(what) + ": dimensions too large");
}

}  // namespace detail

inline TriStateMask tristate_from(const Container& c) {
  detail::require_plane(c, DType::u8, "tri-state mask");
  TriStateMask m(static_cast<int>(c.height), static_cast<int>(c.width), Tri::neg);
  auto out = m.cells();
  for (std::size_t i = 0; i < c.u8.size(); ++i) {
    const std::uint8_t v = c.u8[i];
    if (v != 0 && v != 1 && v != 255) throw FormatError("tri-state mask: invalid value " + std::to_string(v));
    out[i] = static_cast<Tri>(v);
  }
  return m;
}

inline BinaryMask binary_from(const Container& c) {
  detail::require_plane(c, DType::u8, "binary mask");
  for (std::uint8_t v : c.u8) {
    if (v > 1) throw FormatError("binary mask: invalid value " + std::to_string(v));
  }
  return BinaryMask(static_cast<int>(c.height), static_cast<int>(c.width), c.u8);
}

inline GrayImage image_from(const Container& c) {
  detail::require_plane(c, DType::u8, "image");
  return GrayImage(static_cast<int>(c.height), static_cast<int>(c.width), c.u8);
}

inline ProbabilityMap probability_from(const Container& c) {
  detail::require_plane(c, DType::f32, "probability map");
  for (float v : c.f32) {
    if (!(v >= 0.0f && v <= 1.0f)) throw FormatError("probability map: value outside [0, 1]");
  }
  return ProbabilityMap(static_cast<int>(c.height), static_cast<int>(c.width), c.f32);
}

inline FeatureGrid features_from(const Container& c) {
  detail::check_container(c);
  if (c.dtype != DType::f32) throw FormatError("feature grid: wrong container dtype");
  constexpr auto kMax = static_cast<std::uint32_t>(std::numeric_limits<int>::max());
  if (c.channels > kMax || c.height > kMax || c.width > kMax) {
    throw FormatError("feature grid: dimensions too large");
  }
  try {
    return FeatureGrid(static_cast<int>(c.channels), static_cast<int>(c.height),
                       static_cast<int>(c.width), c.f32);
  } catch (const ParameterError& e) {
    throw FormatError(std::string("feature grid: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// JSON-lines polygon records
// ---------------------------------------------------------------------------

inline constexpr double kCoordinateScale = 1000.0;  // three decimal places

/// Rounds to three decimal places; -0 becomes 0.
inline double round_coordinate(double v) { return std::round(v * kCoordinateScale) / kCoordinateScale + 0.0; }

/// One line record: a polygon with an optional score, dont-care flag and
/// transcription.
struct PolygonRecord {
  std::vector<Point> points;
  std::optional<double> score;
  std::optional<bool> dontcare;
  std::optional<std::string> transcription;

  friend bool operator==(const PolygonRecord&, const PolygonRecord&) = default;
};

inline std::string format_record(const PolygonRecord& r) {
  nlohmann::ordered_json j;
  auto points = nlohmann::ordered_json::array();
  for (const Point& p : r.points) points.push_back({round_coordinate(p.x), round_coordinate(p.y)});
  j["points"] = std::move(points);
  if (r.score) j["score"] = round_coordinate(*r.score);
  if (r.dontcare) j["dontcare"] = *r.dontcare;
  if (r.transcription) j["transcription"] = *r.transcription;
  return j.dump();
}

inline PolygonRecord parse_record(std::string_view line, std::size_t line_no = 0) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!j.is_object()) throw FormatError("record must be a JSON object", line_no);
  const auto points = j.find("points");
  if (points == j.end() || !points->is_array()) throw FormatError("record lacks a points array", line_no);
  PolygonRecord r;
  for (const auto& p : *points) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw FormatError("each point must be [x, y]", line_no);
    }
    r.points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  if (r.points.size() < 3) throw FormatError("polygon needs at least 3 points", line_no);
  if (const auto s = j.find("score"); s != j.end()) {
    if (!s->is_number()) throw FormatError("score must be a number", line_no);
    r.score = s->get<double>();
  }
  if (const auto d = j.find("dontcare"); d != j.end()) {
    if (!d->is_boolean()) throw FormatError("dontcare must be a boolean", line_no);
    r.dontcare = d->get<bool>();
  }
  if (const auto t = j.find("transcription"); t != j.end()) {
    if (!t->is_string()) throw FormatError("transcription must be a string", line_no);
    r.transcription = t->get<std::string>();
  }
  return r;
}

namespace detail {

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    f(line, line_no);
  }
}

inline Polygon record_polygon(std::vector<Point> points, std::size_t line_no) {
  try {
    return Polygon(std::move(points));
  } catch (const GeometryError& e) {
    throw FormatError(e.what(), line_no);
  }
}

}  // namespace detail

inline std::string format_detections(const std::vector<Detection>& dets) {
  std::string out;
  for (const Detection& d : dets) {
    out += format_record({d.contour.vertices(), d.score, std::nullopt, std::nullopt});
    out += '\n';
  }
  return out;
}

inline std::vector<Detection> parse_detections(std::string_view text) {
  std::vector<Detection> out;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    PolygonRecord r = parse_record(line, line_no);
    if (!r.score) throw FormatError("detection record lacks a score", line_no);
    out.push_back({detail::record_polygon(std::move(r.points), line_no), *r.score});
  });
  return out;
}

inline std::string format_annotations(const std::vector<Annotation>& anns) {
  std::string out;
  for (const Annotation& a : anns) {
    out += format_record({a.polygon.vertices(), std::nullopt, a.dontcare, a.transcription});
    out += '\n';
  }
  return out;
}

inline std::vector<Annotation> parse_annotations_jsonl(std::string_view text) {
  std::vector<Annotation> out;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    PolygonRecord r = parse_record(line, line_no);
    out.push_back({detail::record_polygon(std::move(r.points), line_no),
                   r.transcription.value_or(""), r.dontcare.value_or(false)});
  });
  return out;
}

// ---------------------------------------------------------------------------
// Text annotation formats
// ---------------------------------------------------------------------------

inline constexpr std::string_view kDontCareText = "###";

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    const std::size_t c = line.find(',');
    out.push_back(line.substr(0, c));
    if (c == std::string_view::npos) break;
    line.remove_prefix(c + 1);
  }
  return out;
}

inline std::string join_fields(const std::vector<std::string_view>& fields, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < fields.size(); ++i) {
    if (i > from) out += ',';
    out += fields[i];
  }
  return out;
}

}  // namespace detail

/// Lines of "x1,y1,x2,y2,x3,y3,x4,y4,transcription"; "###" marks dont-care.
/// The transcription may contain commas.
inline std::vector<Annotation> parse_quad_annotations(std::string_view text) {
  std::vector<Annotation> out;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto fields = detail::split_commas(line);
    if (fields.size() < 9) {
      throw FormatError("expected 8 coordinates and a transcription, got " +
                            std::to_string(fields.size()) + " fields",
                        line_no);
    }
    std::vector<Point> points;
    for (int i = 0; i < 4; ++i) {
      const auto x = detail::parse_number(fields[2 * i]);
      const auto y = detail::parse_number(fields[2 * i + 1]);
      if (!x || !y) throw FormatError("invalid coordinate", line_no);
      points.push_back({*x, *y});
    }
    std::string transcription = detail::join_fields(fields, 8);
    const bool dontcare = detail::trim(transcription) == kDontCareText;
    out.push_back({detail::record_polygon(std::move(points), line_no), std::move(transcription), dontcare});
  });
  return out;
}

/// Lines of "x1,y1,...,xn,yn" with n >= 3, optionally followed by
/// ",####transcription". A transcription of "###" marks dont-care.
inline std::vector<Annotation> parse_poly_annotations(std::string_view text) {
  std::vector<Annotation> out;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    std::string_view coords = line;
    std::string transcription;
    if (const std::size_t tag = line.find("####"); tag != std::string_view::npos) {
      coords = line.substr(0, tag);
      transcription = std::string(line.substr(tag + 4));
      if (coords.empty() || coords.back() != ',') throw FormatError("transcription must follow a comma", line_no);
      coords.remove_suffix(1);
    }
    const auto fields = detail::split_commas(coords);
    std::vector<double> values;
    for (const auto f : fields) {
      const auto v = detail::parse_number(f);
      if (!v) throw FormatError("invalid coordinate '" + std::string(detail::trim(f)) + "'", line_no);
      values.push_back(*v);
    }
    if (values.size() % 2 != 0) throw FormatError("odd number of coordinates", line_no);
    if (values.size() < 6) throw FormatError("polygon needs at least 3 points", line_no);
    std::vector<Point> points;
    for (std::size_t i = 0; i < values.size(); i += 2) points.push_back({values[i], values[i + 1]});
    const bool dontcare = transcription == kDontCareText;
    out.push_back({detail::record_polygon(std::move(points), line_no), std::move(transcription), dontcare});
  });
  return out;
}

// ---------------------------------------------------------------------------
// Scene files
// ---------------------------------------------------------------------------

/// A JSON-lines scene: a header line {"width":W,"height":H} followed by one
/// annotation record per line.
inline std::string format_scene(const SceneSample& s) {
  nlohmann::ordered_json header;
  header["width"] = s.width;
  header["height"] = s.height;
  return header.dump() + "\n" + format_annotations(s.annotations);
}

inline SceneSample parse_scene(std::string_view text) {
  SceneSample s;
  bool have_header = false;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (have_header) {
      PolygonRecord r = parse_record(line, line_no);
      s.annotations.push_back({detail::record_polygon(std::move(r.points), line_no),
                               r.transcription.value_or(""), r.dontcare.value_or(false)});
      return;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    const auto extent = [&](const char* key) {
      const auto it = j.is_object() ? j.find(key) : j.end();
      if (it == j.end() || !it->is_number_integer() || it->get<long long>() <= 0 ||
          it->get<long long>() > std::numeric_limits<int>::max()) {
        throw FormatError("scene header must carry positive integer width and height", line_no);
      }
      return static_cast<int>(it->get<long long>());
    };
    s.width = extent("width");
    s.height = extent("height");
    have_header = true;
  });
  if (!have_header) throw FormatError("scene file lacks a header line");
  return s;
}

// ---------------------------------------------------------------------------
// Sequence samples
// ---------------------------------------------------------------------------

inline std::string format_sequence_sample(const SequenceSample& s) {
  nlohmann::ordered_json j;
  j["label"] = static_cast<int>(s.label);
  j["steps"] = s.steps;
  return j.dump();
}

}  // namespace ztd
