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

// ztd: batch front-end for label generation, detection, evaluation,
// synthetic data, sequence preparation and latency benchmarks.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "ztd/eval.hpp"
#include "ztd/io.hpp"
#include "ztd/labelgen.hpp"
#include "ztd/postproc.hpp"
#include "ztd/svd_prep.hpp"
#include "ztd/synth.hpp"

namespace ztd::cli {
namespace {

struct CommonOptions {
  std::string out_dir;
  int jobs = 1;
};

struct DetectOptions {
  PostprocConfig post;
  int scale = 1;
  std::string suffix = ".ztdm";
};

Json postproc_json(const DetectOptions& o) {
  Json j;
  j["bin_threshold"] = o.post.bin_threshold;
  j["extend_ratio"] = o.post.extend_ratio;
  j["min_area"] = o.post.min_area;
  j["min_score"] = o.post.min_score;
  j["connectivity"] = o.post.connectivity;
  j["scale"] = o.scale;
  return j;
}

void add_postproc_flags(CLI::App* cmd, DetectOptions& o) {
  cmd->add_option("--extend-ratio", o.post.extend_ratio, "Contour extension ratio")->capture_default_str();
  cmd->add_option("--bin-threshold", o.post.bin_threshold, "Binarization threshold")->capture_default_str();
  cmd->add_option("--min-area", o.post.min_area, "Minimum component area in map cells")->capture_default_str();
  cmd->add_option("--min-score", o.post.min_score, "Minimum mean component probability")->capture_default_str();
  cmd->add_option("--connectivity", o.post.connectivity, "Component connectivity")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  cmd->add_option("--scale", o.scale, "Image pixels per map cell")
      ->check(CLI::IsMember({1, 4, 16}))
      ->capture_default_str();
  cmd->add_option("--suffix", o.suffix, "File-name suffix selecting maps in input directories")
      ->capture_default_str();
}

void add_common_flags(CLI::App* cmd, CommonOptions& o, bool out_dir_required) {
  auto* opt = cmd->add_option("--out-dir", o.out_dir, "Output directory");
  if (out_dir_required) opt->required();
  cmd->add_option("--jobs", o.jobs, "Parallel workers")->check(CLI::Range(1, 256))->capture_default_str();
}

void prepare_out_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

/// u8 containers are tri-state labels read as probability 1 on positive
/// cells; f32 containers are probability maps.
ProbabilityMap load_probability_map(const fs::path& path) {
  const Container c = read_container(path);
  if (c.dtype == DType::f32) return probability_from(c);
  const TriStateMask m = tristate_from(c);
  ProbabilityMap pm(m.height(), m.width(), 0.0f);
  auto out = pm.cells();
  const auto in = m.cells();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] == Tri::pos ? 1.0f : 0.0f;
  return pm;
}

BinaryMask load_mask(const fs::path& path) {
  const TriStateMask m = tristate_from(read_container(path));
  BinaryMask b(m.height(), m.width(), 0);
  auto out = b.cells();
  const auto in = m.cells();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] == Tri::pos ? 1 : 0;
  return b;
}

struct AnnotationSource {
  std::string format = "auto";
  int width = 0;
  int height = 0;
};

SceneSample load_scene(const fs::path& path, const AnnotationSource& src) {
  std::string format = src.format;
  const std::string name = path.filename().string();
  if (format == "auto") {
    if (name.ends_with(".jsonl")) format = "scene";
    else if (name.ends_with(".txt")) format = "quad";
    else if (name.ends_with(".poly")) format = "poly";
    else throw FormatError("cannot infer annotation format of " + name);
  }
  const std::string text = read_file(path);
  if (format == "scene") return parse_scene(text);
  SceneSample s;
  s.width = src.width;
  s.height = src.height;
  s.annotations = format == "quad" ? parse_quad_annotations(text) : parse_poly_annotations(text);
  return s;
}

std::vector<Annotation> load_ground_truth(const fs::path& path, const AnnotationSource& src) {
  AnnotationSource any = src;
  any.width = any.height = 1;
  return load_scene(path, any).annotations;
}

// ---------------------------------------------------------------------------

int cmd_synth(const CommonOptions& common, const SynthConfig& cfg, int count, std::uint64_t first) {
  cfg.validate();
  prepare_out_dir(common.out_dir);
  const fs::path dir(common.out_dir);
  Stopwatch total;
  std::vector<ItemRecord> items(static_cast<std::size_t>(count));
  parallel_for(items.size(), common.jobs, [&](std::size_t i) {
    ItemRecord& rec = items[i];
    char stem[32];
    std::snprintf(stem, sizeof stem, "scene_%05llu", static_cast<unsigned long long>(first + i));
    rec.input = stem;
    try {
      Stopwatch sw;
      const SynthSample s = synth_scene(cfg, first + i);
      rec.stage_ms["generate"] = sw.lap();
      const fs::path scene = dir / (std::string(stem) + ".jsonl");
      const fs::path image = dir / (std::string(stem) + ".image.ztdm");
      write_file(scene, format_scene(s.scene));
      write_container(image, to_container(s.image));
      rec.stage_ms["write"] = sw.lap();
      rec.outputs = {scene.string(), image.string()};
      rec.extra["instances"] = s.scene.annotations.size();
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  Json config;
  config["seed"] = cfg.seed;
  config["width"] = cfg.width;
  config["height"] = cfg.height;
  config["min_instances"] = cfg.min_instances;
  config["max_instances"] = cfg.max_instances;
  config["adjacency_probability"] = cfg.adjacency_probability;
  config["dontcare_probability"] = cfg.dontcare_probability;
  config["noise_amplitude"] = cfg.noise_amplitude;
  config["first_index"] = first;
  config["count"] = count;
  write_manifest(dir, "synth", config, items, total.lap());
  return exit_code(items);
}

int cmd_labels(const CommonOptions& common, const std::vector<std::string>& inputs,
               const AnnotationSource& src, double ratio) {
  detail::check_ratio(ratio);
  prepare_out_dir(common.out_dir);
  const fs::path dir(common.out_dir);
  const auto files = expand_inputs(inputs, {".jsonl", ".txt", ".poly"});
  Stopwatch total;
  std::vector<ItemRecord> items(files.size());
  parallel_for(items.size(), common.jobs, [&](std::size_t i) {
    ItemRecord& rec = items[i];
    rec.input = files[i].string();
    try {
      Stopwatch sw;
      const SceneSample scene = load_scene(files[i], src);
      if (scene.width <= 0 || scene.height <= 0) {
        throw ParameterError("image size unknown; pass --width and --height");
      }
      rec.stage_ms["parse"] = sw.lap();
      const LabelSet labels = gen_label_set(scene, ratio);
      rec.stage_ms["labels"] = sw.lap();
      const std::string stem = stem_of(files[i]);
      const std::pair<const char*, const TriStateMask*> outs[] = {
          {".shrink1.ztdm", &labels.shrink_full},
          {".shrink4.ztdm", &labels.shrink_quarter},
          {".coarse16.ztdm", &labels.coarse},
          {".margin4.ztdm", &labels.margin}};
      for (const auto& [suffix, mask] : outs) {
        const fs::path p = dir / (stem + suffix);
        write_container(p, to_container(*mask));
        rec.outputs.push_back(p.string());
      }
      rec.stage_ms["write"] = sw.lap();
      rec.extra["instances"] = scene.annotations.size();
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  Json config;
  config["shrink_ratio"] = ratio;
  config["format"] = src.format;
  write_manifest(dir, "labels", config, items, total.lap());
  return exit_code(items);
}

int cmd_detect(const CommonOptions& common, const std::vector<std::string>& inputs,
               const DetectOptions& opt) {
  opt.post.validate();
  prepare_out_dir(common.out_dir);
  const fs::path dir(common.out_dir);
  const auto files = expand_inputs(inputs, {opt.suffix});
  Stopwatch total;
  std::vector<ItemRecord> items(files.size());
  parallel_for(items.size(), common.jobs, [&](std::size_t i) {
    ItemRecord& rec = items[i];
    rec.input = files[i].string();
    try {
      Stopwatch sw;
      const ProbabilityMap pm = load_probability_map(files[i]);
      rec.stage_ms["read"] = sw.lap();
      const auto dets = detect(pm, opt.post, opt.scale);
      rec.stage_ms["postproc"] = sw.lap();
      const fs::path p = dir / (stem_of(files[i]) + ".det.jsonl");
      write_file(p, format_detections(dets));
      rec.stage_ms["write"] = sw.lap();
      rec.outputs.push_back(p.string());
      rec.extra["detections"] = dets.size();
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  write_manifest(dir, "detect", postproc_json(opt), items, total.lap());
  return exit_code(items);
}

int cmd_eval(const CommonOptions& common, const std::vector<std::string>& gt_inputs,
             const std::vector<std::string>& det_inputs, const AnnotationSource& src, double iou) {
  if (!(iou > 0.0 && iou < 1.0)) throw ParameterError("--iou must lie in (0, 1)");
  prepare_out_dir(common.out_dir);
  const auto gt_files = expand_inputs(gt_inputs, {".jsonl", ".txt", ".poly"});
  std::vector<fs::path> gts;
  for (const auto& p : gt_files) {
    if (!p.filename().string().ends_with(".det.jsonl")) gts.push_back(p);
  }
  std::map<std::string, fs::path> dets;
  for (const auto& p : expand_inputs(det_inputs, {".det.jsonl"})) dets[stem_of(p)] = p;

  Stopwatch total;
  std::vector<ItemRecord> items(gts.size());
  std::vector<EvalCounts> counts(gts.size());
  parallel_for(items.size(), common.jobs, [&](std::size_t i) {
    ItemRecord& rec = items[i];
    rec.input = gts[i].string();
    try {
      Stopwatch sw;
      const auto truth = load_ground_truth(gts[i], src);
      std::vector<Detection> found;
      const auto it = dets.find(stem_of(gts[i]));
      if (it != dets.end()) {
        found = parse_detections(read_file(it->second));
        rec.extra["detections_file"] = it->second.string();
      }
      rec.stage_ms["parse"] = sw.lap();
      const EvalReport r = match_detections(found, truth, iou);
      rec.stage_ms["match"] = sw.lap();
      counts[i] = r.counts;
      rec.extra["true_positives"] = r.counts.true_positives;
      rec.extra["detections"] = r.counts.detections;
      rec.extra["ground_truths"] = r.counts.ground_truths;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  EvalCounts sum;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].error.empty()) sum += counts[i];
  }
  const EvalReport report = report_from_counts(sum);
  char line[160];
  std::snprintf(line, sizeof line, "precision %.4f recall %.4f fmeasure %.4f tp %zu dets %zu gts %zu\n",
                report.precision, report.recall, report.fmeasure, sum.true_positives, sum.detections,
                sum.ground_truths);
  std::cout << line;
  if (!common.out_dir.empty()) {
    const fs::path dir(common.out_dir);
    Json j;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    j["fmeasure"] = report.fmeasure;
    j["true_positives"] = sum.true_positives;
    j["detections"] = sum.detections;
    j["ground_truths"] = sum.ground_truths;
    j["iou_threshold"] = iou;
    j["images"] = items.size();
    write_file(dir / "eval.json", j.dump() + "\n");
    write_file(dir / "eval.txt", line);
    Json config;
    config["iou_threshold"] = iou;
    write_manifest(dir, "eval", config, items, total.lap());
  }
  return exit_code(items);
}

int cmd_svdprep(const CommonOptions& common, const std::vector<std::string>& mask_inputs,
                const std::vector<std::string>& feature_inputs, int label) {
  prepare_out_dir(common.out_dir);
  const fs::path dir(common.out_dir);
  const auto masks = expand_inputs(mask_inputs, {".ztdm"});
  std::map<std::string, fs::path> features;
  for (const auto& p : expand_inputs(feature_inputs, {".ztdm"})) features[stem_of(p)] = p;
  Stopwatch total;
  std::vector<ItemRecord> items(masks.size());
  parallel_for(items.size(), common.jobs, [&](std::size_t i) {
    ItemRecord& rec = items[i];
    rec.input = masks[i].string();
    try {
      const std::string stem = stem_of(masks[i]);
      const auto it = features.find(stem);
      if (it == features.end()) throw FormatError("no feature container for sample " + stem);
      Stopwatch sw;
      const BinaryMask mask = load_mask(masks[i]);
      const FeatureGrid feat = features_from(read_container(it->second));
      rec.stage_ms["read"] = sw.lap();
      const SequenceSample s =
          make_sequence_sample(mask, feat, label == 1 ? SequenceLabel::shrink_mask : SequenceLabel::false_positive);
      rec.stage_ms["project"] = sw.lap();
      const fs::path p = dir / (stem + ".seq.jsonl");
      write_file(p, format_sequence_sample(s) + "\n");
      rec.stage_ms["write"] = sw.lap();
      rec.outputs.push_back(p.string());
      rec.extra["steps"] = s.steps.size();
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  Json config;
  config["label"] = label;
  write_manifest(dir, "svdprep", config, items, total.lap());
  return exit_code(items);
}

int cmd_bench(const CommonOptions& common, const std::vector<std::string>& inputs,
              const DetectOptions& opt, int reps) {
  opt.post.validate();
  const auto files = expand_inputs(inputs, {opt.suffix});
  if (files.empty()) throw ParameterError("bench needs at least one map");
  std::vector<ProbabilityMap> maps;
  for (const auto& f : files) maps.push_back(load_probability_map(f));
  std::vector<std::vector<Detection>> results(maps.size());
  std::vector<double> samples;
  // Untimed warm-up pass; its detections are the ones written out.
  parallel_for(maps.size(), common.jobs,
               [&](std::size_t m) { results[m] = detect(maps[m], opt.post, opt.scale); });
  for (int r = 0; r < reps; ++r) {
    for (const ProbabilityMap& pm : maps) {
      Stopwatch sw;
      const auto dets = detect(pm, opt.post, opt.scale);
      samples.push_back(sw.lap());
    }
  }
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  const double p50 = percentile(samples, 50.0), p99 = percentile(samples, 99.0);
  char line[160];
  std::snprintf(line, sizeof line, "bench maps %zu reps %d mean_ms %.3f p50_ms %.3f p99_ms %.3f\n",
                maps.size(), reps, mean, p50, p99);
  std::cout << line;
  if (!common.out_dir.empty()) {
    prepare_out_dir(common.out_dir);
    const fs::path dir(common.out_dir);
    std::vector<ItemRecord> items(files.size());
    for (std::size_t m = 0; m < files.size(); ++m) {
      items[m].input = files[m].string();
      const fs::path p = dir / (stem_of(files[m]) + ".det.jsonl");
      write_file(p, format_detections(results[m]));
      items[m].outputs.push_back(p.string());
      items[m].extra["detections"] = results[m].size();
    }
    Json config = postproc_json(opt);
    config["reps"] = reps;
    Json latency;
    latency["mean_ms"] = mean;
    latency["p50_ms"] = p50;
    latency["p99_ms"] = p99;
    latency["samples"] = samples.size();
    Json extra;
    extra["latency"] = latency;
    write_manifest(dir, "bench", config, items, mean * static_cast<double>(samples.size()), extra);
  }
  return 0;
}

}  // namespace
}  // namespace ztd::cli

int main(int argc, char** argv) {
  using namespace ztd;
  using namespace ztd::cli;
  CLI::App app{"Shrink-mask text detection toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  DetectOptions detect_opt;
  AnnotationSource src;
  double shrink_ratio = kDefaultShrinkRatio;
  std::vector<std::string> inputs, gt_inputs, det_inputs, mask_inputs, feature_inputs;

  auto* labels = app.add_subcommand("labels", "Generate label containers from annotations");
  add_common_flags(labels, common, true);
  labels->add_option("--shrink-ratio", shrink_ratio, "Shrink ratio r")->capture_default_str();
  labels->add_option("--format", src.format, "Annotation format")
      ->check(CLI::IsMember({"auto", "scene", "quad", "poly"}))
      ->capture_default_str();
  labels->add_option("--width", src.width, "Image width for text annotation formats");
  labels->add_option("--height", src.height, "Image height for text annotation formats");
  labels->add_option("inputs", inputs, "Annotation files or directories");

  auto* det = app.add_subcommand("detect", "Detect text contours in probability maps");
  add_common_flags(det, common, true);
  add_postproc_flags(det, detect_opt);
  det->add_option("inputs", inputs, "Map containers or directories");

  double iou = 0.5;
  auto* ev = app.add_subcommand("eval", "Score detections against ground truth");
  add_common_flags(ev, common, false);
  ev->add_option("--gt", gt_inputs, "Ground-truth files or directories")->required();
  ev->add_option("--det", det_inputs, "Detection files or directories")->required();
  ev->add_option("--iou", iou, "IoU threshold")->capture_default_str();
  ev->add_option("--format", src.format, "Ground-truth format")
      ->check(CLI::IsMember({"auto", "scene", "quad", "poly"}))
      ->capture_default_str();

  SynthConfig synth_cfg;
  int count = 1;
  std::uint64_t first = 0;
  auto* syn = app.add_subcommand("synth", "Generate synthetic scenes");
  add_common_flags(syn, common, true);
  syn->add_option("--seed", synth_cfg.seed, "Random seed")->capture_default_str();
  syn->add_option("--count", count, "Number of scenes")->check(CLI::Range(0, 1000000))->capture_default_str();
  syn->add_option("--first-index", first, "Index of the first scene")->capture_default_str();
  syn->add_option("--width", synth_cfg.width, "Image width")->capture_default_str();
  syn->add_option("--height", synth_cfg.height, "Image height")->capture_default_str();
  syn->add_option("--min-instances", synth_cfg.min_instances, "Minimum instances")->capture_default_str();
  syn->add_option("--max-instances", synth_cfg.max_instances, "Maximum instances")->capture_default_str();
  syn->add_option("--adjacency", synth_cfg.adjacency_probability, "Adjacent-pair probability")
      ->capture_default_str();
  syn->add_option("--dontcare", synth_cfg.dontcare_probability, "Dont-care probability")->capture_default_str();
  syn->add_option("--noise", synth_cfg.noise_amplitude, "Noise amplitude")->capture_default_str();

  int label = 1;
  auto* svd = app.add_subcommand("svdprep", "Project masked features into sequence samples");
  add_common_flags(svd, common, true);
  svd->add_option("--masks", mask_inputs, "Mask containers or directories")->required();
  svd->add_option("--features", feature_inputs, "Feature containers or directories")->required();
  svd->add_option("--label", label, "Sequence label")->check(CLI::IsMember({0, 1}))->capture_default_str();

  int reps = 100;
  auto* bench = app.add_subcommand("bench", "Measure post-processing latency");
  add_common_flags(bench, common, false);
  add_postproc_flags(bench, detect_opt);
  bench->add_option("--reps", reps, "Timed repetitions per map")->check(CLI::Range(1, 1000000))->capture_default_str();
  bench->add_option("inputs", inputs, "Map containers or directories");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*labels) return cmd_labels(common, inputs, src, shrink_ratio);
    if (*det) return cmd_detect(common, inputs, detect_opt);
    if (*ev) return cmd_eval(common, gt_inputs, det_inputs, src, iou);
    if (*syn) return cmd_synth(common, synth_cfg, count, first);
    if (*svd) return cmd_svdprep(common, mask_inputs, feature_inputs, label);
    if (*bench) return cmd_bench(common, inputs, detect_opt, reps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
