// Copyright 2026 The htlab Authors
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

#include "htlab_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "htlab/classic.hpp"
#include "htlab/error.hpp"
#include "htlab/metrics.hpp"
#include "htlab/multitone.hpp"
#include "htlab/netpbm.hpp"
#include "htlab/optim.hpp"
#include "htlab/parallel.hpp"
#include "htlab/rl.hpp"
#include "htlab/rng.hpp"
#include "htlab/spectral.hpp"
#include "htlab_cli/config_file.hpp"
#include "htlab_cli/manifest.hpp"

namespace htlab::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kMethods = {"bayer", "white", "fs", "dbs", "nn"};

struct HvsFlags {
  std::string model = "nasanen";
  int size = 11;
  double sigma = 2.0;
  double scale = 2000.0;

  void add(CLI::App& app) {
    app.add_option("--hvs-model", model, "HVS model")->check(CLI::IsMember({"gaussian", "nasanen"}));
    app.add_option("--hvs-size", size, "HVS kernel size (odd)");
    app.add_option("--hvs-sigma", sigma, "Gaussian HVS sigma");
    app.add_option("--hvs-scale", scale, "Nasanen scale S");
  }
  hvs::Config config() const {
    hvs::Config c;
    c.model = hvs::parse_model(model);
    c.size = size;
    c.sigma = sigma;
    c.scale = scale;
    try {
      c.validate();
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
    return c;
  }
  json to_json() const { return {{"model", model}, {"size", size}, {"sigma", sigma}, {"scale", scale}}; }
};

/// Method options shared by halftone, eval and spectra.
struct MethodFlags {
  std::string method;
  std::string checkpoint;
  int levels = 2;
  int bayer_order = 8;
  std::string scan = "raster";
  int max_sweeps = 20;
  HvsFlags hvs;

  void add(CLI::App& app, bool required) {
    auto* m = app.add_option("--method", method, "bayer, white, fs, dbs or nn")->check(CLI::IsMember(kMethods));
    if (required) m->required();
    app.add_option("--checkpoint", checkpoint, "Network checkpoint for --method nn");
    app.add_option("--levels", levels, "Output levels for --method nn (2 = binary)");
    app.add_option("--bayer-order", bayer_order, "Bayer matrix order (power of two)");
    app.add_option("--scan", scan, "Error diffusion scan order")->check(CLI::IsMember({"raster", "serpentine"}));
    app.add_option("--max-sweeps", max_sweeps, "DBS sweep limit");
    hvs.add(app);
  }

  void validate() const {
    if (method == "nn" && checkpoint.empty()) throw UsageError("--method nn requires --checkpoint");
    if (method != "nn" && !checkpoint.empty()) throw UsageError("--checkpoint is only used by --method nn");
    if (levels < 2) throw UsageError("--levels must be at least 2");
    if (levels > 2 && method != "nn") throw UsageError("--levels > 2 requires --method nn");
    if (max_sweeps < 0) throw UsageError("--max-sweeps must be non-negative");
  }

  json to_json() const {
    json j = {{"method", method}, {"levels", levels}};
    if (method == "bayer") j["bayer_order"] = bayer_order;
    if (method == "fs") j["scan"] = scan;
    if (method == "dbs") {
      j["max_sweeps"] = max_sweeps;
      j["hvs"] = hvs.to_json();
    }
    if (method == "nn") j["checkpoint"] = checkpoint;
    return j;
  }
};

nn::PolicyNetwork load_network(const fs::path& path) {
  const auto ck = nn::read_checkpoint(path);
  nn::PolicyNetwork net(ck.arch);
  std::copy(ck.params.begin(), ck.params.end(), net.parameters().begin());
  return net;
}

/// Halftone output plane plus the DBS trace when there is one.
struct Rendered {
  Plane plane;
  int levels = 2;
  std::vector<double> trace;
};

class Renderer {
 public:
  explicit Renderer(const MethodFlags& flags) : flags_(flags) {
    flags.validate();
    if (flags.method == "nn") net_ = load_network(flags.checkpoint);
    if (flags.method == "dbs") {
      dbs_.hvs = flags.hvs.config();
      dbs_.max_sweeps = flags.max_sweeps;
      kernel_ = hvs::build_kernel(dbs_.hvs);
    }
    if (flags.method == "bayer") {
      try {
        bayer_.emplace(classic::bayer_matrix(flags.bayer_order));
      } catch (const PreconditionError& e) {
        throw UsageError(e.what());
      }
    }
  }

  Rendered render(const ContoneImage& c, Rng& rng) const {
    const auto& m = flags_.method;
    if (m == "bayer") return {classic::ordered_dither(c, *bayer_).plane(), 2, {}};
    if (m == "white") return {classic::white_noise_threshold(c, rng).plane(), 2, {}};
    if (m == "fs") {
      const auto scan = flags_.scan == "serpentine" ? classic::Scan::serpentine : classic::Scan::raster;
      return {classic::floyd_steinberg(c, scan).plane(), 2, {}};
    }
    if (m == "dbs") {
      auto result = classic::dbs_search(c, dbs_, kernel_, rng);
      for (std::size_t i = 1; i < result.trace.size(); ++i) {
        if (result.trace[i] > result.trace[i - 1]) throw std::logic_error("DBS error trace increased");
      }
      return {result.halftone.plane(), 2, std::move(result.trace)};
    }
    if (flags_.levels == 2) return {rl::infer_halftone(*net_, c, rng).plane(), 2, {}};
    return {multitone::infer_multitone(*net_, c, multitone::LevelSet(flags_.levels), rng).plane(), flags_.levels,
            {}};
  }

 private:
  const MethodFlags& flags_;
  std::optional<nn::PolicyNetwork> net_;
  std::optional<classic::DitherArray> bayer_;
  classic::DbsConfig dbs_;
  hvs::Kernel kernel_;
};

std::vector<std::uint8_t> encode_rendered(const Rendered& r) {
  if (r.levels == 2) return encode_pbm(HalftoneImage(r.plane));
  return encode_pgm(r.plane, r.levels - 1);
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

fs::path default_manifest(const fs::path& output) { return fs::path(output.string() + ".manifest.json"); }

/// Halftone plane from a PBM, or from a PGM (multitone output or any gray map).
Plane load_halftone_plane(const fs::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '4') return parse_pbm(bytes).plane();
  return parse_pgm(bytes).plane();
}

std::vector<fs::path> list_files(const fs::path& dir, std::initializer_list<const char*> extensions) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    for (const char* e : extensions) {
      if (ext == e) files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// ---- halftone ----

struct HalftoneArgs {
  MethodFlags method;
  std::string input, output, trace, manifest;
  std::uint64_t seed = 0;
};

int cmd_halftone(const HalftoneArgs& a, std::ostream& out) {
  Renderer renderer(a.method);
  const auto c = load_pgm(a.input);
  Rng rng(a.seed);
  const auto r = renderer.render(c, rng);
  if (!a.trace.empty() && a.method.method != "dbs") throw UsageError("--trace is only produced by --method dbs");

  json config = a.method.to_json();
  config["input"] = a.input;
  RunManifest manifest("halftone", config, a.seed);
  write_file(a.output, encode_rendered(r));
  manifest.add_output(a.output);
  if (!a.trace.empty()) {
    std::string csv = "sweep,hvs_mse\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) csv += std::to_string(i) + "," + num(r.trace[i]) + "\n";
    write_text(a.trace, csv);
    manifest.add_output(a.trace);
  }
  const fs::path mpath = a.manifest.empty() ? default_manifest(a.output) : fs::path(a.manifest);
  manifest.write(mpath);
  out << "wrote " << a.output << " (" << c.width() << "x" << c.height() << ", " << a.method.method << ")\n";
  return kOk;
}

// ---- train ----

struct TrainArgs {
  std::string config, data, out_dir, resume;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  rl::TrainConfig config;
  try {
    config = load_train_config(a.config);
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  std::vector<ContoneImage> dataset;
  for (const auto& f : list_files(a.data, {".pgm"})) dataset.push_back(load_pgm(f));
  if (dataset.empty()) throw DataError("no .pgm images in " + a.data);

  rl::TrainingSession session(config, std::move(dataset));
  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  const fs::path log_path = dir / "train_log.csv";
  if (!a.resume.empty()) {
    session.restore(nn::read_checkpoint(a.resume));
    out << "resumed at iteration " << session.iteration << "\n";
  }
  const bool fresh_log = a.resume.empty() || !fs::exists(log_path);
  std::ofstream log(log_path, fresh_log ? std::ios::trunc : std::ios::app);
  if (!log) throw IoError("cannot write " + log_path.string());
  if (fresh_log) log << "iteration,reward,anisotropy_loss,binarization_gap,lr\n";

  std::vector<fs::path> checkpoints;
  while (session.iteration < config.iterations) {
    const auto d = rl::train_step(session);
    const auto it = session.iteration;
    if (it % config.log_every == 0 || it == config.iterations) {
      log << it << "," << num(d.mean_reward) << "," << num(d.anisotropy_loss) << "," << num(d.binarization_gap)
          << "," << num(d.lr) << "\n";
      out << "iter " << it << " reward " << num(d.mean_reward) << " L_AS " << num(d.anisotropy_loss) << " gap "
          << num(d.binarization_gap) << "\n";
    }
    if (config.checkpoint_every > 0 && it % config.checkpoint_every == 0 && it != config.iterations) {
      char name[40];
      std::snprintf(name, sizeof name, "checkpoint_%08lld.htnn", static_cast<long long>(it));
      nn::save_checkpoint(dir / name, session.net, session.adam, session.state());
      checkpoints.push_back(dir / name);
    }
  }
  log.close();
  const fs::path final_path = dir / "final.htnn";
  nn::save_checkpoint(final_path, session.net, session.adam, session.state());

  json cfg;
  for (const auto& line : [&] {
         std::vector<std::string> lines;
         std::string text = format_train_config(config), cur;
         for (char ch : text) {
           if (ch == '\n') {
             lines.push_back(cur);
             cur.clear();
           } else {
             cur += ch;
           }
         }
         return lines;
       }()) {
    const auto eq = line.find(" = ");
    cfg[line.substr(0, eq)] = line.substr(eq + 3);
  }
  cfg["data"] = a.data;
  if (!a.resume.empty()) cfg["resume"] = a.resume;
  RunManifest manifest("train", cfg, config.seed);
  manifest.add_output(final_path);
  manifest.add_output(log_path);
  for (const auto& p : checkpoints) manifest.add_output(p);
  manifest.write(dir / "manifest.json");
  out << "wrote " << final_path.string() << " at iteration " << session.iteration << "\n";
  return kOk;
}

// ---- eval ----

struct EvalArgs {
  MethodFlags method;
  std::string contone, halftone, output, manifest;
  std::uint64_t seed = 0;
  int hvs_size = 11;
  double gaussian_sigma = 2.0;
  double nasanen_scale = 2000.0;
};

struct EvalRow {
  std::string id;
  double psnr_nasanen = 0, psnr_gaussian = 0, ssim = 0, cssim = 0;
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1); 0 for a single row.
double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  if (!std::isfinite(m)) return std::nan("");
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const bool paired = !a.halftone.empty();
  if (paired == !a.method.method.empty()) throw UsageError("eval needs exactly one of --halftone or --method");
  std::optional<Renderer> renderer;
  if (!paired) renderer.emplace(a.method);

  const auto contones = list_files(a.contone, {".pgm"});
  if (contones.empty()) throw DataError("no .pgm images in " + a.contone);
  std::vector<fs::path> halftones;
  if (paired) {
    std::map<std::string, fs::path> by_stem;
    for (const auto& f : list_files(a.halftone, {".pbm", ".pgm"})) {
      if (!by_stem.emplace(f.stem().string(), f).second) throw DataError("two halftones named " + f.stem().string());
    }
    for (const auto& c : contones) {
      const auto it = by_stem.find(c.stem().string());
      if (it == by_stem.end()) throw DataError("no halftone paired with " + c.filename().string());
      halftones.push_back(it->second);
      by_stem.erase(it);
    }
    if (!by_stem.empty()) throw DataError("halftone without a contone: " + by_stem.begin()->second.filename().string());
  }

  metrics::Config mc;
  mc.hvs.size = a.hvs_size;
  hvs::Config nas_cfg, gauss_cfg;
  nas_cfg.model = hvs::Model::nasanen;
  nas_cfg.size = a.hvs_size;
  nas_cfg.scale = a.nasanen_scale;
  gauss_cfg.model = hvs::Model::gaussian;
  gauss_cfg.size = a.hvs_size;
  gauss_cfg.sigma = a.gaussian_sigma;
  hvs::Kernel nas, gauss;
  try {
    nas = hvs::build_kernel(nas_cfg);
    gauss = hvs::build_kernel(gauss_cfg);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }

  // one stream per file, split in file order so results do not depend on scheduling
  Rng base(a.seed);
  std::vector<Rng> streams;
  for (std::size_t i = 0; i < contones.size(); ++i) streams.push_back(base.split());

  std::vector<EvalRow> rows(contones.size());
  std::vector<std::string> failures(contones.size());
  parallel_for(contones.size(), [&](std::size_t i) {
    try {
      const auto c = load_pgm(contones[i]);
      Plane h = paired ? load_halftone_plane(halftones[i]) : renderer->render(c, streams[i]).plane;
      if (!h.same_shape(c.plane())) throw DataError("size mismatch for " + contones[i].filename().string());
      auto& r = rows[i];
      r.id = contones[i].stem().string();
      r.psnr_nasanen = metrics::psnr(metrics::hvs_mse(h, c.plane(), nas, metrics::Region::valid).mse);
      r.psnr_gaussian = metrics::psnr(metrics::hvs_mse(h, c.plane(), gauss, metrics::Region::valid).mse);
      r.ssim = metrics::ssim(h, c.plane(), mc, metrics::Region::valid);
      r.cssim = metrics::cssim(h, c.plane(), mc, metrics::Region::valid).value;
    } catch (const std::exception& e) {
      failures[i] = contones[i].filename().string() + ": " + e.what();
    }
  });
  for (const auto& f : failures) {
    if (!f.empty()) throw DataError(f);
  }

  std::string csv = "image,psnr_nasanen,psnr_gaussian,ssim,cssim\n";
  std::vector<double> cols[4];
  for (const auto& r : rows) {
    csv += r.id + "," + num(r.psnr_nasanen) + "," + num(r.psnr_gaussian) + "," + num(r.ssim) + "," + num(r.cssim) + "\n";
    cols[0].push_back(r.psnr_nasanen);
    cols[1].push_back(r.psnr_gaussian);
    cols[2].push_back(r.ssim);
    cols[3].push_back(r.cssim);
  }
  csv += "mean";
  for (const auto& c : cols) csv += "," + num(mean_of(c));
  csv += "\nstd";
  for (const auto& c : cols) csv += "," + num(std_of(c));
  csv += "\n";
  write_text(a.output, csv);

  json config = {{"contone", a.contone},
                 {"region", "valid"},
                 {"hvs_size", a.hvs_size},
                 {"gaussian_sigma", a.gaussian_sigma},
                 {"nasanen_scale", a.nasanen_scale},
                 {"std", "sample"}};
  if (paired) {
    config["halftone"] = a.halftone;
  } else {
    config["method"] = a.method.to_json();
  }
  RunManifest manifest("eval", config, a.seed);
  manifest.add_output(a.output);
  manifest.write(a.manifest.empty() ? default_manifest(a.output) : fs::path(a.manifest));
  out << "evaluated " << rows.size() << " images\n";
  return kOk;
}

// ---- spectra ----

struct SpectraArgs {
  MethodFlags method;
  std::string input, output, manifest;
  std::optional<double> gray;
  int size = 128;
  int realizations = 1;
  std::uint64_t seed = 0;
};

int cmd_spectra(const SpectraArgs& a, std::ostream& out) {
  if (a.realizations <= 0) throw UsageError("--realizations must be positive");
  const bool from_file = !a.input.empty();
  if (from_file == a.gray.has_value()) throw UsageError("spectra needs exactly one of --input or --gray");
  if (from_file && !a.method.method.empty()) throw UsageError("--method applies to --gray synthesis only");
  if (from_file && a.realizations != 1) throw UsageError("--realizations applies to --gray synthesis only");
  if (!from_file && a.method.method.empty()) throw UsageError("--gray needs --method");
  if (!from_file && (*a.gray < 0.0 || *a.gray > 1.0)) throw UsageError("--gray must lie in [0,1]");
  if (!from_file && a.size <= 0) throw UsageError("--size must be positive");

  std::optional<Renderer> renderer;
  if (!from_file) renderer.emplace(a.method);
  const std::size_t n = static_cast<std::size_t>(a.realizations);
  Rng base(a.seed);
  std::vector<Rng> streams;
  for (std::size_t i = 0; i < n; ++i) streams.push_back(base.split());

  std::vector<spectral::RapsdCurve> rapsds(n);
  std::vector<spectral::AnisotropyCurve> anis(n);
  std::optional<Plane> single;
  if (from_file) single = load_halftone_plane(a.input);
  const int w = from_file ? single->width() : a.size, h = from_file ? single->height() : a.size;
  const auto rings = spectral::ring_partition(w, h);
  parallel_for(n, [&](std::size_t i) {
    const Plane plane = from_file ? *single : renderer->render(constant_image(*a.gray, w, h), streams[i]).plane;
    const auto p = spectral::periodogram(plane);
    rapsds[i] = spectral::rapsd(p, rings);
    anis[i] = spectral::anisotropy(p, rings);
  });

  // average ring statistics over realizations
  std::string csv = "f_rho,rapsd,anisotropy,anisotropy_db\n";
  double dc = 0.0;
  for (const auto& r : rapsds) dc += r.dc;
  csv += "0," + num(dc / n) + ",,\n";
  for (std::size_t k = 0; k < rapsds[0].points.size(); ++k) {
    double power = 0.0, a_sum = 0.0;
    int defined = 0;
    for (std::size_t i = 0; i < n; ++i) {
      power += rapsds[i].points[k].power;
      if (anis[i][k].value) {
        a_sum += *anis[i][k].value;
        ++defined;
      }
    }
    csv += std::to_string(rapsds[0].points[k].radius) + "," + num(power / n) + ",";
    if (defined > 0 && a_sum > 0.0) {
      const double mean_a = a_sum / defined;
      csv += num(mean_a) + "," + num(10.0 * std::log10(mean_a));
    } else if (defined > 0) {
      csv += "0,-inf";
    } else {
      csv += ",";
    }
    csv += "\n";
  }
  write_text(a.output, csv);

  json config = {{"realizations", a.realizations}};
  if (from_file) {
    config["input"] = a.input;
  } else {
    config["gray"] = *a.gray;
    config["size"] = a.size;
    config["method"] = a.method.to_json();
  }
  RunManifest manifest("spectra", config, a.seed);
  manifest.add_output(a.output);
  manifest.write(a.manifest.empty() ? default_manifest(a.output) : fs::path(a.manifest));
  out << "wrote " << rapsds[0].points.size() << " rings to " << a.output << "\n";
  return kOk;
}

// ---- hvs dump-kernel ----

struct KernelArgs {
  HvsFlags hvs;
  std::string output, manifest;
};

int cmd_dump_kernel(const KernelArgs& a, std::ostream& out) {
  const auto kernel = hvs::build_kernel(a.hvs.config());
  write_text(a.output, hvs::kernel_to_csv(kernel));
  RunManifest manifest("hvs dump-kernel", a.hvs.to_json(), 0);
  manifest.add_output(a.output);
  manifest.write(a.manifest.empty() ? default_manifest(a.output) : fs::path(a.manifest));
  out << "wrote " << kernel.size() << "x" << kernel.size() << " kernel to " << a.output << "\n";
  return kOk;
}

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  const auto report = verify_manifest(path);
  for (const auto& p : report.problems) err << p << "\n";
  if (!report.ok()) return kDataError;
  out << "ok: " << report.checked << " outputs verified\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Halftoning with classic baselines and a reinforcement-learned policy network", "htlab"};
  app.require_subcommand(1);

  HalftoneArgs ha;
  auto* halftone = app.add_subcommand("halftone", "Halftone a PGM image");
  ha.method.add(*halftone, true);
  halftone->add_option("--input", ha.input, "Input PGM")->required();
  halftone->add_option("--output", ha.output, "Output PBM (PGM when --levels > 2)")->required();
  halftone->add_option("--seed", ha.seed, "Seed for all stochastic steps");
  halftone->add_option("--trace", ha.trace, "CSV of the DBS error trace");
  halftone->add_option("--manifest", ha.manifest, "Manifest path (default: <output>.manifest.json)");

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train the policy network");
  train->add_option("--config", ta.config, "key = value config file")->required();
  train->add_option("--data", ta.data, "Directory of training PGMs")->required();
  train->add_option("--out", ta.out_dir, "Output directory for checkpoints and log")->required();
  train->add_option("--resume", ta.resume, "Checkpoint to continue from");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Quality metrics over a directory of images");
  ea.method.add(*eval, false);
  eval->add_option("--contone", ea.contone, "Directory of contone PGMs")->required();
  eval->add_option("--halftone", ea.halftone, "Directory of halftones paired by file stem");
  eval->add_option("--output", ea.output, "Output CSV")->required();
  eval->add_option("--seed", ea.seed, "Seed for --method");
  eval->add_option("--metric-hvs-size", ea.hvs_size, "Kernel size of both metric HVS filters");
  eval->add_option("--gaussian-sigma", ea.gaussian_sigma, "Sigma of the Gaussian metric filter");
  eval->add_option("--nasanen-scale", ea.nasanen_scale, "Scale S of the Nasanen metric filter");
  eval->add_option("--manifest", ea.manifest, "Manifest path (default: <output>.manifest.json)");

  SpectraArgs sa;
  auto* spectra = app.add_subcommand("spectra", "RAPSD and anisotropy per frequency ring");
  sa.method.add(*spectra, false);
  spectra->add_option("--input", sa.input, "Halftone PBM or PGM");
  spectra->add_option("--gray", sa.gray, "Synthesize a constant gray of this level");
  spectra->add_option("--size", sa.size, "Side of the synthesized image");
  spectra->add_option("--realizations", sa.realizations, "Seeds averaged for --gray synthesis");
  spectra->add_option("--seed", sa.seed, "Base seed");
  spectra->add_option("--output", sa.output, "Output CSV")->required();
  spectra->add_option("--manifest", sa.manifest, "Manifest path (default: <output>.manifest.json)");

  KernelArgs ka;
  auto* hvs_cmd = app.add_subcommand("hvs", "HVS filter utilities");
  hvs_cmd->require_subcommand(1);
  auto* dump = hvs_cmd->add_subcommand("dump-kernel", "Write the HVS kernel as CSV");
  ka.hvs.add(*dump);
  dump->add_option("--output", ka.output, "Output CSV")->required();
  dump->add_option("--manifest", ka.manifest, "Manifest path (default: <output>.manifest.json)");

  std::string manifest_path;
  auto* verify = app.add_subcommand("verify-manifest", "Re-hash the outputs recorded in a manifest");
  verify->add_option("manifest", manifest_path, "Manifest JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*halftone) return cmd_halftone(ha, out);
    if (*train) return cmd_train(ta, out);
    if (*eval) return cmd_eval(ea, out);
    if (*spectra) return cmd_spectra(sa, out);
    if (*dump) return cmd_dump_kernel(ka, out);
    if (*verify) return cmd_verify(manifest_path, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const Error& e) {
    // library errors here come from inputs: files, checkpoints, image sizes
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace htlab::cli
