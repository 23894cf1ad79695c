#include "imrec/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "imrec/error.hpp"
#include "imrec/io.hpp"
#include "imrec/parallel.hpp"
#include "imrec/phantom.hpp"
#include "imrec/pipelines.hpp"

namespace imrec {

namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  std::string in;
  std::string out;
  std::string log;
  std::string stage_dir;
  int threads = 1;
  std::uint64_t seed = 0;
};

struct PsfFlags {
  std::string type;
  double length = 9.0;
  double theta = 0.0;
  int hsize = 0;
  double sigma = 0.5;
  double radius = 5.0;
  double alpha = 0.2;
};

struct SolveFlags {
  std::string psf;
  double beta = 0.0;
  std::string policy = "lsd";
  double tol = 1e-4;
  double pre_tol = 1e-4;
  int max_iters = 2000;
  int irls_iters = 3;
  int sharpen_steps = 10;
  std::string method = "explicit";
  std::optional<double> eta;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

void check_threads(int threads) { require(threads >= 1, "--threads must be >= 1"); }

void check_output_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  require(parent.empty() || fs::is_directory(parent),
          "output directory '" + parent.string() + "' does not exist");
}

StepPolicy policy_from(const std::string& name) {
  const StepKind kind = parse_step_kind(name);
  require(kind != StepKind::Fixed, "--policy fixed is not available from the command line");
  return {kind, 0.0};
}

void check_stop(const SolveFlags& f) {
  require(f.tol > 0.0 && f.tol < 1.0, "--tol must be in (0, 1)");
  require(f.pre_tol > 0.0 && f.pre_tol < 1.0, "--pre-tol must be in (0, 1)");
  require(f.max_iters >= 1, "--max-iters must be >= 1");
}

void check_eta(const std::optional<double>& eta) {
  if (eta) require(std::isfinite(*eta) && *eta >= 0.0, "--eta must be finite and >= 0");
}

// One CSV per stage with records. A single-stage report writes `path` itself;
// multi-stage reports write <stem>-<stage><ext> beside it.
void write_stage_logs(const PipelineReport& report, const std::string& path, std::ostream& err) {
  if (path.empty()) return;
  const fs::path base(path);
  for (const auto& stage : report.stages) {
    fs::path target = base;
    if (report.stages.size() > 1) {
      target = base.parent_path() / (base.stem().string() + "-" + stage.name + base.extension().string());
    }
    if (stage.records.empty()) {
      err << "imrec: stage '" << stage.name << "' took no steps; no log written\n";
      continue;
    }
    write_log(stage.records, target.string());
  }
}

void write_stage_images(const PipelineReport& report, const std::string& dir) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  for (const auto& stage : report.stages) write_image(stage.output, (fs::path(dir) / (stage.name + ".pgm")).string());
}

void summarize(const PipelineReport& report, std::ostream& out) {
  for (const auto& s : report.stages) {
    out << s.name << ": " << s.iterations() << " steps, " << s.status << ", " << s.seconds << " s";
    if (!s.records.empty()) out << ", misfit " << s.records.back().misfit;
    out << '\n';
  }
  if (report.beta_used > 0.0) out << "beta: " << report.beta_used << '\n';
}

void finish(const PipelineReport& report, const CommonFlags& c, std::ostream& out, std::ostream& err) {
  write_image(report.output, c.out);
  write_stage_logs(report, c.log, err);
  write_stage_images(report, c.stage_dir);
  summarize(report, out);
}

void add_io(CLI::App* cmd, CommonFlags& c, bool with_log) {
  cmd->add_option("--in", c.in, "Input PGM image")->required();
  cmd->add_option("--out", c.out, "Output PGM image")->required();
  cmd->add_option("--threads", c.threads, "Worker threads for row-parallel loops");
  if (with_log) {
    cmd->add_option("--log", c.log, "Iteration log CSV (per stage for pipelines)");
    cmd->add_option("--stage-dir", c.stage_dir, "Directory receiving each stage's output image");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational image denoising and deblurring by gradient descent", "imrec"};
  app.require_subcommand(1);

  CommonFlags common;
  PsfFlags psf;
  SolveFlags solve;
  std::string phantom_name = "portrait";
  int phantom_side = 256;
  double eta = 0.0;
  std::string ref;

  auto* psf_cmd = app.add_subcommand("psf", "Write a point spread function as a text matrix");
  psf_cmd->add_option("--type", psf.type, "motion, log, disk, unsharp, gaussian, laplacian, delta")->required();
  psf_cmd->add_option("--len", psf.length, "motion length in pixels");
  psf_cmd->add_option("--theta", psf.theta, "motion angle in degrees, counterclockwise");
  psf_cmd->add_option("--hsize", psf.hsize, "gaussian/log window side (odd)");
  psf_cmd->add_option("--sigma", psf.sigma, "gaussian/log standard deviation");
  psf_cmd->add_option("--radius", psf.radius, "disk radius");
  psf_cmd->add_option("--alpha", psf.alpha, "unsharp/laplacian shape parameter in [0, 1]");
  psf_cmd->add_option("--out", common.out, "Output text file")->required();

  auto* phantom_cmd = app.add_subcommand("phantom", "Write a synthetic test image");
  phantom_cmd->add_option("--name", phantom_name, "portrait, photographer or blocks");
  phantom_cmd->add_option("--side", phantom_side, "Lattice side (pixels)");
  phantom_cmd->add_option("--seed", common.seed, "Texture seed (0 = built-in default)");
  phantom_cmd->add_option("--out", common.out, "Output PGM image")->required();

  auto* blur_cmd = app.add_subcommand("blur", "Blur an image, optionally adding noise");
  add_io(blur_cmd, common, false);
  blur_cmd->add_option("--psf", solve.psf, "PSF spec, e.g. motion:15:30 or gaussian:512:1.5")->required();
  blur_cmd->add_option("--eta", eta, "Noise level in percent added after blurring");
  blur_cmd->add_option("--seed", common.seed, "Noise seed");

  auto* noise_cmd = app.add_subcommand("noise", "Add seeded Gaussian noise of eta percent");
  add_io(noise_cmd, common, false);
  noise_cmd->add_option("--eta", eta, "Noise level in percent")->required();
  noise_cmd->add_option("--seed", common.seed, "Noise seed");

  auto* denoise_cmd = app.add_subcommand("denoise", "Denoise by explicit, hybrid or Tukey-sharpened descent");
  add_io(denoise_cmd, common, true);
  denoise_cmd->add_option("--method", solve.method, "explicit, hybrid or tukey");
  denoise_cmd->add_option("--policy", solve.policy, "Step policy: sd, lsd or hlsd");
  denoise_cmd->add_option("--tol", solve.tol, "Relative-change tolerance of the explicit stage");
  denoise_cmd->add_option("--max-iters", solve.max_iters, "Step budget of the explicit stage");
  denoise_cmd->add_option("--irls-iters", solve.irls_iters, "Outer IRLS iterations (hybrid)");
  denoise_cmd->add_option("--sharpen-steps", solve.sharpen_steps, "Tukey SD steps (tukey)");
  denoise_cmd->add_option("--eta", solve.eta, "Declared noise level in percent; 0 returns the input");

  auto* deblur_cmd = app.add_subcommand("deblur", "Tikhonov deblurring by gradient descent from m0 = b");
  add_io(deblur_cmd, common, true);
  deblur_cmd->add_option("--psf", solve.psf, "PSF spec, e.g. motion:15:30")->required();
  deblur_cmd->add_option("--beta", solve.beta, "Regularization parameter (1e-3, 1e-4, 1e-5 are typical)")->required();
  deblur_cmd->add_option("--policy", solve.policy, "Step policy: sd, lsd or hlsd");
  deblur_cmd->add_option("--tol", solve.tol, "Relative-change tolerance");
  deblur_cmd->add_option("--max-iters", solve.max_iters, "Step budget");

  auto* restore_cmd = app.add_subcommand("restore", "Split restoration: denoise, deblur, sharpen");
  add_io(restore_cmd, common, true);
  restore_cmd->add_option("--psf", solve.psf, "PSF spec")->required();
  restore_cmd->add_option("--beta", solve.beta, "Regularization parameter of the deblur stage")->required();
  restore_cmd->add_option("--policy", solve.policy, "Step policy of the denoise and deblur stages");
  restore_cmd->add_option("--pre-tol", solve.pre_tol, "Tolerance of the pre-denoise stage");
  restore_cmd->add_option("--tol", solve.tol, "Tolerance of the deblur stage");
  restore_cmd->add_option("--max-iters", solve.max_iters, "Step budget per descent stage");
  restore_cmd->add_option("--sharpen-steps", solve.sharpen_steps, "Tukey SD steps");
  restore_cmd->add_option("--eta", solve.eta, "Declared noise level in percent; 0 skips pre-denoising");

  auto* metrics_cmd = app.add_subcommand("metrics", "Compare an image against a reference");
  metrics_cmd->add_option("--in", common.in, "Image to evaluate")->required();
  metrics_cmd->add_option("--ref", ref, "Reference image")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    check_threads(common.threads);
    set_num_threads(common.threads);

    if (psf_cmd->parsed()) {
      PsfParams p;
      const std::string t = psf.type;
      if (t == "motion") p.kind = PsfKind::Motion;
      else if (t == "log") p.kind = PsfKind::Log;
      else if (t == "disk") p.kind = PsfKind::Disk;
      else if (t == "unsharp") p.kind = PsfKind::Unsharp;
      else if (t == "gaussian") p.kind = PsfKind::Gaussian;
      else if (t == "laplacian") p.kind = PsfKind::Laplacian;
      else if (t == "delta") p.kind = PsfKind::Delta;
      else throw ParameterError("unknown --type '" + t + "'");
      p.length = psf.length;
      p.theta_deg = psf.theta;
      p.hsize = psf.hsize > 0 ? psf.hsize : (p.kind == PsfKind::Log ? 5 : 3);
      p.sigma = psf.sigma;
      p.radius = psf.radius;
      p.alpha = psf.alpha;
      check_output_parent(common.out);
      write_psf(make_psf(p), common.out);
      return kExitOk;
    }

    if (phantom_cmd->parsed()) {
      require(phantom_side >= 8, "--side must be >= 8");
      check_output_parent(common.out);
      write_image(phantom::by_name(phantom_name, phantom_side, common.seed), common.out);
      return kExitOk;
    }

    if (metrics_cmd->parsed()) {
      const Image m = read_image(common.in);
      const Image r = read_image(ref);
      if (!m.same_lattice(r)) throw DimensionError("metrics: images differ in size");
      out.precision(10);
      out << "misfit=" << misfit(m, r) << '\n'
          << "psnr=" << psnr(m, r) << '\n'
          << "rel_err=" << relative_error(m, r) << '\n'
          << "mean=" << mean(m) << '\n'
          << "rms=" << norm(m) / m.side() << '\n';
      return kExitOk;
    }

    check_output_parent(common.out);
    if (!common.log.empty()) check_output_parent(common.log);

    if (noise_cmd->parsed() || blur_cmd->parsed()) {
      require(std::isfinite(eta) && eta >= 0.0, "--eta must be finite and >= 0");
      Image m = read_image(common.in);
      if (blur_cmd->parsed()) m = forward_map(m, embed(psf_from_spec(solve.psf, m.side()), m.side()));
      write_image(add_gaussian_noise(m, {eta, common.seed}), common.out);
      return kExitOk;
    }

    check_stop(solve);
    check_eta(solve.eta);
    const StepPolicy policy = policy_from(solve.policy);
    const bool noise_free = solve.eta && *solve.eta == 0.0;

    if (denoise_cmd->parsed()) {
      require(solve.method == "explicit" || solve.method == "hybrid" || solve.method == "tukey",
              "--method must be explicit, hybrid or tukey");
      require(solve.irls_iters >= 0, "--irls-iters must be >= 0");
      require(solve.sharpen_steps >= 0, "--sharpen-steps must be >= 0");
      const Image b = read_image(common.in);
      PipelineReport report;
      if (noise_free) {
        report.output = b;
      } else if (solve.method == "explicit") {
        report = denoise_explicit(b, policy, {solve.tol, solve.max_iters});
      } else if (solve.method == "hybrid") {
        HybridOptions o;
        o.policy = policy;
        o.pre_tol = solve.tol;
        o.pre_max_iters = solve.max_iters;
        o.irls_iters = solve.irls_iters;
        report = denoise_hybrid(b, o);
      } else {
        report = denoise_explicit(b, policy, {solve.tol, solve.max_iters});
        PipelineReport sharp = sharpen_tukey(report.output, solve.sharpen_steps);
        report.stages.push_back(std::move(sharp.stages.front()));
        report.output = sharp.output;
      }
      finish(report, common, out, err);
      return kExitOk;
    }

    require(solve.beta > 0.0 && std::isfinite(solve.beta), "--beta must be finite and > 0");

    if (deblur_cmd->parsed()) {
      const Image b = read_image(common.in);
      const PsfKernel kernel = psf_from_spec(solve.psf, b.side());
      finish(deblur(b, kernel, solve.beta, policy, {solve.tol, solve.max_iters}), common, out, err);
      return kExitOk;
    }

    if (restore_cmd->parsed()) {
      require(solve.sharpen_steps >= 0, "--sharpen-steps must be >= 0");
      const Image b = read_image(common.in);
      const PsfKernel kernel = psf_from_spec(solve.psf, b.side());
      SplitOptions o;
      o.policy = policy;
      o.pre_tol = solve.pre_tol;
      o.pre_max_iters = solve.max_iters;
      o.deblur_stop = {solve.tol, solve.max_iters};
      o.sharpen_steps = solve.sharpen_steps;
      o.noise_free = noise_free;
      finish(restore_split(b, kernel, solve.beta, o), common, out, err);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "imrec: error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace imrec
