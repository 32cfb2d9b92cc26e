#include <chrono>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "ctc/io.hpp"
#include "ctc/verify.hpp"

namespace fs = std::filesystem;
using namespace ctc;

namespace {

struct SweepSpec {
  std::string key;
  std::vector<double> values;
};

SweepSpec parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("sweep: expected KEY=START:STOP:STEP, got '" + spec + "'");
  }
  SweepSpec sweep;
  sweep.key = spec.substr(0, eq);
  double start, stop, step;
  char c1, c2;
  std::istringstream in(spec.substr(eq + 1));
  if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0) {
    throw std::invalid_argument("sweep: expected KEY=START:STOP:STEP, got '" + spec + "'");
  }
  for (double v = start; v <= stop + 1e-9; v += step) {
    sweep.values.push_back(v);
  }
  if (sweep.values.empty()) throw std::invalid_argument("sweep: empty grid in '" + spec + "'");
  return sweep;
}

std::uint64_t resolve_seed(const ParsedConfig& config, const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (config.seed) return *config.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) | rd();
}

RunManifest make_manifest(const std::string& command, const fs::path& config_path,
                          std::uint64_t seed) {
  RunManifest manifest;
  manifest.command = command;
  manifest.tool_version = kToolVersion;
  manifest.seed = seed;
  manifest.config_digest = file_digest(config_path);
  manifest.inputs.push_back({config_path.string(), manifest.config_digest});
  return manifest;
}

void add_output(RunManifest& manifest, const fs::path& path) {
  manifest.outputs.push_back({path.string(), file_digest(path)});
}

int cmd_generate(const fs::path& config_path, const fs::path& out_dir,
                 const std::optional<std::uint64_t>& seed_flag) {
  const auto started = std::chrono::steady_clock::now();
  ParsedConfig config = read_config(config_path);
  const std::uint64_t seed = resolve_seed(config, seed_flag);
  config.model.seed = seed;

  const CtcGraph graph = generate(config.model);

  fs::create_directories(out_dir);
  RunManifest manifest = make_manifest("generate", config_path, seed);
  manifest.resolved_config = model_config_json(config.model);
  write_edges(out_dir / "edges.tsv", graph);
  write_communities(out_dir / "communities.tsv", graph);
  add_output(manifest, out_dir / "edges.tsv");
  add_output(manifest, out_dir / "communities.tsv");
  manifest.wall_clock_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - started)
                               .count();
  write_text(out_dir / "manifest.json", manifest.to_json());

  std::cout << "generated n=" << graph.n << " regular=" << graph.regular_edge_count()
            << " transitive=" << graph.transitive_edge_count()
            << " self_loops=" << graph.self_loop_count
            << " multi_edges=" << graph.multi_edge_count
            << " demoted_stubs=" << graph.demoted_stub_count
            << (graph.type_counts_clamped ? " (type counts clamped)" : "") << "\n";
  return 0;
}

int cmd_analyze(const fs::path& config_path, const fs::path& out_dir,
                const std::string& sweep_spec, bool relaxed) {
  const auto started = std::chrono::steady_clock::now();
  const ParsedConfig config = read_config(config_path);
  const DegreeDistribution pmf = analysis_pmf(config);
  const BlockPartition partition = partition_pmf(pmf, config.model.blocks, !relaxed);
  const std::vector<int> h = config.model.permutation();

  fs::create_directories(out_dir);
  RunManifest manifest = make_manifest("analyze", config_path, config.model.seed);
  manifest.resolved_config = model_config_json(config.model);

  if (sweep_spec.empty()) {
    const AnalyticReport report = analyze(partition, config.model.a, config.model.q, h);
    write_text(out_dir / "report.json", analytic_report_json(report));
    add_output(manifest, out_dir / "report.json");
    std::cout << "cov=" << report.cov << " var=" << report.variance;
    if (report.rho_defined) std::cout << " rho=" << report.rho;
    std::cout << "\n";
  } else {
    const SweepSpec sweep = parse_sweep(sweep_spec);
    if (sweep.key != "a" && sweep.key != "q") {
      throw std::invalid_argument(
          "analyze: sweep key must be a or q (the closed forms fix r=1; "
          "use `bench` for NMI-versus-r curves)");
    }
    std::ostringstream csv;
    csv.precision(12);
    csv << "param,value,cov,variance,rho\n";
    for (double value : sweep.values) {
      const double a = sweep.key == "a" ? value : config.model.a;
      const double q = sweep.key == "q" ? value : config.model.q;
      const AnalyticReport report = analyze(partition, a, q, h);
      csv << sweep.key << "," << value << "," << report.cov << "," << report.variance << ",";
      if (report.rho_defined) csv << report.rho;
      csv << "\n";
    }
    write_text(out_dir / "sweep.csv", csv.str());
    add_output(manifest, out_dir / "sweep.csv");
    std::cout << "swept " << sweep.key << " over " << sweep.values.size() << " values\n";
  }
  manifest.wall_clock_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - started)
                               .count();
  write_text(out_dir / "manifest.json", manifest.to_json());
  return 0;
}

int cmd_verify(const fs::path& config_path, const fs::path& out_dir, int reps,
               const std::optional<std::uint64_t>& seed_flag, unsigned threads) {
  const auto started = std::chrono::steady_clock::now();
  ParsedConfig config = read_config(config_path);
  if (reps < 1) throw std::invalid_argument("verify: --reps must be positive");
  const std::uint64_t seed = resolve_seed(config, seed_flag);
  config.model.seed = seed;

  const DegreeDistribution pmf = analysis_pmf(config);
  const BlockPartition partition = partition_pmf(pmf, config.model.blocks, /*strict=*/false);

  VerifyOptions options;
  options.reps = reps;
  options.threads = threads;
  const VerifyReport report = run_verification(config.model, partition, options);

  fs::create_directories(out_dir);
  RunManifest manifest = make_manifest("verify", config_path, seed);
  manifest.resolved_config = model_config_json(config.model);
  write_text(out_dir / "verify.json", verify_report_json(report));
  write_text(out_dir / "clustering.csv", clustering_csv(report));
  add_output(manifest, out_dir / "verify.json");
  add_output(manifest, out_dir / "clustering.csv");
  manifest.wall_clock_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - started)
                               .count();
  write_text(out_dir / "manifest.json", manifest.to_json());

  std::cout << "quantity analytic empirical stderr z\n";
  for (const auto& q : report.quantities) {
    std::cout << q.name << " " << q.analytic << " " << q.empirical_mean << " "
              << q.stderr_mean << " " << q.z << "\n";
  }
  std::cout << "clustering cells reported: " << report.clustering.size()
            << " max deviation: " << report.max_clustering_deviation << "\n";
  std::cout << "closure pairs/wedges per graph: " << report.mean_candidate_pairs << "/"
            << report.mean_eligible_wedges << "\n";
  return 0;
}

int cmd_bench(const fs::path& config_path, const fs::path& out_dir,
              const std::string& sweep_spec, const std::string& detector, int reps,
              const std::optional<std::uint64_t>& seed_flag, const fs::path& truth_path,
              const std::vector<fs::path>& predictions) {
  const auto started = std::chrono::steady_clock::now();

  if (detector == "external") {
    if (truth_path.empty() || predictions.empty()) {
      throw std::invalid_argument("bench: detector=external needs --truth and --pred");
    }
    const std::vector<int> truth = read_partition(truth_path);
    std::ostringstream csv;
    csv.precision(12);
    csv << "file,nmi\n";
    RunManifest manifest;
    manifest.command = "bench-external";
    manifest.tool_version = kToolVersion;
    manifest.inputs.push_back({truth_path.string(), file_digest(truth_path)});
    for (const fs::path& pred : predictions) {
      const std::vector<int> partition = read_partition(pred);
      csv << pred.string() << "," << nmi(truth, partition) << "\n";
      manifest.inputs.push_back({pred.string(), file_digest(pred)});
    }
    fs::create_directories(out_dir);
    write_text(out_dir / "external_scores.csv", csv.str());
    add_output(manifest, out_dir / "external_scores.csv");
    manifest.wall_clock_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
    write_text(out_dir / "manifest.json", manifest.to_json());
    std::cout << csv.str();
    return 0;
  }
  if (detector != "fast_unfolding" && detector != "label_propagation") {
    throw std::invalid_argument("bench: unknown detector '" + detector +
                                "' (available: fast_unfolding, label_propagation, external)");
  }

  ParsedConfig config = read_config(config_path);
  if (reps < 1) throw std::invalid_argument("bench: --reps must be positive");
  const std::uint64_t seed = resolve_seed(config, seed_flag);
  const SweepSpec sweep = parse_sweep(sweep_spec.empty() ? "r=0.1:0.9:0.1" : sweep_spec);

  BenchReport report =
      run_benchmark(config.model, sweep.key, sweep.values, reps, detector, seed);
  report.config_digest = file_digest(config_path);

  fs::create_directories(out_dir);
  RunManifest manifest = make_manifest("bench", config_path, seed);
  manifest.resolved_config = model_config_json(config.model);
  write_text(out_dir / "bench_cells.csv", bench_cells_csv(report));
  write_text(out_dir / "bench_summary.csv", bench_summary_csv(report));
  add_output(manifest, out_dir / "bench_cells.csv");
  add_output(manifest, out_dir / "bench_summary.csv");
  manifest.wall_clock_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - started)
                               .count();
  write_text(out_dir / "manifest.json", manifest.to_json());

  std::cout << bench_summary_csv(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"configuration model with triadic closure: generator, analytics, benchmarks"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", sweep, detector = "fast_unfolding";
  std::string truth;
  std::vector<std::string> predictions;
  int reps = 0;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed_flag;
  std::uint64_t seed_value = 0;
  bool relaxed = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "flat key=value config file");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "output directory (default .)");
    cmd->add_option("--seed", seed_value, "override the config seed")
        ->each([&](const std::string&) { seed_flag = seed_value; });
  };

  auto* generate_cmd = app.add_subcommand("generate", "generate a CTC graph");
  add_common(generate_cmd, true);

  auto* analyze_cmd = app.add_subcommand("analyze", "evaluate the closed forms");
  add_common(analyze_cmd, true);
  analyze_cmd->add_option("--sweep", sweep, "KEY=START:STOP:STEP with KEY in {a,q}");
  analyze_cmd->add_flag("--relaxed", relaxed,
                        "allow straddling degrees (fractional block split)");

  auto* verify_cmd = app.add_subcommand("verify", "compare simulation against closed forms");
  add_common(verify_cmd, true);
  verify_cmd->add_option("--reps", reps, "replica count")->required();
  verify_cmd->add_option("--threads", threads, "worker threads (default: hardware)");

  auto* bench_cmd = app.add_subcommand("bench", "community detection benchmark");
  add_common(bench_cmd, false);
  bench_cmd->add_option("--sweep", sweep, "KEY=START:STOP:STEP with KEY in {r,a,q}");
  bench_cmd->add_option("--detector", detector,
                        "fast_unfolding | label_propagation | external");
  bench_cmd->add_option("--reps", reps, "replicas per grid cell (default 30)");
  bench_cmd->add_option("--truth", truth, "ground-truth communities.tsv (external)");
  bench_cmd->add_option("--pred", predictions, "partition files to score (external)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit with 1
  }

  try {
    if (generate_cmd->parsed()) {
      return cmd_generate(config_path, out_dir, seed_flag);
    }
    if (analyze_cmd->parsed()) {
      return cmd_analyze(config_path, out_dir, sweep, relaxed);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(config_path, out_dir, reps, seed_flag, threads);
    }
    if (bench_cmd->parsed()) {
      if (reps == 0) reps = 30;
      std::vector<fs::path> prediction_paths(predictions.begin(), predictions.end());
      if (detector != "external" && config_path.empty()) {
        throw std::invalid_argument("bench: --config is required unless detector=external");
      }
      return cmd_bench(config_path, out_dir, sweep, detector, reps, seed_flag,
                       fs::path(truth), prediction_paths);
    }
  } catch (const assumption_violation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
