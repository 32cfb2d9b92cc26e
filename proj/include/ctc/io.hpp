#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ctc/community.hpp"
#include "ctc/generator.hpp"
#include "ctc/verify.hpp"

namespace ctc {

// --- degree sequences: one integer per line, blank line between communities
DegreeSequence read_degree_sequence(const std::filesystem::path& path);
void write_degree_sequence(const std::filesystem::path& path, const DegreeSequence& seq);

// --- pmfs: "k<TAB>p_k" per line
DegreeDistribution read_pmf(const std::filesystem::path& path);
void write_pmf(const std::filesystem::path& path, const DegreeDistribution& dist);

// --- graphs: edges.tsv "u<TAB>v<TAB>kind" (R|T), communities.tsv "vertex<TAB>community"
std::string edges_to_tsv(const CtcGraph& graph);
void write_edges(const std::filesystem::path& path, const CtcGraph& graph);
void write_communities(const std::filesystem::path& path, const CtcGraph& graph);
std::vector<Edge> read_edges(const std::filesystem::path& path, int& n_out);
std::vector<int> read_partition(const std::filesystem::path& path);

// --- flat key=value config files
struct ParsedConfig {
  ModelConfig model;
  std::string h_spec = "id";
  std::optional<std::filesystem::path> degrees_file;
  std::optional<std::filesystem::path> pmf_file;
  std::optional<std::uint64_t> seed;  // set only when the file names one
};

// Throws std::invalid_argument naming the offending key.
ParsedConfig parse_config_text(const std::string& text,
                               const std::filesystem::path& base_dir = {});
ParsedConfig read_config(const std::filesystem::path& path);

// pmf used by the analytic commands: pmf_file if named, else the empirical
// pmf of degrees_file, else the configured truncated power law
DegreeDistribution analysis_pmf(const ParsedConfig& config);

// --- report serialization
std::string analytic_report_json(const AnalyticReport& report);
std::string verify_report_json(const VerifyReport& report);
std::string clustering_csv(const VerifyReport& report);    // k,kprime,count,mean,predicted
std::string bench_cells_csv(const BenchReport& report);    // param,value,rep,nmi
std::string bench_summary_csv(const BenchReport& report);  // param,value,mean_nmi,stderr

// --- digests and manifests
std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);
std::string file_digest(const std::filesystem::path& path);

struct ManifestEntry {
  std::string path;
  std::string digest;
};

struct RunManifest {
  std::string command;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string resolved_config;  // JSON object with the effective parameters
  std::vector<ManifestEntry> inputs;
  std::vector<ManifestEntry> outputs;
  double wall_clock_ms = 0;
  std::string to_json() const;  // includes a reproducible run_digest
};

// effective model parameters as a JSON object string (for manifests)
std::string model_config_json(const ModelConfig& config);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ctc
