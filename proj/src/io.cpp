#include "ctc/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ctc {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

DegreeSequence read_degree_sequence(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  DegreeSequence seq;
  std::vector<int> current;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string value = trim(line);
    if (value.empty()) {
      if (!current.empty()) {
        seq.communities.push_back(std::move(current));
        current = {};
      }
      continue;
    }
    current.push_back(std::stoi(value));
  }
  if (!current.empty()) seq.communities.push_back(std::move(current));
  if (seq.communities.empty()) {
    throw std::invalid_argument("degree sequence file is empty: " + path.string());
  }
  return seq;
}

void write_degree_sequence(const std::filesystem::path& path, const DegreeSequence& seq) {
  std::ostringstream out;
  for (std::size_t c = 0; c < seq.communities.size(); ++c) {
    if (c > 0) out << "\n";
    for (int k : seq.communities[c]) out << k << "\n";
  }
  write_text(path, out.str());
}

DegreeDistribution read_pmf(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::map<int, double> probs;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    std::istringstream fields(entry);
    int k;
    double p;
    if (!(fields >> k >> p)) {
      throw std::invalid_argument("pmf file: malformed line '" + entry + "'");
    }
    probs[k] += p;
  }
  return DegreeDistribution::from_pmf(std::move(probs));
}

void write_pmf(const std::filesystem::path& path, const DegreeDistribution& dist) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [k, p] : dist.probabilities) {
    out << k << "\t" << p << "\n";
  }
  write_text(path, out.str());
}

std::string edges_to_tsv(const CtcGraph& graph) {
  std::ostringstream out;
  for (const Edge& e : graph.edges) {
    out << e.u << "\t" << e.v << "\t" << (e.kind == EdgeKind::Regular ? "R" : "T") << "\n";
  }
  return out.str();
}

void write_edges(const std::filesystem::path& path, const CtcGraph& graph) {
  write_text(path, edges_to_tsv(graph));
}

void write_communities(const std::filesystem::path& path, const CtcGraph& graph) {
  std::ostringstream out;
  for (int v = 0; v < graph.n; ++v) {
    out << v << "\t" << graph.community[static_cast<std::size_t>(v)] << "\n";
  }
  write_text(path, out.str());
}

std::vector<Edge> read_edges(const std::filesystem::path& path, int& n_out) {
  const std::string text = read_text(path);
  std::istringstream in(text);
  std::string line;
  std::vector<Edge> edges;
  int max_vertex = -1;
  while (std::getline(in, line)) {
    const std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    std::istringstream fields(entry);
    int u, v;
    std::string kind;
    if (!(fields >> u >> v)) {
      throw std::invalid_argument("edge file: malformed line '" + entry + "'");
    }
    fields >> kind;
    const EdgeKind ek = (kind == "T") ? EdgeKind::Transitive : EdgeKind::Regular;
    edges.push_back({u, v, ek});
    max_vertex = std::max({max_vertex, u, v});
  }
  n_out = max_vertex + 1;
  return edges;
}

std::vector<int> read_partition(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::istringstream in(text);
  std::string line;
  std::map<int, int> by_vertex;
  int max_vertex = -1;
  while (std::getline(in, line)) {
    const std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    std::istringstream fields(entry);
    int v, c;
    if (!(fields >> v >> c)) {
      throw std::invalid_argument("partition file: malformed line '" + entry + "'");
    }
    by_vertex[v] = c;
    max_vertex = std::max(max_vertex, v);
  }
  if (by_vertex.empty()) {
    throw std::invalid_argument("partition file is empty: " + path.string());
  }
  std::vector<int> partition(static_cast<std::size_t>(max_vertex) + 1, -1);
  for (const auto& [v, c] : by_vertex) {
    if (v < 0) throw std::invalid_argument("partition file: negative vertex id");
    partition[static_cast<std::size_t>(v)] = c;
  }
  for (std::size_t v = 0; v < partition.size(); ++v) {
    if (partition[v] == -1) {
      throw std::invalid_argument("partition file: vertex " + std::to_string(v) +
                                  " is unlabeled");
    }
  }
  return partition;
}

ParsedConfig parse_config_text(const std::string& text,
                               const std::filesystem::path& base_dir) {
  ParsedConfig parsed;
  int c = -1;
  std::vector<int> sizes;

  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string entry = trim(line);
    const auto comment = entry.find('#');
    if (comment != std::string::npos) entry = trim(entry.substr(0, comment));
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_number) +
                                  ": expected key=value, got '" + entry + "'");
    }
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    try {
      if (key == "c") {
        c = std::stoi(value);
      } else if (key == "n_i") {
        sizes.clear();
        for (const std::string& part : split(value, ',')) {
          sizes.push_back(std::stoi(trim(part)));
        }
      } else if (key == "b") {
        parsed.model.blocks = std::stoi(value);
      } else if (key == "q") {
        parsed.model.q = std::stod(value);
      } else if (key == "r") {
        parsed.model.r = std::stod(value);
      } else if (key == "a") {
        parsed.model.a = std::stod(value);
      } else if (key == "h") {
        parsed.h_spec = value;
      } else if (key == "gamma") {
        parsed.model.gamma = std::stod(value);
      } else if (key == "kmin") {
        parsed.model.kmin = std::stoi(value);
      } else if (key == "kmax") {
        parsed.model.kmax = std::stoi(value);
      } else if (key == "seed") {
        parsed.seed = std::stoull(value);
        parsed.model.seed = *parsed.seed;
      } else if (key == "degrees_file") {
        parsed.degrees_file = base_dir.empty() ? std::filesystem::path(value)
                                               : base_dir / value;
      } else if (key == "pmf_file") {
        parsed.pmf_file = base_dir.empty() ? std::filesystem::path(value)
                                           : base_dir / value;
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: cannot parse value for key '" + key + "'");
    }
  }

  if (sizes.empty()) {
    throw std::invalid_argument("config: n_i is required");
  }
  if (c < 0) c = static_cast<int>(sizes.size());
  if (static_cast<int>(sizes.size()) == 1 && c > 1) {
    sizes.assign(static_cast<std::size_t>(c), sizes[0]);
  }
  if (static_cast<int>(sizes.size()) != c) {
    throw std::invalid_argument("config: n_i lists " + std::to_string(sizes.size()) +
                                " sizes but c=" + std::to_string(c));
  }
  parsed.model.community_sizes = sizes;

  // resolve h
  const std::string& spec = parsed.h_spec;
  if (spec == "id" || spec == "identity") {
    parsed.model.h = identity_permutation(parsed.model.blocks);
  } else if (spec == "reversal") {
    parsed.model.h = reversal_permutation(parsed.model.blocks);
  } else {
    std::vector<int> h;
    try {
      for (const std::string& part : split(spec, ',')) {
        h.push_back(std::stoi(trim(part)) - 1);  // 1-based in config files
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("config: h='" + spec +
                                  "' is not id, reversal or a comma list");
    }
    if (static_cast<int>(h.size()) != parsed.model.blocks || !is_involution(h)) {
      throw std::invalid_argument("config: h='" + spec + "' is not an involution on the " +
                                  std::to_string(parsed.model.blocks) + " blocks");
    }
    parsed.model.h = h;
  }

  if (parsed.degrees_file) {
    parsed.model.degrees = read_degree_sequence(*parsed.degrees_file);
  }
  parsed.model.validate();
  return parsed;
}

ParsedConfig read_config(const std::filesystem::path& path) {
  return parse_config_text(read_text(path), path.parent_path());
}

DegreeDistribution analysis_pmf(const ParsedConfig& config) {
  if (config.pmf_file) return read_pmf(*config.pmf_file);
  if (config.model.degrees) return pmf_from_sequence(*config.model.degrees);
  const int kmax = config.model.kmax > 0 ? config.model.kmax
                                         : config.model.total_vertices() - 1;
  return DegreeDistribution::power_law(config.model.gamma, config.model.kmin, kmax);
}

std::string analytic_report_json(const AnalyticReport& r) {
  nlohmann::json j;
  j["a"] = r.a;
  j["q"] = r.q;
  j["b"] = r.b;
  nlohmann::json h = nlohmann::json::array();
  for (int i : r.h) h.push_back(i + 1);  // 1-based, as in config files
  j["h"] = h;
  j["relaxed_partition"] = r.relaxed_partition;
  j["moments"] = {{"EZ", r.ez}, {"EZ2", r.ez2}, {"EZ3", r.ez3}};
  j["u"] = r.u;
  j["t"] = r.t;
  j["W"] = {r.w.w1, r.w.w2, r.w.w3, r.w.w4, r.w.w5};
  j["alpha0"] = r.coef.alpha0;
  j["beta"] = {r.coef.beta1, r.coef.beta2, r.coef.beta3, r.coef.beta4, r.coef.beta5};
  j["D"] = r.d;
  j["expectations"] = {{"E_X", r.table.x},
                       {"E_X2", r.table.x2},
                       {"E_XY", r.table.xy},
                       {"E_X2Y", r.table.x2y},
                       {"E_X_gY", r.table.x_gy},
                       {"E_Y_gY", r.table.y_gy},
                       {"E_X_gY2", r.table.x_gy2},
                       {"E_X2_gY2", r.table.x2_gy2},
                       {"E_XY_gY", r.table.xy_gy},
                       {"E_gY_fX", r.table.gy_fx},
                       {"E_Y_gY_fX", r.table.y_gy_fx},
                       {"E_XY_gY_fX", r.table.xy_gy_fx}};
  j["transitive"] = {{"E_Xp", r.trans.xp},
                     {"E_XpY", r.trans.xp_y},
                     {"E_XpYp", r.trans.xp_yp},
                     {"E_XXp", r.trans.x_xp},
                     {"E_Xp2", r.trans.xp_sq}};
  j["cov"] = r.cov;
  j["cov_assembled"] = r.cov_assembled;
  j["cov_decomposed"] = r.cov_decomposed;
  j["variance"] = r.variance;
  if (r.rho_defined) {
    j["rho"] = r.rho;
  } else {
    j["rho"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string verify_report_json(const VerifyReport& r) {
  nlohmann::json j;
  j["reps"] = r.reps;
  nlohmann::json quantities = nlohmann::json::array();
  for (const auto& q : r.quantities) {
    quantities.push_back({{"name", q.name},
                          {"analytic", q.analytic},
                          {"empirical_mean", q.empirical_mean},
                          {"stderr", q.stderr_mean},
                          {"z", q.z}});
  }
  j["quantities"] = quantities;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.clustering) {
    cells.push_back({{"k", c.k},
                     {"kprime", c.kprime},
                     {"samples", c.samples},
                     {"empirical", c.empirical},
                     {"predicted", c.predicted}});
  }
  j["clustering_cells"] = cells;
  j["max_clustering_deviation"] = r.max_clustering_deviation;
  j["mean_closure_candidate_pairs"] = r.mean_candidate_pairs;
  j["mean_eligible_wedges"] = r.mean_eligible_wedges;
  j["mixing"] = {{"mean", r.mean_mixing}, {"stderr", r.stderr_mixing}};
  if (r.fitted_gamma_defined) {
    j["fitted_gamma"] = {{"mean", r.mean_fitted_gamma}, {"stderr", r.stderr_fitted_gamma}};
  } else {
    j["fitted_gamma"] = nullptr;
  }
  nlohmann::json histogram = nlohmann::json::object();
  for (const auto& [k, count] : r.total_degree_histogram) {
    histogram[std::to_string(k)] = count;
  }
  j["total_degree_histogram"] = histogram;
  return j.dump(2) + "\n";
}

std::string clustering_csv(const VerifyReport& report) {
  std::ostringstream out;
  out.precision(12);
  out << "k,kprime,count,mean,predicted\n";
  for (const auto& c : report.clustering) {
    out << c.k << "," << c.kprime << "," << c.samples << "," << c.empirical << ","
        << c.predicted << "\n";
  }
  return out.str();
}

std::string bench_cells_csv(const BenchReport& report) {
  std::ostringstream out;
  out.precision(12);
  out << "param,value,rep,nmi\n";
  for (const auto& cell : report.cells) {
    for (std::size_t rep = 0; rep < cell.nmi_values.size(); ++rep) {
      out << report.param << "," << cell.param_value << "," << rep << ","
          << cell.nmi_values[rep] << "\n";
    }
  }
  return out.str();
}

std::string bench_summary_csv(const BenchReport& report) {
  std::ostringstream out;
  out.precision(12);
  out << "param,value,mean_nmi,stderr\n";
  for (const auto& cell : report.cells) {
    out << report.param << "," << cell.param_value << "," << cell.mean_nmi << ",";
    if (cell.stderr_defined) {
      out << cell.stderr_nmi;
    }
    out << "\n";
  }
  return out.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string digest_hex(const std::string& bytes) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string(buffer);
}

std::string file_digest(const std::filesystem::path& path) {
  return digest_hex(read_text(path));
}

std::string model_config_json(const ModelConfig& config) {
  nlohmann::json j;
  j["c"] = config.community_sizes.size();
  j["n_i"] = config.community_sizes;
  j["b"] = config.blocks;
  j["q"] = config.q;
  j["r"] = config.r;
  j["a"] = config.a;
  nlohmann::json h = nlohmann::json::array();
  for (int i : config.permutation()) h.push_back(i + 1);
  j["h"] = h;
  j["seed"] = config.seed;
  if (config.degrees.has_value()) {
    j["degree_source"] = "explicit";
  } else {
    j["degree_source"] = "power_law";
    j["gamma"] = config.gamma;
    j["kmin"] = config.kmin;
    j["kmax"] = config.kmax > 0 ? config.kmax : config.total_vertices() - 1;
  }
  return j.dump();
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["tool_version"] = tool_version;
  j["seed"] = seed;
  j["config_digest"] = config_digest;
  if (!resolved_config.empty()) {
    j["config"] = nlohmann::json::parse(resolved_config);
  }
  auto entries = [](const std::vector<ManifestEntry>& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : list) {
      arr.push_back({{"path", e.path}, {"digest", e.digest}});
    }
    return arr;
  };
  j["inputs"] = entries(inputs);
  j["outputs"] = entries(outputs);
  // digest over the reproducible fields only (wall clock and output
  // locations excluded; file names and contents count)
  std::string material = command + "|" + config_digest + "|" + std::to_string(seed);
  for (const auto& e : outputs) {
    material += "|" + std::filesystem::path(e.path).filename().string() + ":" + e.digest;
  }
  j["run_digest"] = digest_hex(material);
  j["wall_clock_ms"] = wall_clock_ms;
  return j.dump(2) + "\n";
}

}  // namespace ctc
