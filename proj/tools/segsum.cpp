// segsum: run the ring secure-sum protocols, attack their transcripts, and
// tabulate victim probabilities.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "segsum/segsum.hpp"

namespace {

using namespace segsum;

// Flags shared by `sum` and `serve`. Unset optionals fall back to the config
// file, then to defaults.
struct RunFlags {
  std::string config_path;
  std::optional<std::string> protocol;
  std::optional<std::size_t> k;
  std::optional<std::string> mode;
  std::optional<std::string> modulus;
  std::optional<std::size_t> initiator;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> perturb;
  std::vector<std::size_t> colluders;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--protocol", protocol, "baseline | ksum | extended");
    app->add_option("--k", k, "segments per data block");
    app->add_option("--mode", mode, "modular | exact");
    app->add_option("--modulus", modulus, "modulus for modular mode (default 2^64)");
    app->add_option("--initiator", initiator, "index of the protocol initiator");
    app->add_option("--seed", seed, "master seed (fallback: SEGSUM_SEED, then 0)");
    app->add_option("--perturb", perturb, "malicious initiator adds this to its contribution every round");
    app->add_option("--colluders", colluders, "two colluding party indices")->delimiter(',')->expected(2);
  }
};

struct Resolved {
  ProtocolKind protocol = ProtocolKind::KSecure;
  ProtocolConfig cfg;
  std::vector<std::string> endpoints;
  std::optional<Int> perturb;
};

Int parse_cli_int(const std::string& text, const char* what) {
  const auto v = parse_int(text);
  if (!v) throw Error(ErrorCode::ConfigInvalid, std::string(what) + " '" + text + "' is not an integer");
  return *v;
}

Resolved resolve(const RunFlags& f, std::optional<std::size_t> n_from_inputs) {
  const FileConfig file = f.config_path.empty() ? FileConfig{} : load_config(f.config_path);
  Resolved r;

  if (f.protocol) {
    const auto p = parse_protocol(*f.protocol);
    if (!p) throw Error(ErrorCode::ConfigInvalid, "unknown protocol '" + *f.protocol + "'");
    r.protocol = *p;
  } else if (file.protocol) {
    r.protocol = *file.protocol;
  }

  auto& cfg = r.cfg;
  if (n_from_inputs) {
    if (file.n && *file.n != *n_from_inputs) {
      throw Error(ErrorCode::ConfigInvalid, "config says n=" + std::to_string(*file.n) + " but " +
                                                std::to_string(*n_from_inputs) + " inputs were given");
    }
    cfg.n = *n_from_inputs;
  } else if (file.n) {
    cfg.n = *file.n;
  }
  cfg.k = f.k.value_or(file.k.value_or(1));
  const std::optional<Int> modulus = f.modulus ? std::optional(parse_cli_int(*f.modulus, "modulus")) : file.modulus;
  cfg.mode = make_mode(f.mode.value_or(file.mode.value_or("modular")), modulus);
  cfg.initiator = f.initiator.value_or(file.initiator.value_or(0));

  if (f.seed) {
    cfg.seed = *f.seed;
  } else if (file.seed) {
    cfg.seed = *file.seed;
  } else if (const char* env = std::getenv("SEGSUM_SEED")) {
    const auto v = parse_int(env);
    if (!v || *v < 0 || static_cast<UInt>(*v) >= kTwoPow64) {
      throw Error(ErrorCode::ConfigInvalid, std::string("SEGSUM_SEED '") + env + "' is not a 64-bit seed");
    }
    cfg.seed = static_cast<std::uint64_t>(*v);
  }

  r.perturb = f.perturb ? std::optional(parse_cli_int(*f.perturb, "perturb")) : file.perturb;
  if (r.perturb) cfg.faults.malicious_initiator = constant_perturbation(*r.perturb);
  if (!f.colluders.empty()) {
    cfg.faults.colluders = std::pair(f.colluders[0], f.colluders[1]);
  } else {
    cfg.faults.colluders = file.colluders;
  }
  r.endpoints = file.endpoints;
  return r;
}

std::vector<DataBlock> parse_input_list(const std::string& text) {
  std::vector<DataBlock> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back({parse_cli_int(tok, "input")});
  return out;
}

std::vector<DataBlock> read_input_file(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<DataBlock> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back({parse_cli_int(line, "input")});
  }
  return out;
}

std::vector<DataBlock> random_inputs(std::size_t n, std::uint64_t seed, const ArithmeticMode& mode) {
  Rng rng(derive_seed(seed, 0xd0d0'0000'0000'0001ULL));
  std::vector<DataBlock> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({mode.is_modular() ? static_cast<Int>(rng.uniform_below(mode.modulus()))
                                     : rng.uniform_symmetric(kExactSegmentRadius)});
  }
  return out;
}

void write_output_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

int cmd_sum(const RunFlags& flags, const std::string& inputs_text, std::optional<std::size_t> random_n,
            const std::string& input_file, const std::string& transcript_path, bool reveal) {
  const int sources = int(!inputs_text.empty()) + int(random_n.has_value()) + int(!input_file.empty());
  if (sources != 1) {
    throw Error(ErrorCode::ConfigInvalid, "give exactly one of --inputs, --random-inputs, --input-file");
  }
  std::vector<DataBlock> inputs;
  if (!inputs_text.empty()) inputs = parse_input_list(inputs_text);
  if (!input_file.empty()) inputs = read_input_file(input_file);

  Resolved r = resolve(flags, random_n ? random_n : std::optional(inputs.size()));
  if (random_n) inputs = random_inputs(*random_n, r.cfg.seed, r.cfg.mode);

  const auto started = std::chrono::steady_clock::now();
  const SumResult result = run_protocol(r.protocol, inputs, r.cfg, RunSeeds::from(r.cfg.seed));
  const auto elapsed = std::chrono::steady_clock::now() - started;

  std::cout << "protocol " << to_string(r.protocol) << '\n'
            << "n " << r.cfg.n << '\n'
            << "k " << result.rounds_executed << '\n'
            << "mode " << describe(r.cfg.mode) << '\n'
            << "initiator " << r.cfg.initiator << '\n'
            << "seed " << r.cfg.seed << '\n';
  if (r.perturb) std::cout << "perturb " << to_string(*r.perturb) << '\n';
  std::cout << "announced " << to_string(result.announced) << '\n'
            << "hops " << result.transcript.hops().size() << '\n';
  if (reveal) {
    std::cout << "inputs";
    for (const auto& d : inputs) std::cout << ' ' << to_string(d.value);
    std::cout << '\n';
  }
  if (!transcript_path.empty()) {
    write_output_file(transcript_path, dump_transcript(result.transcript, reveal));
    std::cout << "transcript " << transcript_path << '\n';
  }
  // Timing goes to stderr so stdout stays byte-identical across runs.
  std::cerr << "elapsed_us " << std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count() << '\n';
  return 0;
}

int cmd_attack(const std::string& transcript_path, std::size_t victim) {
  const Transcript t = parse_transcript(read_file(transcript_path));
  const CollusionView view = extract_collusion_view(t, victim);
  const AttackResult result = collude(view, t.config.mode);

  std::optional<bool> matched;
  if (t.ground_truth) {
    matched = result.recovered_segments == t.ground_truth->segments.at(victim) &&
              result.recovered_total == t.ground_truth->inputs.at(victim).value;
  }
  write_attack_report(std::cout, view, result, t.config.mode, matched);
  return matched.value_or(true) ? 0 : 1;
}

int cmd_curve(std::size_t n_min, std::size_t n_max, const std::vector<std::size_t>& k_list,
              std::optional<std::uint64_t> trials, std::optional<std::uint64_t> seed_flag) {
  CurveTable table = generate_curve(n_min, n_max, k_list);
  if (trials) {
    std::uint64_t seed = 0;
    if (seed_flag) {
      seed = *seed_flag;
    } else if (const char* env = std::getenv("SEGSUM_SEED")) {
      const auto v = parse_int(env);
      if (!v || *v < 0 || static_cast<UInt>(*v) >= kTwoPow64) {
        throw Error(ErrorCode::ConfigInvalid, std::string("SEGSUM_SEED '") + env + "' is not a 64-bit seed");
      }
      seed = static_cast<std::uint64_t>(*v);
    }
    for (auto& row : table.rows) {
      if (row.k == 1 && row.n >= 5) row.estimate = monte_carlo_neighbor_pair_estimate(row.n, *trials, seed);
    }
  }
  write_curve_csv(std::cout, table);
  return 0;
}

int cmd_serve(const RunFlags& flags, std::size_t role, const std::string& endpoints_path, const std::string& input,
              std::uint64_t timeout_ms) {
  Resolved r = resolve(flags, std::nullopt);
  if (!endpoints_path.empty()) {
    r.endpoints.clear();
    std::istringstream in(read_file(endpoints_path));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) r.endpoints.push_back(line);
    }
  }
  if (r.endpoints.empty()) throw Error(ErrorCode::ConfigInvalid, "no endpoints given");
  r.cfg.n = r.endpoints.size();
  if (role >= r.cfg.n) {
    throw Error(ErrorCode::ConfigInvalid,
                "role " + std::to_string(role) + " with " + std::to_string(r.cfg.n) + " endpoints");
  }
  NetworkOptions opts;
  opts.hop_timeout = std::chrono::milliseconds(timeout_ms);
  opts.connect_timeout = std::chrono::milliseconds(timeout_ms);
  const SumResult result =
      run_networked(r.protocol, r.cfg, r.endpoints, role, DataBlock{parse_cli_int(input, "input")}, opts);
  std::cout << "announced " << to_string(result.announced) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ring secure-sum protocols: k-segment and masked variants, collusion attack, victim probabilities"};
  app.require_subcommand(1);

  RunFlags sum_flags;
  std::string inputs_text, input_file, transcript_out;
  std::optional<std::size_t> random_n;
  bool reveal = false;
  auto* sum = app.add_subcommand("sum", "run one protocol over the given inputs");
  sum_flags.attach(sum);
  sum->add_option("--inputs", inputs_text, "comma-separated data blocks, one per party");
  sum->add_option("--random-inputs", random_n, "generate this many seeded random inputs");
  sum->add_option("--input-file", input_file, "file with one decimal data block per line");
  sum->add_option("--transcript", transcript_out, "write the transcript dump here");
  sum->add_flag("--reveal", reveal, "print inputs and keep private data in the transcript dump");

  std::string attack_transcript;
  std::size_t victim = 0;
  auto* attack = app.add_subcommand("attack", "two-neighbour collusion attack on a transcript dump");
  attack->add_option("--transcript", attack_transcript, "transcript dump")->required();
  attack->add_option("--victim", victim, "party surrounded by the colluders")->required();

  std::size_t n_min = 3, n_max = 30;
  std::vector<std::size_t> k_list{1, 2, 3, 4};
  std::optional<std::uint64_t> mc_trials, curve_seed;
  auto* curve = app.add_subcommand("curve", "victim probability table as CSV");
  curve->add_option("--n-min", n_min, "smallest party count")->capture_default_str();
  curve->add_option("--n-max", n_max, "largest party count")->capture_default_str();
  curve->add_option("--k-list", k_list, "segment counts")->delimiter(',')->capture_default_str();
  curve->add_option("--monte-carlo", mc_trials, "add a Monte Carlo estimate column for k=1, n>=5");
  curve->add_option("--seed", curve_seed, "Monte Carlo seed (fallback: SEGSUM_SEED, then 0)");

  RunFlags serve_flags;
  std::size_t role = 0;
  std::string endpoints_path, serve_input;
  std::uint64_t timeout_ms = 30'000;
  auto* serve = app.add_subcommand("serve", "participate as one party of a networked ring");
  serve_flags.attach(serve);
  serve->add_option("--role", role, "this party's index")->required();
  serve->add_option("--endpoints", endpoints_path, "file with one host:port per party");
  serve->add_option("--input", serve_input, "this party's data block")->required();
  serve->add_option("--timeout-ms", timeout_ms, "per-hop and connect timeout")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sum) return cmd_sum(sum_flags, inputs_text, random_n, input_file, transcript_out, reveal);
    if (*attack) return cmd_attack(attack_transcript, victim);
    if (*curve) return cmd_curve(n_min, n_max, k_list, mc_trials, curve_seed);
    if (*serve) return cmd_serve(serve_flags, role, endpoints_path, serve_input, timeout_ms);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
