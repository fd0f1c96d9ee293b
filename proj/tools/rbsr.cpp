// rbsr: generate set files, reconcile them in memory or over TCP, and run
// benchmark sweeps. Statistics go to stdout as JSON.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbsr/bench.hpp"
#include "rbsr/errors.hpp"
#include "rbsr/protocol.hpp"
#include "rbsr/range_store.hpp"
#include "rbsr/scenario.hpp"
#include "rbsr/set_file.hpp"
#include "rbsr/simulate.hpp"
#include "rbsr/stream.hpp"
#include "rbsr/wire.hpp"

namespace {

using nlohmann::json;
using namespace rbsr;

constexpr int kExitUsage = 1;
constexpr int kExitProtocol = 2;

struct CommonOptions {
  std::string scheme = "xor256";
  std::size_t branching = 2;
  std::size_t threshold = 1;
  std::string split = "equal";
  std::uint64_t seed = 0;
  std::size_t max_shift = 1;
  std::optional<std::size_t> item_width;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--scheme", o.scheme, "Fingerprint scheme")
      ->check(CLI::IsMember({"xor256", "sum256", "treap256"}))
      ->capture_default_str();
  cmd.add_option("--branching", o.branching, "Maximum subranges per split")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20))
      ->capture_default_str();
  cmd.add_option("--threshold", o.threshold, "Ship items when a range holds at most this many")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20))
      ->capture_default_str();
  cmd.add_option("--split", o.split, "Split strategy")
      ->check(CLI::IsMember({"equal", "shift", "random"}))
      ->capture_default_str();
  cmd.add_option("--max-shift", o.max_shift, "Rank offset bound for --split shift")
      ->capture_default_str();
  cmd.add_option("--seed", o.seed, "Seed for randomized splitting")->capture_default_str();
  cmd.add_option("--item-width", o.item_width, "Item width in bytes")
      ->check(CLI::Range(1, 255));
}

SessionConfig session_config(const CommonOptions& o, std::size_t item_width) {
  if (o.item_width && *o.item_width != item_width) {
    throw UsageError("--item-width " + std::to_string(*o.item_width) +
                     " does not match set file width " + std::to_string(item_width));
  }
  SessionConfig c;
  c.branching = o.branching;
  c.threshold = o.threshold;
  c.seed = o.seed;
  c.max_shift = o.max_shift;
  c.split = o.split == "equal"   ? SplitStrategy::equal
            : o.split == "shift" ? SplitStrategy::random_shift
                                 : SplitStrategy::random;
  c.scheme_id = scheme_id_from_name(o.scheme);
  c.item_width = item_width;
  c.validate();
  return c;
}

json stats_json(const TranscriptStats& s) {
  return {
      {"stats_version", 1},
      {"messages_total", s.messages_total},
      {"messages_per_direction", s.messages_per_direction},
      {"parts_fingerprint", s.parts_fingerprint},
      {"parts_itemset", s.parts_itemset},
      {"items_transmitted", s.items_transmitted},
      {"bytes_per_direction", s.bytes_per_direction},
      {"bytes_total", s.bytes_total()},
      {"max_parts_in_message", s.max_parts_in_message},
      {"edges_traversed", s.edges_traversed},
      {"duration_seconds", s.duration_seconds},
      {"transcript_digest", s.transcript_digest},
  };
}

json config_json(const SessionConfig& c) {
  static const char* const kSplit[] = {"equal", "shift", "random"};
  return {{"scheme", std::string(scheme_name(c.scheme_id))},
          {"branching", c.branching},
          {"threshold", c.threshold},
          {"split", kSplit[static_cast<int>(c.split)]},
          {"seed", c.seed},
          {"item_width", c.item_width}};
}

std::vector<Item> set_union(const std::vector<Item>& a, const std::vector<Item>& b) {
  std::vector<Item> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

int cmd_gen(const std::string& kind, std::size_t n, double overlap, std::uint64_t seed,
            std::size_t width, const std::string& out_a, const std::string& out_b) {
  ScenarioSpec spec;
  spec.kind = scenario_kind_from_name(kind);
  spec.n = n;
  spec.overlap = overlap;
  spec.seed = seed;
  spec.item_width = width;
  const ScenarioSets sets = gen_scenario(spec);
  write_set_file(out_a, width, sets.x0);
  write_set_file(out_b, width, sets.x1);
  const std::vector<Item> all = set_union(sets.x0, sets.x1);
  const std::size_t common = sets.x0.size() + sets.x1.size() - all.size();
  std::cout << json{{"kind", kind},
                    {"n", n},
                    {"item_width", width},
                    {"a", {{"path", out_a}, {"size", sets.x0.size()}}},
                    {"b", {{"path", out_b}, {"size", sets.x1.size()}}},
                    {"n_delta", all.size() - common}}
                   .dump()
            << "\n";
  return 0;
}

int cmd_sync(const std::string& path_a, const std::string& path_b, const CommonOptions& o,
             const std::string& initiator, bool write_back) {
  const ItemSet a = read_set_file(path_a);
  const ItemSet b = read_set_file(path_b);
  if (a.item_width != b.item_width) throw UsageError("set files have different item widths");
  SimulationConfig sim;
  const SessionConfig config = session_config(o, a.item_width);
  sim.node = {config, config};
  sim.initiator = initiator == "a" ? 0 : 1;
  const SimulationResult r = simulate(a.items, b.items, sim);
  const bool converged = r.final0 == r.final1 && r.final0 == set_union(a.items, b.items);
  if (write_back) {
    write_set_file(path_a, a.item_width, r.final0);
    write_set_file(path_b, b.item_width, r.final1);
  }
  json out = stats_json(r.stats);
  out["config"] = config_json(config);
  out["a_size"] = a.items.size();
  out["b_size"] = b.items.size();
  out["union_size"] = r.final0.size();
  out["converged"] = converged;
  std::cout << out.dump() << "\n";
  return converged ? 0 : kExitProtocol;
}

json run_peer(ByteStream& stream, const std::string& path, const CommonOptions& o, Role role) {
  const ItemSet set = read_set_file(path);
  const SessionConfig config = session_config(o, set.item_width);
  auto store = make_store(config.scheme_id, set.item_width, set.items);
  Session session(*store, config, role);
  const TranscriptStats stats = run_session(stream, session);
  const std::vector<Item> final_items = store->contents();
  write_set_file(path, set.item_width, final_items);
  json out = stats_json(stats);
  out["config"] = config_json(config);
  out["role"] = role == Role::initiator ? "initiator" : "responder";
  out["initial_size"] = set.items.size();
  out["final_size"] = final_items.size();
  return out;
}

int cmd_serve(const std::string& listen, const std::string& path, const CommonOptions& o,
              std::size_t max_sessions, const std::string& ready_file) {
  // Fail on a bad set file before opening the port.
  (void)session_config(o, read_set_file(path).item_width);
  TcpListener listener(listen);
  if (!ready_file.empty()) {
    std::ofstream(ready_file) << listener.port() << "\n";
  }
  std::cerr << "listening on port " << listener.port() << "\n";
  int status = 0;
  for (std::size_t served = 0; max_sessions == 0 || served < max_sessions; ++served) {
    auto stream = listener.accept();
    try {
      std::cout << run_peer(*stream, path, o, Role::responder).dump() << "\n" << std::flush;
    } catch (const ProtocolError& e) {
      std::cerr << "session failed: " << e.what() << "\n";
      status = kExitProtocol;
    } catch (const TransportError& e) {
      std::cerr << "session failed: " << e.what() << "\n";
      status = kExitProtocol;
    }
  }
  return status;
}

int cmd_connect(const std::string& peer, const std::string& path, const CommonOptions& o) {
  (void)session_config(o, read_set_file(path).item_width);
  auto stream = tcp_connect(peer);
  std::cout << run_peer(*stream, path, o, Role::initiator).dump() << "\n";
  return 0;
}

int cmd_bench(const std::string& kind, std::vector<std::size_t> sizes, double overlap,
              std::size_t reps, std::uint64_t seed, const CommonOptions& o) {
  json rows = json::array();
  bool all_ok = true;
  for (std::size_t n : sizes) {
    ScenarioSpec spec;
    spec.kind = scenario_kind_from_name(kind);
    spec.n = n;
    spec.overlap = overlap;
    spec.seed = seed;
    const SessionConfig config = session_config(o, o.item_width.value_or(kDefaultItemWidth));
    const BenchSummary s = bench(spec, config, reps);
    all_ok = all_ok && s.ok();
    rows.push_back({{"n", n},
                    {"repetitions", s.repetitions},
                    {"median_messages", s.median_messages},
                    {"max_messages", s.max_messages},
                    {"median_bytes", s.median_bytes},
                    {"median_parts", s.median_parts},
                    {"median_items", s.median_items},
                    {"median_max_parts", s.median_max_parts},
                    {"median_edges", s.median_edges},
                    {"median_seconds", s.median_seconds},
                    {"median_n_delta", s.median_n_delta},
                    {"union_failures", s.union_failures},
                    {"round_bound_violations", s.round_bound_violations},
                    {"byte_bound_violations", s.byte_bound_violations},
                    {"ok", s.ok()}});
  }
  const SessionConfig config = session_config(o, o.item_width.value_or(kDefaultItemWidth));
  std::cout << json{{"stats_version", 1},
                    {"kind", kind},
                    {"config", config_json(config)},
                    {"rows", rows},
                    {"ok", all_ok}}
                   .dump(2)
            << "\n";
  return all_ok ? 0 : kExitProtocol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Range-based set reconciliation"};
  app.require_subcommand(1);

  std::string kind = "random";
  std::size_t n = 1024;
  double overlap = 0.5;
  std::uint64_t gen_seed = 0;
  std::size_t gen_width = kDefaultItemWidth;
  std::string out_a = "a.set";
  std::string out_b = "b.set";
  auto* gen = app.add_subcommand("gen", "Write a scenario's two sets to files");
  gen->add_option("--kind", kind, "Scenario kind")
      ->check(CLI::IsMember(
          {"random", "worst_rounds", "worst_bytes", "adversarial_treap", "equal", "disjoint"}))
      ->capture_default_str();
  gen->add_option("--n", n, "Set size")->capture_default_str();
  gen->add_option("--overlap", overlap, "Shared fraction (random kind)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--item-width", gen_width, "Item width in bytes")
      ->check(CLI::Range(1, 255))
      ->capture_default_str();
  gen->add_option("--out-a", out_a, "Output for the first set")->capture_default_str();
  gen->add_option("--out-b", out_b, "Output for the second set")->capture_default_str();

  CommonOptions sync_opts;
  std::string sync_a, sync_b, initiator = "a";
  bool write_back = false;
  auto* sync = app.add_subcommand("sync", "Reconcile two set files in memory");
  sync->add_option("set_a", sync_a, "First set file")->required()->check(CLI::ExistingFile);
  sync->add_option("set_b", sync_b, "Second set file")->required()->check(CLI::ExistingFile);
  sync->add_option("--initiator", initiator, "Which side opens the session")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();
  sync->add_flag("--write", write_back, "Write reconciled sets back to both files");
  add_common(*sync, sync_opts);

  CommonOptions serve_opts;
  std::string listen, serve_set, ready_file;
  std::size_t max_sessions = 1;
  auto* serve = app.add_subcommand("serve", "Answer reconciliation sessions over TCP");
  serve->add_option("--listen", listen, "host:port to listen on")->required();
  serve->add_option("--set", serve_set, "Set file, rewritten after each session")
      ->required()
      ->check(CLI::ExistingFile);
  serve->add_option("--max-sessions", max_sessions, "Sessions to serve, 0 for unlimited")
      ->capture_default_str();
  serve->add_option("--ready-file", ready_file, "Write the bound port here once listening");
  add_common(*serve, serve_opts);

  CommonOptions connect_opts;
  std::string peer, connect_set;
  auto* connect = app.add_subcommand("connect", "Reconcile a set file with a server");
  connect->add_option("--peer", peer, "host:port of the server")->required();
  connect->add_option("--set", connect_set, "Set file, rewritten after the session")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(*connect, connect_opts);

  CommonOptions bench_opts;
  std::string bench_kind = "random";
  std::vector<std::size_t> sizes{16, 64, 256, 1024, 4096};
  double bench_overlap = 0.9;
  std::size_t reps = 5;
  std::uint64_t bench_seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Sweep a scenario over set sizes");
  bench_cmd->add_option("--kind", bench_kind, "Scenario kind")
      ->check(CLI::IsMember(
          {"random", "worst_rounds", "worst_bytes", "adversarial_treap", "equal", "disjoint"}))
      ->capture_default_str();
  bench_cmd->add_option("--n", sizes, "Set sizes to sweep")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--overlap", bench_overlap, "Shared fraction (random kind)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  bench_cmd->add_option("--reps", reps, "Repetitions per size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--scenario-seed", bench_seed, "Scenario seed")->capture_default_str();
  add_common(*bench_cmd, bench_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(kind, n, overlap, gen_seed, gen_width, out_a, out_b);
    if (*sync) return cmd_sync(sync_a, sync_b, sync_opts, initiator, write_back);
    if (*serve) return cmd_serve(listen, serve_set, serve_opts, max_sessions, ready_file);
    if (*connect) return cmd_connect(peer, connect_set, connect_opts);
    if (*bench_cmd) return cmd_bench(bench_kind, sizes, bench_overlap, reps, bench_seed, bench_opts);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << "\n";
    return kExitProtocol;
  } catch (const TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return kExitProtocol;
  }
  return kExitUsage;
}
