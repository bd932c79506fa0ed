#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"

#include "flyai/entropy.hpp"
#include "flyai/game.hpp"
#include "flyai/search.hpp"
#include "flyai/service.hpp"
#include "flyai/stats.hpp"
#include "flyai/tournament.hpp"

namespace flyai::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kSynthesizedTrajectorySteps = 1200;
constexpr int kDefaultPort = 8080;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << text;
  if (!file) throw std::runtime_error("write failed: " + path);
}

std::shared_ptr<const std::vector<DetectionRecord>> load_records(const std::string& path) {
  if (path.empty()) return nullptr;
  auto records = load_trajectory(path);
  if (records.empty()) throw UsageError("trajectory file " + path + " has no records");
  return std::make_shared<const std::vector<DetectionRecord>>(std::move(records));
}

std::shared_ptr<const std::vector<DetectionRecord>> synthesized_records(std::uint64_t seed) {
  FlySimulator sim(seed);
  return std::make_shared<const std::vector<DetectionRecord>>(sim.run(kSynthesizedTrajectorySteps));
}

// --------------------------------------------------------------------------

struct RngStatsOptions {
  std::string sources = "ideal,mt";
  std::size_t n = kDefaultSampleCount;
  std::uint64_t seed = 1;
  std::string trajectory;
  std::string format = "text";
  std::string out_path;
};

int cmd_rng_stats(const RngStatsOptions& o, std::ostream& out) {
  std::vector<EntropySourceKind> kinds;
  for (const auto& name : split_list(o.sources)) {
    auto kind = parse_entropy_kind(name);
    if (!kind) throw UsageError("unknown source '" + name + "' (ideal, mt, brng1..brng4)");
    kinds.push_back(*kind);
  }
  if (kinds.empty()) throw UsageError("--sources is empty");
  if (o.n < 4) throw UsageError("--n must be at least 4");

  ReportSources config;
  config.seed = o.seed;
  config.trajectory = load_records(o.trajectory);
  for (auto kind : kinds) {
    if (is_bionic(kind) && !config.trajectory)
      throw UsageError(std::string(to_string(kind)) + " requires --trajectory");
  }
  const auto report = table_report(kinds, o.n, config);
  emit(o.out_path, o.format == "json" ? report.to_json() : report.to_text(), out);
  return kExitOk;
}

// --------------------------------------------------------------------------

struct SimulateOptions {
  long long steps = 1200;
  std::uint64_t seed = 7;
  int fan_period = FlySimConfig{}.fan_period;
  std::string out_path;
};

int cmd_simulate_fly(const SimulateOptions& o, std::ostream& out) {
  if (o.steps < 2) throw UsageError("--steps must be at least 2");
  if (o.fan_period < 1) throw UsageError("--fan-period must be at least 1");
  FlySimConfig config;
  config.fan_period = o.fan_period;
  FlySimulator sim(o.seed, config);
  std::ostringstream text;
  write_trajectory(text, sim.run(static_cast<std::size_t>(o.steps)));
  emit(o.out_path, text.str(), out);
  return kExitOk;
}

// --------------------------------------------------------------------------

struct TournamentOptions {
  std::string agents = "A,B,C,Fly";
  int blocks = 50;
  int games = 10;
  std::uint64_t seed = 42;
  int board_size = 11;
  int depth = 2;
  std::string trajectory;
  std::string results_path;
  std::string summary_path;
  std::string format = "text";
  unsigned threads = 0;
  bool no_alternate = false;
};

int cmd_tournament(const TournamentOptions& o, std::ostream& out, std::ostream& err) {
  const auto names = split_list(o.agents);
  if (names.empty()) throw UsageError("--agents is empty");
  AgentLineup lineup;
  try {
    lineup = standard_lineup(nullptr, names);
  } catch (const InvalidConfiguration& e) {
    throw UsageError(e.what());
  }
  lineup.trajectory = load_records(o.trajectory);
  if (!lineup.trajectory) lineup.trajectory = synthesized_records(o.seed);
  if (o.depth < 1 || o.depth > kMaxEmotionalDepth) throw UsageError("--depth must be in [1,3]");
  lineup.baseline.search.base_depth = o.depth;
  for (auto& c : lineup.challengers) c.search.base_depth = o.depth;

  MatchConfig config;
  config.blocks = o.blocks;
  config.games_per_block = o.games;
  config.master_seed = o.seed;
  config.board_size = o.board_size;
  config.threads = o.threads;
  config.alternate_first_mover = !o.no_alternate;
  try {
    config.validate();
  } catch (const InvalidConfiguration& e) {
    throw UsageError(e.what());
  }

  const auto report = run_match(lineup, config);
  if (!o.results_path.empty()) {
    std::ostringstream results;
    write_results(results, report);
    emit(o.results_path, results.str(), out);
  }
  const auto table = summarize_win_rates(report);
  emit(o.summary_path, o.format == "json" ? table.json : table.text, out);
  bool failed = false;
  for (const auto& c : report.challengers) {
    if (c.error) {
      err << "agent " << c.name << " aborted: " << *c.error << '\n';
      failed = true;
    }
  }
  return failed ? kExitFailure : kExitOk;
}

// --------------------------------------------------------------------------

struct PlayOptions {
  std::string agent = "Original";
  int board_size = kDefaultBoardSize;
  std::string human = "X";
  std::string trajectory;
  std::uint64_t seed = 1;
};

std::string render_with_coordinates(const Board& board) {
  std::ostringstream s;
  s << "    ";
  for (int c = 0; c < board.size(); ++c) s << (c < 10 ? " " : "") << c << ' ';
  s << '\n';
  const auto rows = board.rows();
  for (int r = 0; r < board.size(); ++r) {
    s << (r < 10 ? "  " : " ") << r << ' ';
    for (char ch : rows[static_cast<std::size_t>(r)]) s << "  " << ch;
    s << '\n';
  }
  return s.str();
}

int cmd_play(const PlayOptions& o, std::istream& in, std::ostream& out) {
  auto spec = find_agent(o.agent);
  if (!spec) throw UsageError("unknown agent '" + o.agent + "'");
  if (o.board_size < kMinBoardSize || o.board_size > kMaxBoardSize)
    throw UsageError("--board-size must be in [5, 19]");
  const auto human = o.human.size() == 1 ? player_from_char(o.human[0]) : std::nullopt;
  if (!human) throw UsageError("--human must be X or O");

  std::optional<EntropySource> entropy;
  if (spec->uses_entropy()) {
    if (is_bionic(spec->entropy_kind)) {
      auto records = load_records(o.trajectory);
      if (!records) records = synthesized_records(o.seed);
      entropy = EntropySource::bionic(spec->entropy_kind, records);
    } else {
      entropy = EntropySource::mersenne_twister(static_cast<std::uint32_t>(o.seed));
    }
  }
  spec->tie_break_seed = o.seed;
  Agent agent(*spec, std::move(entropy));

  GameState state = new_game(o.board_size);
  out << "Playing " << to_char(*human) << " against agent " << spec->name << ". Enter moves as `row col`.\n";
  while (!state.terminal()) {
    if (state.to_move() == *human) {
      out << render_with_coordinates(state.board()) << "Your move: " << std::flush;
      std::string line;
      if (!std::getline(in, line)) {
        out << "\nInput closed, game abandoned.\n";
        return kExitFailure;
      }
      std::istringstream ls(line);
      Move m;
      std::string extra;
      if (!(ls >> m.row >> m.col) || (ls >> extra)) {
        out << "Invalid input, expected `row col`.\n";
        continue;
      }
      try {
        state.play(m);
      } catch (const IllegalMove& e) {
        out << "Illegal move: " << e.what() << ".\n";
      }
    } else {
      const auto d = agent.choose(state);
      state.play(d.move);
      out << "Agent plays " << d.move.row << ' ' << d.move.col;
      if (d.depth_sample) out << " (depth " << d.depth << ')';
      if (d.stimulation) out << " (stimulation " << *d.stimulation << ')';
      out << '\n';
    }
  }
  out << render_with_coordinates(state.board());
  if (state.status() == Status::Draw)
    out << "Draw\n";
  else if (*state.winner() == *human)
    out << "You win\n";
  else
    out << "Agent wins\n";
  return kExitOk;
}

// --------------------------------------------------------------------------

struct ServeOptions {
  int port = kDefaultPort;
  std::string host = "127.0.0.1";
  std::string trajectory;
  std::uint64_t seed = 0;
};

int cmd_serve(const ServeOptions& o, std::ostream& out) {
  ServiceConfig config;
  config.seed = o.seed;
  config.trajectory = load_records(o.trajectory);
  if (!config.trajectory) config.trajectory = synthesized_records(o.seed);
  GameService service(config);
  httplib::Server server;
  register_routes(server, service);
  out << "flyai serving on http://" << o.host << ':' << o.port << '\n' << std::flush;
  if (!server.listen(o.host, o.port)) throw std::runtime_error("cannot listen on port " + std::to_string(o.port));
  return kExitOk;
}

int default_port() {
  if (const char* env = std::getenv("FLYAI_PORT")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
    }
  }
  return kDefaultPort;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Gobang agents with bionic randomness injection"};
  app.require_subcommand(1);

  RngStatsOptions rng;
  auto* rng_cmd = app.add_subcommand("rng-stats", "Descriptive statistics of entropy sources");
  rng_cmd->add_option("--sources", rng.sources, "Comma list: ideal, mt, brng1..brng4");
  rng_cmd->add_option("--n", rng.n, "Samples per source");
  rng_cmd->add_option("--seed", rng.seed, "Seed for ideal/mt sources");
  rng_cmd->add_option("--trajectory", rng.trajectory, "Detection record file for bionic sources");
  rng_cmd->add_option("--format", rng.format)->check(CLI::IsMember({"text", "json"}));
  rng_cmd->add_option("--out", rng.out_path, "Output path (default stdout)");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate-fly", "Write a synthetic fly trajectory");
  sim_cmd->add_option("--steps", sim.steps, "Number of detection records");
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--fan-period", sim.fan_period, "Steps between fan triggers");
  sim_cmd->add_option("--out", sim.out_path, "Output path (default stdout)");

  TournamentOptions tour;
  auto* tour_cmd = app.add_subcommand("tournament", "Challengers against the original agent");
  tour_cmd->add_option("--agents", tour.agents, "Comma list from A,B,C,Fly");
  tour_cmd->add_option("--blocks", tour.blocks);
  tour_cmd->add_option("--games", tour.games, "Games per block");
  tour_cmd->add_option("--seed", tour.seed, "Master seed");
  tour_cmd->add_option("--board-size", tour.board_size);
  tour_cmd->add_option("--depth", tour.depth, "Base search depth for every agent");
  tour_cmd->add_option("--trajectory", tour.trajectory, "Trajectory for the Fly agent");
  tour_cmd->add_option("--results", tour.results_path, "Per-game results file (TSV)");
  tour_cmd->add_option("--summary", tour.summary_path, "Summary output path (default stdout)");
  tour_cmd->add_option("--format", tour.format)->check(CLI::IsMember({"text", "json"}));
  tour_cmd->add_option("--threads", tour.threads, "Worker threads (0 = all cores)");
  tour_cmd->add_flag("--no-alternate", tour.no_alternate, "Challenger always moves first");

  PlayOptions play;
  auto* play_cmd = app.add_subcommand("play", "Play against an agent in the terminal");
  play_cmd->add_option("--agent", play.agent, "Original, A, B, C or Fly");
  play_cmd->add_option("--board-size", play.board_size);
  play_cmd->add_option("--human", play.human, "Side for the human: X (moves first) or O");
  play_cmd->add_option("--trajectory", play.trajectory);
  play_cmd->add_option("--seed", play.seed);

  ServeOptions serve;
  serve.port = default_port();
  auto* serve_cmd = app.add_subcommand("serve", "JSON-over-HTTP game service");
  serve_cmd->add_option("--port", serve.port, "Port (default $FLYAI_PORT or 8080)");
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("--trajectory", serve.trajectory);
  serve_cmd->add_option("--seed", serve.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*rng_cmd) return cmd_rng_stats(rng, out);
    if (*sim_cmd) return cmd_simulate_fly(sim, out);
    if (*tour_cmd) return cmd_tournament(tour, out, err);
    if (*play_cmd) return cmd_play(play, in, out);
    if (*serve_cmd) return cmd_serve(serve, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace flyai::cli
