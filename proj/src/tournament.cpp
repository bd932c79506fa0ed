#include "flyai/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "json.hpp"

namespace flyai {

void MatchConfig::validate() const {
  if (games_per_block < 1) throw InvalidConfiguration("games_per_block must be >= 1");
  if (blocks < 1) throw InvalidConfiguration("blocks must be >= 1");
  if (board_size < kMinBoardSize || board_size > kMaxBoardSize)
    throw InvalidConfiguration("board size out of range");
}

AgentLineup standard_lineup(std::shared_ptr<const std::vector<DetectionRecord>> trajectory,
                            const std::vector<std::string>& names) {
  AgentLineup lineup;
  lineup.trajectory = std::move(trajectory);
  for (const auto& name : names) {
    auto spec = find_agent(name);
    if (!spec || spec->name == "Original")
      throw InvalidConfiguration("unknown challenger '" + name + "' (expected A, B, C or Fly)");
    lineup.challengers.push_back(*spec);
  }
  return lineup;
}

AgentLineup standard_lineup(std::shared_ptr<const std::vector<DetectionRecord>> trajectory) {
  return standard_lineup(std::move(trajectory), {"A", "B", "C", "Fly"});
}

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::ChallengerWin:
      return "ChallengerWin";
    case Outcome::BaselineWin:
      return "BaselineWin";
    default:
      return "Draw";
  }
}

std::uint64_t mix_seed(std::uint64_t state, std::uint64_t value) noexcept {
  std::uint64_t z = state ^ (value + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GameSeeds derive_game_seeds(std::uint64_t master_seed, std::size_t challenger, int block,
                            int game) {
  std::uint64_t s = mix_seed(master_seed, challenger);
  s = mix_seed(s, static_cast<std::uint64_t>(block));
  s = mix_seed(s, static_cast<std::uint64_t>(game));
  return {s, mix_seed(s, 1), mix_seed(s, 2), mix_seed(s, 3)};
}

std::optional<EntropySource> make_challenger_entropy(const AgentSpec& challenger,
                                                     const AgentLineup& lineup,
                                                     const GameSeeds& seeds) {
  if (!challenger.uses_entropy()) return std::nullopt;
  switch (challenger.entropy_kind) {
    case EntropySourceKind::IdealUniform:
      return EntropySource::ideal(seeds.challenger_entropy);
    case EntropySourceKind::MersenneTwister:
      return EntropySource::mersenne_twister(static_cast<std::uint32_t>(seeds.challenger_entropy));
    default: {
      if (!lineup.trajectory)
        throw EntropyConfigurationError("agent " + challenger.name + " needs a trajectory");
      auto probe = EntropySource::bionic(challenger.entropy_kind, lineup.trajectory);
      const auto start = seeds.challenger_entropy % probe.stream_length();
      return EntropySource::bionic(challenger.entropy_kind, lineup.trajectory, start);
    }
  }
}

GameRecord play_game(const AgentSpec& challenger, const AgentSpec& baseline, bool challenger_first,
                     const GameSeeds& seeds, int board_size,
                     std::optional<EntropySource> challenger_entropy) {
  AgentSpec c_spec = challenger;
  c_spec.tie_break_seed = seeds.challenger_tie_break;
  AgentSpec b_spec = baseline;
  b_spec.tie_break_seed = seeds.baseline_tie_break;
  Agent c_agent(std::move(c_spec), std::move(challenger_entropy));
  Agent b_agent(std::move(b_spec), std::nullopt);

  GameRecord record;
  record.challenger = challenger.name;
  record.challenger_first = challenger_first;
  record.challenger_color = challenger_first ? Player::X : Player::O;
  record.seeds = seeds;

  GameState state = new_game(board_size);
  const int move_limit = board_size * board_size;
  while (!state.terminal() && static_cast<int>(record.moves.size()) < move_limit) {
    Agent& mover = state.to_move() == record.challenger_color ? c_agent : b_agent;
    const Move m = mover.choose(state).move;
    state.play(m);
    record.moves.push_back(m);
  }
  if (state.status() == Status::Won)
    record.outcome = *state.winner() == record.challenger_color ? Outcome::ChallengerWin
                                                                : Outcome::BaselineWin;
  else
    record.outcome = Outcome::Draw;
  return record;
}

Outcome replay_outcome(const GameRecord& record, int board_size) {
  const auto state = replay(board_size, record.moves);
  if (state.status() != Status::Won) return Outcome::Draw;
  return *state.winner() == record.challenger_color ? Outcome::ChallengerWin
                                                    : Outcome::BaselineWin;
}

const ChallengerResult* WinRateReport::find(std::string_view name) const {
  for (const auto& c : challengers)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

double score_of(Outcome o) {
  switch (o) {
    case Outcome::ChallengerWin:
      return 1.0;
    case Outcome::Draw:
      return 0.5;
    default:
      return 0.0;
  }
}

void tally(ChallengerResult& r, std::span<const GameRecord> games, const MatchConfig& config) {
  r.games = static_cast<int>(games.size());
  double total = 0.0;
  std::vector<double> block_sum(static_cast<std::size_t>(config.blocks), 0.0);
  for (const auto& g : games) {
    switch (g.outcome) {
      case Outcome::ChallengerWin:
        ++r.wins;
        break;
      case Outcome::BaselineWin:
        ++r.losses;
        break;
      case Outcome::Draw:
        ++r.draws;
        break;
    }
    if (g.challenger_first) ++r.first_moves;
    total += score_of(g.outcome);
    block_sum[static_cast<std::size_t>(g.block)] += score_of(g.outcome);
  }
  r.win_rate = r.games > 0 ? total / r.games : 0.0;
  for (double s : block_sum) r.block_rates.push_back(s / config.games_per_block);

  const double nb = static_cast<double>(r.block_rates.size());
  double sum = 0.0;
  for (double v : r.block_rates) sum += v;
  r.block_mean = sum / nb;
  double ss = 0.0;
  for (double v : r.block_rates) ss += (v - r.block_mean) * (v - r.block_mean);
  r.block_sd = r.block_rates.size() > 1 ? std::sqrt(ss / (nb - 1.0)) : 0.0;
  r.block_min = *std::min_element(r.block_rates.begin(), r.block_rates.end());
  r.block_max = *std::max_element(r.block_rates.begin(), r.block_rates.end());
}

}  // namespace

WinRateReport run_match(const AgentLineup& lineup, const MatchConfig& config) {
  config.validate();
  WinRateReport report;
  report.config = config;

  const std::size_t per_challenger =
      static_cast<std::size_t>(config.blocks) * static_cast<std::size_t>(config.games_per_block);
  const std::size_t total = per_challenger * lineup.challengers.size();
  std::vector<GameRecord> games(total);
  std::vector<std::exception_ptr> failures(total);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      const std::size_t ci = i / per_challenger;
      const int block = static_cast<int>((i % per_challenger) / config.games_per_block);
      const int game = static_cast<int>(i % static_cast<std::size_t>(config.games_per_block));
      try {
        const auto& challenger = lineup.challengers[ci];
        const auto seeds = derive_game_seeds(config.master_seed, ci, block, game);
        const bool first = config.alternate_first_mover ? game % 2 == 0 : true;
        games[i] = play_game(challenger, lineup.baseline, first, seeds, config.board_size,
                             make_challenger_entropy(challenger, lineup, seeds));
        games[i].block = block;
        games[i].game = game;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t ci = 0; ci < lineup.challengers.size(); ++ci) {
    ChallengerResult result;
    result.name = lineup.challengers[ci].name;
    const auto first = games.begin() + static_cast<std::ptrdiff_t>(ci * per_challenger);
    const auto first_failure = std::find_if(
        failures.begin() + static_cast<std::ptrdiff_t>(ci * per_challenger),
        failures.begin() + static_cast<std::ptrdiff_t>((ci + 1) * per_challenger),
        [](const std::exception_ptr& e) { return e != nullptr; });
    if (first_failure != failures.begin() + static_cast<std::ptrdiff_t>((ci + 1) * per_challenger)) {
      try {
        std::rethrow_exception(*first_failure);
      } catch (const std::exception& e) {
        result.error = e.what();
      } catch (...) {
        result.error = "unknown error";
      }
      report.challengers.push_back(std::move(result));
      continue;
    }
    tally(result, std::span(first, first + static_cast<std::ptrdiff_t>(per_challenger)), config);
    report.games.insert(report.games.end(), first,
                        first + static_cast<std::ptrdiff_t>(per_challenger));
    report.challengers.push_back(std::move(result));
  }
  return report;
}

namespace {
std::string format_rate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace

WinRateTable summarize_win_rates(const WinRateReport& report) {
  static constexpr const char* kOrder[] = {"A", "B", "C", "Fly"};
  std::vector<const ChallengerResult*> ordered;
  for (const char* name : kOrder)
    if (const auto* r = report.find(name)) ordered.push_back(r);
  for (const auto& r : report.challengers)
    if (std::find(ordered.begin(), ordered.end(), &r) == ordered.end()) ordered.push_back(&r);

  WinRateTable out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-12s", "");
  out.text += buf;
  for (const auto* r : ordered) {
    std::snprintf(buf, sizeof buf, "%10s", ("Agent " + r->name).c_str());
    out.text += buf;
  }
  std::snprintf(buf, sizeof buf, "%10s\n", "Human");
  out.text += buf;

  const auto row = [&](const char* label, auto value, const std::string& human) {
    std::snprintf(buf, sizeof buf, "%-12s", label);
    out.text += buf;
    for (const auto* r : ordered) {
      std::snprintf(buf, sizeof buf, "%10s", r->error ? "error" : value(*r).c_str());
      out.text += buf;
    }
    std::snprintf(buf, sizeof buf, "%10s\n", human.c_str());
    out.text += buf;
  };
  row("Win rate", [](const ChallengerResult& r) { return format_rate(r.win_rate); },
      format_rate(kHumanReferenceWinRate) + "*");
  row("Block SD", [](const ChallengerResult& r) { return format_rate(r.block_sd); }, "-");
  row("Block min", [](const ChallengerResult& r) { return format_rate(r.block_min); }, "-");
  row("Block max", [](const ChallengerResult& r) { return format_rate(r.block_max); }, "-");
  row("Games", [](const ChallengerResult& r) { return std::to_string(r.games); }, "-");
  row("Draws", [](const ChallengerResult& r) { return std::to_string(r.draws); }, "-");
  row("Reference",
      [](const ChallengerResult& r) {
        for (const auto& ref : kReferenceWinRates)
          if (r.name == ref.agent) return format_rate(ref.win_rate);
        return std::string("-");
      },
      format_rate(kHumanReferenceWinRate));
  out.text += "* human win rate is a fixed reference value, not computed here\n";

  nlohmann::json j;
  j["config"] = {{"games_per_block", report.config.games_per_block},
                 {"blocks", report.config.blocks},
                 {"board_size", report.config.board_size},
                 {"alternate_first_mover", report.config.alternate_first_mover},
                 {"master_seed", report.config.master_seed}};
  auto agents = nlohmann::json::array();
  for (const auto* r : ordered) {
    nlohmann::json a{{"agent", r->name}};
    if (r->error) {
      a["error"] = *r->error;
    } else {
      a.update({{"games", r->games},
                {"wins", r->wins},
                {"losses", r->losses},
                {"draws", r->draws},
                {"first_moves", r->first_moves},
                {"win_rate", r->win_rate},
                {"block_mean", r->block_mean},
                {"block_sd", r->block_sd},
                {"block_min", r->block_min},
                {"block_max", r->block_max},
                {"block_rates", r->block_rates}});
    }
    agents.push_back(std::move(a));
  }
  j["agents"] = std::move(agents);
  auto reference = nlohmann::json::object();
  for (const auto& ref : kReferenceWinRates) reference[ref.agent] = ref.win_rate;
  reference["Human"] = kHumanReferenceWinRate;
  j["reference"] = std::move(reference);
  out.json = j.dump(2) + "\n";
  return out;
}

void write_results(std::ostream& out, const WinRateReport& report) {
  out << "challenger\tblock\tgame\tfirst_mover\toutcome\tmoves\n";
  for (const auto& g : report.games) {
    out << g.challenger << '\t' << g.block << '\t' << g.game << '\t'
        << (g.challenger_first ? "challenger" : "baseline") << '\t' << to_string(g.outcome) << '\t';
    for (std::size_t i = 0; i < g.moves.size(); ++i) {
      if (i) out << ';';
      out << g.moves[i].row << ',' << g.moves[i].col;
    }
    out << '\n';
  }
}

}  // namespace flyai
