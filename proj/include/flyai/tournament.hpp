#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flyai/entropy.hpp"
#include "flyai/game.hpp"
#include "flyai/search.hpp"

namespace flyai {

struct MatchConfig {
  int games_per_block = 10;
  int blocks = 50;
  int board_size = 11;
  bool alternate_first_mover = true;
  std::uint64_t master_seed = 42;
  // Worker threads for independent games; 0 picks hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

struct AgentLineup {
  AgentSpec baseline = original_agent();
  std::vector<AgentSpec> challengers;
  // Trajectory for bionic challengers; each game starts at a seed-derived offset.
  std::shared_ptr<const std::vector<DetectionRecord>> trajectory;
};

// Challengers A, B, C and Fly against the unmodified agent.
AgentLineup standard_lineup(std::shared_ptr<const std::vector<DetectionRecord>> trajectory,
                            const std::vector<std::string>& names);
AgentLineup standard_lineup(std::shared_ptr<const std::vector<DetectionRecord>> trajectory);

enum class Outcome { ChallengerWin, BaselineWin, Draw };
std::string_view to_string(Outcome o) noexcept;

struct GameSeeds {
  std::uint64_t game = 0;
  std::uint64_t challenger_entropy = 0;
  std::uint64_t challenger_tie_break = 0;
  std::uint64_t baseline_tie_break = 0;
};

// seed = mix(master, challenger index, block, game) with a SplitMix64 finalizer
// applied after folding in each coordinate; the per-role seeds are further
// mixes of that game seed with role tags 1, 2, 3.
std::uint64_t mix_seed(std::uint64_t state, std::uint64_t value) noexcept;
GameSeeds derive_game_seeds(std::uint64_t master_seed, std::size_t challenger, int block, int game);

struct GameRecord {
  std::string challenger;
  int block = 0;
  int game = 0;
  Player challenger_color = Player::X;  // X always moves first
  bool challenger_first = true;
  Outcome outcome = Outcome::Draw;
  std::vector<Move> moves;
  GameSeeds seeds;
};

// Plays one game to completion; the first mover plays X. The challenger uses
// `challenger_entropy` when its spec needs one. Tie-break seeds in the specs
// are replaced by the ones in `seeds`.
GameRecord play_game(const AgentSpec& challenger, const AgentSpec& baseline, bool challenger_first,
                     const GameSeeds& seeds, int board_size,
                     std::optional<EntropySource> challenger_entropy);

// Entropy source for a challenger in one game (nullopt when it uses none).
std::optional<EntropySource> make_challenger_entropy(const AgentSpec& challenger,
                                                     const AgentLineup& lineup,
                                                     const GameSeeds& seeds);

// Outcome obtained by replaying the recorded moves on a fresh board.
Outcome replay_outcome(const GameRecord& record, int board_size);

struct ChallengerResult {
  std::string name;
  int games = 0;
  int wins = 0;
  int losses = 0;
  int draws = 0;
  int first_moves = 0;          // games where the challenger moved first
  double win_rate = 0.0;        // draws count as half a win
  std::vector<double> block_rates;
  double block_mean = 0.0;
  double block_sd = 0.0;        // sample SD across blocks (n-1); 0 for one block
  double block_min = 0.0;
  double block_max = 0.0;
  std::optional<std::string> error;  // set when the challenger was aborted
};

struct WinRateReport {
  MatchConfig config;
  std::vector<ChallengerResult> challengers;
  std::vector<GameRecord> games;

  const ChallengerResult* find(std::string_view name) const;
};

WinRateReport run_match(const AgentLineup& lineup, const MatchConfig& config);

// Win rate against the original agent reported for the human players; shown
// for reference only, never computed.
inline constexpr double kHumanReferenceWinRate = 0.39;

struct ReferenceRow {
  const char* agent;
  double win_rate;
};
inline constexpr ReferenceRow kReferenceWinRates[] = {
    {"A", 0.61}, {"B", 0.59}, {"C", 0.34}, {"Fly", 0.68}};

struct WinRateTable {
  std::string text;
  std::string json;
};

WinRateTable summarize_win_rates(const WinRateReport& report);

// One tab-separated line per game:
// challenger block game first_mover outcome moves(`r,c;r,c;...`)
void write_results(std::ostream& out, const WinRateReport& report);

}  // namespace flyai
