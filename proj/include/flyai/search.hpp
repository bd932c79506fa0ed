#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "flyai/entropy.hpp"
#include "flyai/game.hpp"

namespace flyai {

using Score = std::int64_t;

inline constexpr Score kScoreInfinity = std::numeric_limits<Score>::max() / 4;

// Pattern scores for runs of one colour along a line. "Open" means both ends
// of the run are empty cells; "closed" means exactly one end is.
struct EvaluationTable {
  static constexpr Score five = 1'000'000;
  static constexpr Score open_four = 100'000;
  static constexpr Score closed_four = 10'000;
  static constexpr Score open_three = 1'000;
  static constexpr Score closed_three = 100;
  static constexpr Score open_two = 10;
  static constexpr Score closed_two = 1;

  // Each player's non-five total is capped here, so one five outweighs any
  // combination of lesser patterns.
  static constexpr Score non_five_cap = five - 1;

  static Score run_score(int length, int open_ends) noexcept;
};

struct SearchConfig {
  int base_depth = 2;
  int candidate_radius = 2;
  int scorelist_cap = 5;
  // Drop root moves proven to lose (score <= -win_threshold) from the score
  // list whenever some move avoids a proven loss.
  bool discard_forced_losses = false;
  // Root scores at or above this mean a forced win was found.
  Score win_threshold = EvaluationTable::five;

  void validate(bool method_a_enabled = false) const;
};

// Static evaluation: perspective's patterns minus the opponent's, over every
// row, column and diagonal. Antisymmetric in the perspective.
Score evaluate(const Board& board, Player perspective);

// Score assigned to a node where `winner` just completed five with
// `depth_remaining` plies of search budget left. Sooner wins score higher.
Score terminal_score(Player winner, Player perspective, int depth_remaining) noexcept;

struct SearchResult {
  Score score = 0;
  std::vector<Move> best_moves;  // every root move attaining `score`
};

// Empty cells within Chebyshev distance `radius` of a stone, row-major; the
// centre cell on an empty board; nothing once the game is over.
std::vector<Move> candidate_moves(const GameState& state, int radius);

// Plain minimax over candidate moves, no pruning. `maximizing` says whether
// the side to move is the player whose score is being maximised.
SearchResult minimax(const GameState& state, int depth, bool maximizing,
                     const SearchConfig& config = {});

// Alpha-beta search with the same leaf scoring and move order as minimax().
// Root ties are resolved exactly, so the optimal-move set matches minimax
// whenever the root value lies inside (alpha, beta).
SearchResult alphabeta(const GameState& state, int depth, Score alpha, Score beta,
                       bool maximizing, const SearchConfig& config = {});

struct EmotionalState {
  int depth = 1;
};

struct Stimulation {
  int level = 0;
};

inline constexpr int kMinEmotionalDepth = 1;
inline constexpr int kMaxEmotionalDepth = 3;
inline constexpr int kMaxStimulation = 10;

EmotionalState map_sample_to_depth(int sample);
Stimulation map_sample_to_stimulation(int sample);

struct ScoredMove {
  Move move;
  Score score = 0;
  friend bool operator==(const ScoredMove&, const ScoredMove&) = default;
};

// Every candidate root move scored by a full-window alpha-beta on the child at
// depth-1, sorted best-first (stable in row-major order). Not truncated.
std::vector<ScoredMove> score_all_root_moves(const GameState& state, int depth,
                                             const SearchConfig& config = {});
// Removes proven losses (see SearchConfig::discard_forced_losses) from a
// best-first list; a list where every move loses is returned unchanged.
std::vector<ScoredMove> retained_root_moves(std::vector<ScoredMove> sorted,
                                            const SearchConfig& config);
// score_all_root_moves() filtered by retained_root_moves() and truncated to the top scorelist_cap entries.
std::vector<ScoredMove> scored_root_moves(const GameState& state, int depth,
                                          const SearchConfig& config = {});

// Picks an entry from a best-first score list. A forced win at the head is
// always taken; otherwise the index grows with the stimulation level.
ScoredMove select_with_stimulation(std::span<const ScoredMove> scorelist, Stimulation stim,
                                   const SearchConfig& config = {});
std::size_t stimulation_index(Stimulation stim, int scorelist_cap, std::size_t list_size);

// Uniform choice among equally scored moves. Seeded separately from the
// injection entropy so that entropy consumption stays one sample per method.
class TieBreaker {
 public:
  explicit TieBreaker(std::uint64_t seed) : rng_(seed) {}
  Move pick(std::span<const Move> moves);

 private:
  std::mt19937_64 rng_;
};

Move break_ties(std::span<const Move> equal_best, TieBreaker& tie_breaker);

struct AgentSpec {
  std::string name = "Original";
  bool method_a_enabled = false;
  bool method_b_enabled = false;
  EntropySourceKind entropy_kind = EntropySourceKind::MersenneTwister;
  SearchConfig search;
  std::uint64_t tie_break_seed = 0;
  std::string description;

  bool uses_entropy() const noexcept { return method_a_enabled || method_b_enabled; }
};

// The reference lineup: the unmodified agent and the four injected variants.
AgentSpec original_agent();
AgentSpec agent_a();
AgentSpec agent_b();
AgentSpec agent_c();
AgentSpec agent_fly();
std::vector<AgentSpec> standard_agents();
std::optional<AgentSpec> find_agent(std::string_view name);

struct MoveDecision {
  Move move;
  Score score = 0;
  int depth = 0;
  std::optional<int> depth_sample;
  std::optional<int> stimulation;
  std::optional<int> stimulation_sample;
};

// One turn for `agent`. Consumes exactly one entropy sample per enabled
// injection method (depth sample first). `entropy` may be null only when no
// method is enabled.
MoveDecision choose_move(const AgentSpec& agent, const GameState& state, EntropySource* entropy,
                         TieBreaker& tie_breaker);

// An agent bound to its entropy source and tie-break generator for one game.
class Agent {
 public:
  Agent(AgentSpec spec, std::optional<EntropySource> entropy);

  const AgentSpec& spec() const noexcept { return spec_; }
  MoveDecision choose(const GameState& state);
  const std::optional<EntropySource>& entropy() const noexcept { return entropy_; }

 private:
  AgentSpec spec_;
  std::optional<EntropySource> entropy_;
  TieBreaker tie_breaker_;
};

}  // namespace flyai
