#include "flyai/search.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "line_geometry.hpp"

namespace flyai {

Score EvaluationTable::run_score(int length, int open_ends) noexcept {
  if (length >= kWinLength) return five;
  if (open_ends <= 0) return 0;
  switch (length) {
    case 4:
      return open_ends == 2 ? open_four : closed_four;
    case 3:
      return open_ends == 2 ? open_three : closed_three;
    case 2:
      return open_ends == 2 ? open_two : closed_two;
    default:
      return 0;
  }
}

void SearchConfig::validate(bool method_a_enabled) const {
  if (base_depth < 1) throw InvalidConfiguration("base_depth must be >= 1");
  if (method_a_enabled && base_depth > kMaxEmotionalDepth)
    throw InvalidConfiguration("base_depth must be in [1,3] when depth injection is enabled");
  if (candidate_radius < 1) throw InvalidConfiguration("candidate_radius must be >= 1");
  if (scorelist_cap < 1) throw InvalidConfiguration("scorelist_cap must be >= 1");
}

namespace {

Score combine(const detail::PatternTotals& totals, Player perspective) {
  const auto side = [&](Player p) {
    const auto i = detail::side_index(p);
    return static_cast<Score>(totals.fives[i]) * EvaluationTable::five +
           std::min(totals.non_five[i], EvaluationTable::non_five_cap);
  };
  return side(perspective) - side(opponent(perspective));
}

}  // namespace

Score evaluate(const Board& board, Player perspective) {
  const auto& geo = detail::LineGeometry::for_size(board.size());
  detail::PatternTotals totals;
  const auto& cells = board.cells();
  for (const auto& line : geo.lines) {
    const auto s = detail::score_line(line, cells);
    for (int i = 0; i < 2; ++i) {
      totals.non_five[i] += s.non_five[i];
      totals.fives[i] += s.fives[i];
    }
  }
  return combine(totals, perspective);
}

Score terminal_score(Player winner, Player perspective, int depth_remaining) noexcept {
  const Score magnitude = EvaluationTable::five + depth_remaining;
  return winner == perspective ? magnitude : -magnitude;
}

// ---------------------------------------------------------------------------
// Incremental board used inside the search

namespace detail {

SearchBoard::SearchBoard(const Board& board, int radius)
    : geo_(LineGeometry::for_size(board.size())),
      size_(board.size()),
      radius_(radius),
      cells_(board.cells()),
      line_scores_(geo_.lines.size()),
      near_(cells_.size(), 0) {
  for (std::size_t l = 0; l < geo_.lines.size(); ++l) {
    line_scores_[l] = score_line(geo_.lines[l], cells_);
    add(line_scores_[l], 1);
  }
  for (int i = 0; i < static_cast<int>(cells_.size()); ++i) {
    if (cells_[static_cast<std::size_t>(i)] != Cell::Empty) {
      ++stones_;
      bump_near(i, 1);
    }
  }
}

void SearchBoard::add(const LineScore& s, int sign) {
  for (int i = 0; i < 2; ++i) {
    totals_.non_five[i] += sign * s.non_five[i];
    totals_.fives[i] += sign * s.fives[i];
  }
}

void SearchBoard::rescore(int cell) {
  for (int line : geo_.cell_lines[static_cast<std::size_t>(cell)]) {
    if (line < 0) continue;
    auto& slot = line_scores_[static_cast<std::size_t>(line)];
    add(slot, -1);
    slot = score_line(geo_.lines[static_cast<std::size_t>(line)], cells_);
    add(slot, 1);
  }
}

void SearchBoard::bump_near(int cell, int delta) {
  const int row = cell / size_;
  const int col = cell % size_;
  const int r0 = std::max(0, row - radius_), r1 = std::min(size_ - 1, row + radius_);
  const int c0 = std::max(0, col - radius_), c1 = std::min(size_ - 1, col + radius_);
  for (int r = r0; r <= r1; ++r) {
    int* base = near_.data() + r * size_;
    for (int c = c0; c <= c1; ++c) base[c] += delta;
  }
}

void SearchBoard::place(int cell, Player p) {
  cells_[static_cast<std::size_t>(cell)] = to_cell(p);
  ++stones_;
  rescore(cell);
  bump_near(cell, 1);
}

void SearchBoard::remove(int cell) {
  cells_[static_cast<std::size_t>(cell)] = Cell::Empty;
  --stones_;
  rescore(cell);
  bump_near(cell, -1);
}

bool SearchBoard::has_five(Player p) const noexcept {
  return totals_.fives[side_index(p)] > 0;
}

Score SearchBoard::evaluate(Player perspective) const { return combine(totals_, perspective); }

void SearchBoard::candidates(std::vector<int>& out) const {
  out.clear();
  const int total = static_cast<int>(cells_.size());
  if (stones_ == 0) {
    out.push_back((size_ / 2) * size_ + size_ / 2);
    return;
  }
  for (int i = 0; i < total; ++i)
    if (cells_[static_cast<std::size_t>(i)] == Cell::Empty && near_[static_cast<std::size_t>(i)] > 0)
      out.push_back(i);
  if (out.empty()) {
    // No empty cell near any stone: fall back to every empty cell.
    for (int i = 0; i < total; ++i)
      if (cells_[static_cast<std::size_t>(i)] == Cell::Empty) out.push_back(i);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Tree search

namespace {

template <bool kPrune>
class TreeSearch {
 public:
  TreeSearch(const GameState& state, Player perspective, const SearchConfig& config, int depth)
      : board_(state.board(), config.candidate_radius),
        perspective_(perspective),
        scratch_(static_cast<std::size_t>(std::max(depth, 0)) + 1) {}

  detail::SearchBoard& board() { return board_; }
  int size() const { return board_.size(); }

  // Value of the position after `cell` is played by `mover` with `depth`
  // plies remaining below it.
  Score child_value(int cell, Player mover, int depth, Score alpha, Score beta,
                    bool child_maximizing) {
    board_.place(cell, mover);
    Score v;
    if (board_.has_five(mover))
      v = terminal_score(mover, perspective_, depth);
    else
      v = node(depth, alpha, beta, child_maximizing, opponent(mover));
    board_.remove(cell);
    return v;
  }

  Score node(int depth, Score alpha, Score beta, bool maximizing, Player mover) {
    if (depth == 0) return board_.evaluate(perspective_);
    auto& moves = scratch_[static_cast<std::size_t>(depth)];
    board_.candidates(moves);
    if (moves.empty()) return board_.evaluate(perspective_);

    Score best = maximizing ? -kScoreInfinity : kScoreInfinity;
    for (int cell : moves) {
      const Score v = child_value(cell, mover, depth - 1, alpha, beta, !maximizing);
      if (maximizing) {
        best = std::max(best, v);
        if constexpr (kPrune) {
          alpha = std::max(alpha, v);
          if (alpha >= beta) break;
        }
      } else {
        best = std::min(best, v);
        if constexpr (kPrune) {
          beta = std::min(beta, v);
          if (alpha >= beta) break;
        }
      }
    }
    return best;
  }

 private:
  detail::SearchBoard board_;
  Player perspective_;
  std::vector<std::vector<int>> scratch_;
};

Move to_move(int cell, int size) { return {cell / size, cell % size}; }

template <bool kPrune>
SearchResult search_root(const GameState& state, int depth, Score alpha, Score beta,
                         bool maximizing, const SearchConfig& config) {
  if (state.terminal()) throw ContractViolation("search called on a terminal state");
  if (depth < 0) throw ContractViolation("search depth must be >= 0");
  const Player mover = state.to_move();
  const Player perspective = maximizing ? mover : opponent(mover);
  if (depth == 0) return {evaluate(state.board(), perspective), {}};

  TreeSearch<kPrune> search(state, perspective, config, depth);
  std::vector<int> moves;
  search.board().candidates(moves);
  if (moves.empty()) return {evaluate(state.board(), perspective), {}};

  SearchResult result;
  bool have_best = false;
  for (int cell : moves) {
    Score lo = alpha, hi = beta;
    if (kPrune && have_best) {
      // Widen by one so equal-valued siblings are scored exactly.
      if (maximizing)
        lo = std::max(alpha, result.score - 1);
      else
        hi = std::min(beta, result.score + 1);
    }
    const Score v = search.child_value(cell, mover, depth - 1, lo, hi, !maximizing);
    const bool better = !have_best || (maximizing ? v > result.score : v < result.score);
    if (better) {
      result.score = v;
      result.best_moves.assign(1, to_move(cell, search.size()));
      have_best = true;
    } else if (v == result.score) {
      result.best_moves.push_back(to_move(cell, search.size()));
    }
  }
  return result;
}

}  // namespace

std::vector<Move> candidate_moves(const GameState& state, int radius) {
  if (state.terminal()) return {};
  if (radius < 0) throw ContractViolation("candidate radius must be >= 0");
  detail::SearchBoard board(state.board(), radius);
  std::vector<int> cells;
  board.candidates(cells);
  std::vector<Move> out;
  out.reserve(cells.size());
  for (int c : cells) out.push_back(to_move(c, board.size()));
  return out;
}

SearchResult minimax(const GameState& state, int depth, bool maximizing,
                     const SearchConfig& config) {
  return search_root<false>(state, depth, -kScoreInfinity, kScoreInfinity, maximizing, config);
}

SearchResult alphabeta(const GameState& state, int depth, Score alpha, Score beta,
                       bool maximizing, const SearchConfig& config) {
  return search_root<true>(state, depth, alpha, beta, maximizing, config);
}

// ---------------------------------------------------------------------------
// Injection mappings

EmotionalState map_sample_to_depth(int sample) {
  if (sample < 0 || sample > kMaxSample)
    throw ContractViolation("depth sample outside [0,49]: " + std::to_string(sample));
  return {kMinEmotionalDepth + sample * 3 / kSampleRange};
}

Stimulation map_sample_to_stimulation(int sample) {
  if (sample < 0 || sample > kMaxSample)
    throw ContractViolation("stimulation sample outside [0,49]: " + std::to_string(sample));
  return {std::min(sample * (kMaxStimulation + 1) / kSampleRange, kMaxStimulation)};
}

std::vector<ScoredMove> score_all_root_moves(const GameState& state, int depth,
                                             const SearchConfig& config) {
  if (state.terminal()) throw ContractViolation("scored_root_moves called on a terminal state");
  if (depth < 1) throw ContractViolation("scored_root_moves needs depth >= 1");
  const Player mover = state.to_move();
  TreeSearch<true> search(state, mover, config, depth);
  std::vector<int> moves;
  search.board().candidates(moves);

  std::vector<ScoredMove> out;
  out.reserve(moves.size());
  for (int cell : moves) {
    const Score v =
        search.child_value(cell, mover, depth - 1, -kScoreInfinity, kScoreInfinity, false);
    out.push_back({to_move(cell, search.size()), v});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredMove& a, const ScoredMove& b) { return a.score > b.score; });
  return out;
}

std::vector<ScoredMove> retained_root_moves(std::vector<ScoredMove> sorted,
                                            const SearchConfig& config) {
  if (!config.discard_forced_losses || sorted.empty() ||
      sorted.front().score <= -config.win_threshold)
    return sorted;
  std::erase_if(sorted, [&](const ScoredMove& m) { return m.score <= -config.win_threshold; });
  return sorted;
}

std::vector<ScoredMove> scored_root_moves(const GameState& state, int depth,
                                          const SearchConfig& config) {
  auto all = retained_root_moves(score_all_root_moves(state, depth, config), config);
  if (all.size() > static_cast<std::size_t>(config.scorelist_cap))
    all.resize(static_cast<std::size_t>(config.scorelist_cap));
  return all;
}

std::size_t stimulation_index(Stimulation stim, int scorelist_cap, std::size_t list_size) {
  if (list_size == 0) throw ContractViolation("empty score list");
  if (stim.level < 0 || stim.level > kMaxStimulation)
    throw ContractViolation("stimulation level outside [0,10]");
  const auto index = static_cast<std::size_t>(stim.level * scorelist_cap / (kMaxStimulation + 1));
  return std::min(index, list_size - 1);
}

ScoredMove select_with_stimulation(std::span<const ScoredMove> scorelist, Stimulation stim,
                                   const SearchConfig& config) {
  if (scorelist.empty()) throw ContractViolation("select_with_stimulation: empty score list");
  if (scorelist.front().score >= config.win_threshold) return scorelist.front();
  return scorelist[stimulation_index(stim, config.scorelist_cap, scorelist.size())];
}

Move TieBreaker::pick(std::span<const Move> moves) {
  if (moves.empty()) throw ContractViolation("break_ties: empty move list");
  if (moves.size() == 1) return moves.front();
  // Rejection sampling keeps the choice exactly uniform and platform-independent.
  const std::uint64_t n = moves.size();
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  std::uint64_t word;
  do {
    word = rng_();
  } while (word > limit);
  return moves[static_cast<std::size_t>(word % n)];
}

Move break_ties(std::span<const Move> equal_best, TieBreaker& tie_breaker) {
  return tie_breaker.pick(equal_best);
}

// ---------------------------------------------------------------------------
// Agents

AgentSpec original_agent() {
  AgentSpec a;
  a.name = "Original";
  a.description = "Unmodified alpha-beta agent at the base depth";
  return a;
}

AgentSpec agent_a() {
  AgentSpec a;
  a.name = "A";
  a.method_a_enabled = true;
  a.entropy_kind = EntropySourceKind::MersenneTwister;
  a.description = "Depth injection (emotional state 1-3) driven by Mersenne Twister";
  return a;
}

AgentSpec agent_b() {
  AgentSpec a;
  a.name = "B";
  a.method_b_enabled = true;
  a.entropy_kind = EntropySourceKind::MersenneTwister;
  a.description = "Stimulation injection (0-10) over the score list, Mersenne Twister";
  return a;
}

AgentSpec agent_c() {
  AgentSpec a;
  a.name = "C";
  a.method_a_enabled = true;
  a.method_b_enabled = true;
  a.entropy_kind = EntropySourceKind::MersenneTwister;
  a.description = "Depth and stimulation injection, Mersenne Twister";
  return a;
}

AgentSpec agent_fly() {
  AgentSpec a;
  a.name = "Fly";
  a.method_a_enabled = true;
  a.method_b_enabled = true;
  a.entropy_kind = EntropySourceKind::BRNG1;
  a.description = "Depth and stimulation injection driven by fly flight vectors (bRNG1)";
  return a;
}

std::vector<AgentSpec> standard_agents() {
  return {original_agent(), agent_a(), agent_b(), agent_c(), agent_fly()};
}

std::optional<AgentSpec> find_agent(std::string_view name) {
  std::string lower(name);
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower.starts_with("agent ")) lower.erase(0, 6);
  for (auto& spec : standard_agents()) {
    std::string candidate = spec.name;
    for (auto& ch : candidate)
      ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (candidate == lower) return spec;
  }
  return std::nullopt;
}

MoveDecision choose_move(const AgentSpec& agent, const GameState& state, EntropySource* entropy,
                         TieBreaker& tie_breaker) {
  if (state.terminal()) throw ContractViolation("choose_move called on a terminal state");
  agent.search.validate(agent.method_a_enabled);
  if (agent.uses_entropy() && entropy == nullptr)
    throw EntropyConfigurationError("agent " + agent.name + " needs an entropy source");

  MoveDecision decision;
  decision.depth = agent.search.base_depth;
  if (agent.method_a_enabled) {
    const int sample = entropy->next_sample();
    decision.depth_sample = sample;
    decision.depth = map_sample_to_depth(sample).depth;
  }

  if (agent.method_b_enabled) {
    const int sample = entropy->next_sample();
    const Stimulation stim = map_sample_to_stimulation(sample);
    decision.stimulation_sample = sample;
    decision.stimulation = stim.level;

    const auto all =
        retained_root_moves(score_all_root_moves(state, decision.depth, agent.search), agent.search);
    const std::size_t kept =
        std::min(all.size(), static_cast<std::size_t>(agent.search.scorelist_cap));
    const auto chosen =
        select_with_stimulation(std::span(all).first(kept), stim, agent.search);
    // Ties are drawn from the whole scored list, not just the retained head.
    std::vector<Move> ties;
    for (const auto& sm : all)
      if (sm.score == chosen.score) ties.push_back(sm.move);
    decision.move = break_ties(ties, tie_breaker);
    decision.score = chosen.score;
    return decision;
  }

  const auto result =
      alphabeta(state, decision.depth, -kScoreInfinity, kScoreInfinity, true, agent.search);
  decision.move = break_ties(result.best_moves, tie_breaker);
  decision.score = result.score;
  return decision;
}

Agent::Agent(AgentSpec spec, std::optional<EntropySource> entropy)
    : spec_(std::move(spec)), entropy_(std::move(entropy)), tie_breaker_(spec_.tie_break_seed) {
  spec_.search.validate(spec_.method_a_enabled);
  if (spec_.uses_entropy() && !entropy_)
    throw EntropyConfigurationError("agent " + spec_.name + " needs an entropy source");
}

MoveDecision Agent::choose(const GameState& state) {
  return choose_move(spec_, state, entropy_ ? &*entropy_ : nullptr, tie_breaker_);
}

}  // namespace flyai
