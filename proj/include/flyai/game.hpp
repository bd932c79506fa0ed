#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flyai {

class InvalidConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IllegalMove : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Player : std::uint8_t { X = 1, O = 2 };
enum class Cell : std::uint8_t { Empty = 0, X = 1, O = 2 };

constexpr Player opponent(Player p) noexcept {
  return p == Player::X ? Player::O : Player::X;
}
constexpr Cell to_cell(Player p) noexcept { return static_cast<Cell>(p); }
char to_char(Cell c) noexcept;
char to_char(Player p) noexcept;
std::optional<Player> player_from_char(char c) noexcept;

struct Move {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Move&, const Move&) = default;
};

inline constexpr int kMinBoardSize = 5;
inline constexpr int kMaxBoardSize = 19;
inline constexpr int kDefaultBoardSize = 15;
inline constexpr int kWinLength = 5;

class Board {
 public:
  explicit Board(int size);

  int size() const noexcept { return size_; }
  bool in_bounds(Move m) const noexcept {
    return m.row >= 0 && m.row < size_ && m.col >= 0 && m.col < size_;
  }
  Cell at(Move m) const { return cells_[index(m)]; }
  Cell at(int row, int col) const { return at(Move{row, col}); }
  void set(Move m, Cell c) { cells_[index(m)] = c; }

  int count(Cell c) const noexcept;
  bool full() const noexcept { return count(Cell::Empty) == 0; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  // One row per line, `.` `X` `O`, each line LF-terminated.
  std::string render() const;
  std::vector<std::string> rows() const;
  // Inverse of render(); accepts rows with or without trailing newline.
  static Board parse(std::string_view text);

  friend bool operator==(const Board&, const Board&) = default;

 private:
  std::size_t index(Move m) const {
    return static_cast<std::size_t>(m.row) * static_cast<std::size_t>(size_) +
           static_cast<std::size_t>(m.col);
  }

  int size_;
  std::vector<Cell> cells_;
};

enum class Status { Ongoing, Won, Draw };
std::string_view to_string(Status s) noexcept;

class GameState {
 public:
  explicit GameState(int size);

  const Board& board() const noexcept { return board_; }
  Player to_move() const noexcept { return to_move_; }
  Status status() const noexcept { return status_; }
  std::optional<Player> winner() const noexcept { return winner_; }
  bool terminal() const noexcept { return status_ != Status::Ongoing; }
  const std::vector<std::pair<Player, Move>>& history() const noexcept {
    return history_;
  }
  std::optional<Move> last_move() const noexcept {
    if (history_.empty()) return std::nullopt;
    return history_.back().second;
  }

  // In-place variant of apply_move, for callers holding exclusive access.
  void play(Move m);

 private:
  Board board_;
  Player to_move_ = Player::X;
  std::vector<std::pair<Player, Move>> history_;
  Status status_ = Status::Ongoing;
  std::optional<Player> winner_;
};

GameState new_game(int size = kDefaultBoardSize);
GameState apply_move(const GameState& state, Move move);
std::optional<Player> check_winner(const Board& board, Move last_move);
std::vector<Move> legal_moves(const GameState& state);
// Rebuilds a state by replaying the given moves from an empty board.
GameState replay(int size, const std::vector<Move>& moves);

}  // namespace flyai
