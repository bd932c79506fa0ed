#include "flyai/game.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace flyai {

char to_char(Cell c) noexcept {
  switch (c) {
    case Cell::X:
      return 'X';
    case Cell::O:
      return 'O';
    default:
      return '.';
  }
}

char to_char(Player p) noexcept { return to_char(to_cell(p)); }

std::optional<Player> player_from_char(char c) noexcept {
  if (c == 'X' || c == 'x') return Player::X;
  if (c == 'O' || c == 'o') return Player::O;
  return std::nullopt;
}

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::Won:
      return "Won";
    case Status::Draw:
      return "Draw";
    default:
      return "Ongoing";
  }
}

Board::Board(int size) : size_(size) {
  if (size < kMinBoardSize || size > kMaxBoardSize) {
    throw InvalidConfiguration("board size must be in [" +
                               std::to_string(kMinBoardSize) + ", " +
                               std::to_string(kMaxBoardSize) + "], got " +
                               std::to_string(size));
  }
  cells_.assign(static_cast<std::size_t>(size) * static_cast<std::size_t>(size),
                Cell::Empty);
}

int Board::count(Cell c) const noexcept {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), c));
}

std::vector<std::string> Board::rows() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(size_));
  for (int r = 0; r < size_; ++r) {
    std::string line;
    line.reserve(static_cast<std::size_t>(size_));
    for (int c = 0; c < size_; ++c) line.push_back(to_char(at(r, c)));
    out.push_back(std::move(line));
  }
  return out;
}

std::string Board::render() const {
  std::string out;
  for (const auto& row : rows()) {
    out += row;
    out += '\n';
  }
  return out;
}

Board Board::parse(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  Board board(static_cast<int>(lines.size()));
  for (int r = 0; r < board.size(); ++r) {
    const auto line = lines[static_cast<std::size_t>(r)];
    if (static_cast<int>(line.size()) != board.size()) {
      throw InvalidConfiguration("board row " + std::to_string(r) +
                                 " has wrong width");
    }
    for (int c = 0; c < board.size(); ++c) {
      const char ch = line[static_cast<std::size_t>(c)];
      if (ch == '.') continue;
      auto p = player_from_char(ch);
      if (!p) throw InvalidConfiguration(std::string("bad board character '") + ch + "'");
      board.set({r, c}, to_cell(*p));
    }
  }
  return board;
}

GameState::GameState(int size) : board_(size) {}

void GameState::play(Move m) {
  if (terminal()) throw IllegalMove("game is over");
  if (!board_.in_bounds(m)) {
    throw IllegalMove("move (" + std::to_string(m.row) + "," +
                      std::to_string(m.col) + ") is out of bounds");
  }
  if (board_.at(m) != Cell::Empty) {
    throw IllegalMove("cell (" + std::to_string(m.row) + "," +
                      std::to_string(m.col) + ") is occupied");
  }
  board_.set(m, to_cell(to_move_));
  history_.emplace_back(to_move_, m);
  if (auto w = check_winner(board_, m)) {
    status_ = Status::Won;
    winner_ = w;
  } else if (board_.full()) {
    status_ = Status::Draw;
  }
  to_move_ = opponent(to_move_);
}

GameState new_game(int size) { return GameState(size); }

GameState apply_move(const GameState& state, Move move) {
  GameState next = state;
  next.play(move);
  return next;
}

namespace {
constexpr std::array<std::pair<int, int>, 4> kDirections{
    {{0, 1}, {1, 0}, {1, 1}, {1, -1}}};
}

std::optional<Player> check_winner(const Board& board, Move last_move) {
  if (!board.in_bounds(last_move) || board.at(last_move) == Cell::Empty) {
    throw ContractViolation("check_winner: last move is not an occupied cell");
  }
  const Cell stone = board.at(last_move);
  for (auto [dr, dc] : kDirections) {
    int run = 1;
    for (int sign : {1, -1}) {
      Move m{last_move.row + sign * dr, last_move.col + sign * dc};
      while (board.in_bounds(m) && board.at(m) == stone) {
        ++run;
        m.row += sign * dr;
        m.col += sign * dc;
      }
    }
    if (run >= kWinLength) return static_cast<Player>(stone);
  }
  return std::nullopt;
}

std::vector<Move> legal_moves(const GameState& state) {
  std::vector<Move> out;
  if (state.terminal()) return out;
  const auto& board = state.board();
  for (int r = 0; r < board.size(); ++r)
    for (int c = 0; c < board.size(); ++c)
      if (board.at(r, c) == Cell::Empty) out.push_back({r, c});
  return out;
}

GameState replay(int size, const std::vector<Move>& moves) {
  GameState state(size);
  for (const auto& m : moves) state.play(m);
  return state;
}

}  // namespace flyai
