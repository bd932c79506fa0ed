#pragma once

#include <array>
#include <vector>

#include "flyai/game.hpp"
#include "flyai/search.hpp"

namespace flyai::detail {

constexpr int side_index(Player p) noexcept { return p == Player::X ? 0 : 1; }

// Every row, column and diagonal of a board as lists of cell indices.
struct LineGeometry {
  int size = 0;
  std::vector<std::vector<int>> lines;
  // For each cell, the line it lies on in each of the four directions.
  std::vector<std::array<int, 4>> cell_lines;

  static const LineGeometry& for_size(int size);
};

struct LineScore {
  std::array<Score, 2> non_five{};
  std::array<int, 2> fives{};
};

struct PatternTotals {
  std::array<Score, 2> non_five{};
  std::array<int, 2> fives{};
};

LineScore score_line(const std::vector<int>& line, const std::vector<Cell>& cells);

// Mutable board with per-line pattern caches; placing or removing a stone
// rescores only the four lines through it.
class SearchBoard {
 public:
  SearchBoard(const Board& board, int radius);

  int size() const noexcept { return size_; }
  void place(int cell, Player p);
  void remove(int cell);
  bool has_five(Player p) const noexcept;
  Score evaluate(Player perspective) const;
  void candidates(std::vector<int>& out) const;

 private:
  void add(const LineScore& s, int sign);
  void rescore(int cell);
  void bump_near(int cell, int delta);

  const LineGeometry& geo_;
  int size_;
  int radius_;
  std::vector<Cell> cells_;
  std::vector<LineScore> line_scores_;
  PatternTotals totals_;
  std::vector<int> near_;  // stones within the candidate radius of each cell
  int stones_ = 0;
};

}  // namespace flyai::detail
