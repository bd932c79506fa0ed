#include "line_geometry.hpp"

namespace flyai::detail {

namespace {

LineGeometry build(int n) {
  LineGeometry geo;
  geo.size = n;
  geo.cell_lines.assign(static_cast<std::size_t>(n * n), {-1, -1, -1, -1});
  const auto trace = [&](int dir, int r, int c, int dr, int dc) {
    std::vector<int> line;
    for (; r >= 0 && r < n && c >= 0 && c < n; r += dr, c += dc) line.push_back(r * n + c);
    const int id = static_cast<int>(geo.lines.size());
    for (int cell : line) geo.cell_lines[static_cast<std::size_t>(cell)][dir] = id;
    geo.lines.push_back(std::move(line));
  };
  for (int r = 0; r < n; ++r) trace(0, r, 0, 0, 1);
  for (int c = 0; c < n; ++c) trace(1, 0, c, 1, 0);
  for (int r = n - 1; r >= 0; --r) trace(2, r, 0, 1, 1);
  for (int c = 1; c < n; ++c) trace(2, 0, c, 1, 1);
  for (int c = 0; c < n; ++c) trace(3, 0, c, 1, -1);
  for (int r = 1; r < n; ++r) trace(3, r, n - 1, 1, -1);
  return geo;
}

}  // namespace

const LineGeometry& LineGeometry::for_size(int size) {
  static const auto table = [] {
    std::array<LineGeometry, kMaxBoardSize + 1> t;
    for (int n = kMinBoardSize; n <= kMaxBoardSize; ++n) t[static_cast<std::size_t>(n)] = build(n);
    return t;
  }();
  if (size < kMinBoardSize || size > kMaxBoardSize)
    throw InvalidConfiguration("unsupported board size " + std::to_string(size));
  return table[static_cast<std::size_t>(size)];
}

LineScore score_line(const std::vector<int>& line, const std::vector<Cell>& cells) {
  LineScore out;
  const std::size_t len = line.size();
  std::size_t i = 0;
  while (i < len) {
    const Cell c = cells[static_cast<std::size_t>(line[i])];
    if (c == Cell::Empty) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < len && cells[static_cast<std::size_t>(line[j])] == c) ++j;
    const int length = static_cast<int>(j - i);
    const int open = (i > 0 && cells[static_cast<std::size_t>(line[i - 1])] == Cell::Empty) +
                     (j < len && cells[static_cast<std::size_t>(line[j])] == Cell::Empty);
    const int side = c == Cell::X ? 0 : 1;
    if (length >= kWinLength)
      ++out.fives[side];
    else
      out.non_five[side] += EvaluationTable::run_score(length, open);
    i = j;
  }
  return out;
}

}  // namespace flyai::detail
