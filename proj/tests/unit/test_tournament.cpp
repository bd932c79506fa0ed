#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "flyai/tournament.hpp"

using namespace flyai;

namespace {

std::shared_ptr<const std::vector<DetectionRecord>> trajectory() {
  return std::make_shared<const std::vector<DetectionRecord>>(FlySimulator(7).run(400));
}

MatchConfig small(int blocks, int games) {
  MatchConfig c;
  c.blocks = blocks;
  c.games_per_block = games;
  c.board_size = 9;
  c.master_seed = 42;
  c.threads = 2;
  return c;
}

std::string results_text(const WinRateReport& r) {
  std::ostringstream out;
  write_results(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("match configuration validation") {
  CHECK_THROWS_AS(small(0, 1).validate(), InvalidConfiguration);
  CHECK_THROWS_AS(small(1, 0).validate(), InvalidConfiguration);
  auto c = small(1, 1);
  c.board_size = 4;
  CHECK_THROWS_AS(c.validate(), InvalidConfiguration);
  CHECK_NOTHROW(MatchConfig{}.validate());
  CHECK(MatchConfig{}.blocks * MatchConfig{}.games_per_block == 500);
}

TEST_CASE("lineup selection") {
  const auto all = standard_lineup(nullptr);
  REQUIRE(all.challengers.size() == 4);
  CHECK(all.challengers[0].name == "A");
  CHECK(all.challengers[3].name == "Fly");
  CHECK(all.baseline.name == "Original");
  CHECK_FALSE(all.baseline.uses_entropy());
  CHECK_THROWS_AS(standard_lineup(nullptr, {"A", "Z"}), InvalidConfiguration);
  CHECK_THROWS_AS(standard_lineup(nullptr, {"Original"}), InvalidConfiguration);
}

TEST_CASE("seed derivation is a pure function of its coordinates") {
  const auto a = derive_game_seeds(42, 1, 3, 4);
  const auto b = derive_game_seeds(42, 1, 3, 4);
  CHECK(a.game == b.game);
  CHECK(a.challenger_entropy == b.challenger_entropy);
  CHECK(derive_game_seeds(42, 1, 3, 5).game != a.game);
  CHECK(derive_game_seeds(42, 2, 3, 4).game != a.game);
  CHECK(derive_game_seeds(43, 1, 3, 4).game != a.game);
  CHECK(a.challenger_tie_break != a.baseline_tie_break);
}

TEST_CASE("identical seeds replay identical games") {
  const auto seeds = derive_game_seeds(1, 0, 0, 0);
  const auto g1 = play_game(original_agent(), original_agent(), true, seeds, 9, std::nullopt);
  const auto g2 = play_game(original_agent(), original_agent(), true, seeds, 9, std::nullopt);
  CHECK(g1.moves == g2.moves);
  CHECK(g1.outcome == g2.outcome);
  CHECK(replay_outcome(g1, 9) == g1.outcome);
  CHECK(g1.challenger_color == Player::X);
}

TEST_CASE("a depth-2 challenger beats a depth-1 baseline") {
  AgentSpec weak = original_agent();
  weak.search.base_depth = 1;
  int wins = 0;
  for (int g = 0; g < 6; ++g) {
    const auto rec = play_game(original_agent(), weak, g % 2 == 0, derive_game_seeds(3, 0, 0, g), 9,
                               std::nullopt);
    CHECK(replay_outcome(rec, 9) == rec.outcome);
    wins += rec.outcome == Outcome::ChallengerWin;
  }
  CHECK(wins >= 3);
}

TEST_CASE("accounting, alternation and replay") {
  const auto lineup = standard_lineup(trajectory());
  const auto cfg = small(3, 4);
  const auto report = run_match(lineup, cfg);
  REQUIRE(report.challengers.size() == 4);
  CHECK(report.games.size() == 4 * 12);
  for (const auto& c : report.challengers) {
    CAPTURE(c.name);
    CHECK_FALSE(c.error);
    CHECK(c.games == 12);
    CHECK(c.wins + c.losses + c.draws == c.games);
    CHECK(c.first_moves == 6);
    CHECK(c.win_rate == doctest::Approx((c.wins + 0.5 * c.draws) / c.games));
    CHECK(c.block_rates.size() == 3);
    CHECK(c.block_mean == doctest::Approx(c.win_rate));
    CHECK(c.block_sd >= 0.0);
    CHECK(c.block_min <= c.block_mean);
    CHECK(c.block_max >= c.block_mean);
    for (double r : c.block_rates) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
  }
  for (const auto& g : report.games) {
    CHECK(replay_outcome(g, cfg.board_size) == g.outcome);
    CHECK(g.challenger_first == (g.game % 2 == 0));
  }
}

TEST_CASE("odd block sizes alternate to within one per block") {
  auto lineup = standard_lineup(nullptr, {"A"});
  const auto report = run_match(lineup, small(2, 3));
  CHECK(report.challengers[0].first_moves == 4);
  auto fixed = small(2, 3);
  fixed.alternate_first_mover = false;
  CHECK(run_match(lineup, fixed).challengers[0].first_moves == 6);
}

TEST_CASE("reports are reproducible and independent of thread count") {
  const auto lineup = standard_lineup(trajectory());
  auto cfg = small(2, 4);
  const auto a = run_match(lineup, cfg);
  cfg.threads = 1;
  const auto b = run_match(lineup, cfg);
  cfg.threads = 3;
  const auto c = run_match(lineup, cfg);
  CHECK(results_text(a) == results_text(b));
  CHECK(results_text(a) == results_text(c));
  CHECK(summarize_win_rates(a).json == summarize_win_rates(c).json);
  cfg.master_seed = 7;
  CHECK(results_text(run_match(lineup, cfg)) != results_text(a));
}

TEST_CASE("a failing challenger is aborted without affecting the others") {
  const auto lineup = standard_lineup(nullptr, {"A", "Fly"});
  const auto report = run_match(lineup, small(1, 2));
  REQUIRE(report.challengers.size() == 2);
  CHECK_FALSE(report.challengers[0].error);
  CHECK(report.challengers[0].games == 2);
  REQUIRE(report.challengers[1].error);
  CHECK(report.challengers[1].games == 0);
  CHECK(report.games.size() == 2);
}

TEST_CASE("results file format") {
  const auto report = run_match(standard_lineup(nullptr, {"B"}), small(1, 2));
  const auto text = results_text(report);
  std::istringstream in(text);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "challenger\tblock\tgame\tfirst_mover\toutcome\tmoves");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind("B\t0\t", 0) == 0);
    CHECK(line.find(',') != std::string::npos);
  }
  CHECK(rows == 2);
}

TEST_CASE("win-rate summary") {
  const auto report = run_match(standard_lineup(trajectory()), small(2, 2));
  const auto table = summarize_win_rates(report);
  for (const char* col : {"A", "B", "C", "Fly", "Human"})
    CHECK(table.text.find(col) != std::string::npos);
  CHECK(table.text.find("0.39") != std::string::npos);
  const auto j = nlohmann::json::parse(table.json);
  CHECK(j["reference"]["C"] == 0.34);
  CHECK(j["reference"]["Human"] == 0.39);

  WinRateReport empty;
  empty.config = small(1, 1);
  ChallengerResult zero;
  zero.name = "A";
  zero.games = 1;
  zero.losses = 1;
  zero.block_rates = {0.0};
  empty.challengers.push_back(zero);
  const auto z = summarize_win_rates(empty);
  CHECK(z.text.find("0.00") != std::string::npos);
}

TEST_CASE("self-play of the original agent is balanced") {
  AgentLineup lineup;
  AgentSpec mirror = original_agent();
  lineup.challengers.push_back(mirror);
  auto cfg = small(10, 10);
  cfg.board_size = 11;
  cfg.threads = 0;
  const auto r = run_match(lineup, cfg).challengers[0];
  MESSAGE("self-play win rate " << r.win_rate);
  CHECK(r.win_rate >= 0.4);
  CHECK(r.win_rate <= 0.6);
}
