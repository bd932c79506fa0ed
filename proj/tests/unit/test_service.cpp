#include <atomic>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

#include "flyai/service.hpp"

using namespace flyai;
using nlohmann::json;

namespace {

// Every flight vector spans the whole square, so every sample is 49: the Fly
// agent searches at depth 3 and always plays the fifth-best move.
std::string jumpy_trajectory(int n) {
  std::string out;
  for (int i = 0; i < n; ++i)
    out += i % 2 ? "0 1.000000 1.000000 0.050000 0.050000\n"
                 : "0 0.000000 0.000000 0.050000 0.050000\n";
  return out;
}

std::string create(GameService& svc, const json& body) {
  const auto r = svc.create_game(body.dump());
  REQUIRE(r.status == 201);
  return r.body["game_id"].get<std::string>();
}

json move(int row, int col) { return json{{"row", row}, {"col", col}}; }

Board board_from_json(const json& s) {
  std::string text;
  for (const auto& row : s["grid"]) text += row.get<std::string>() + "\n";
  return Board::parse(text);
}

}  // namespace

TEST_CASE("agent listing") {
  GameService svc;
  const auto r = svc.list_agents();
  CHECK(r.status == 200);
  REQUIRE(r.body["agents"].size() == 5);
  CHECK(r.body["agents"][0]["name"] == "Original");
  CHECK(r.body["agents"][4]["name"] == "Fly");
  CHECK(r.body["agents"][4]["entropy"] == "brng1");
}

TEST_CASE("creating a game") {
  ServiceConfig cfg;
  cfg.trajectory = std::make_shared<const std::vector<DetectionRecord>>(FlySimulator(7).run(300));
  GameService svc(cfg);
  const auto r = svc.create_game(R"({"agent":"Fly"})");
  CHECK(r.status == 201);
  const auto& s = r.body["state"];
  CHECK(r.body["game_id"] == s["game_id"]);
  CHECK(s["size"] == 15);
  CHECK(s["grid"].size() == 15);
  CHECK(s["grid"][0] == std::string(15, '.'));
  CHECK(s["to_move"] == "X");
  CHECK(s["status"] == "Ongoing");
  CHECK(s["human_plays"] == "X");
  CHECK_FALSE(s.contains("last_agent_move"));
  CHECK(svc.session_count() == 1);
  CHECK(svc.create_game(R"({"agent":"Fly"})").body["game_id"] != r.body["game_id"]);
}

TEST_CASE("agent moves first when the human plays O") {
  GameService svc;
  const auto r = svc.create_game(R"({"agent":"C","board_size":9,"human_plays":"O"})");
  REQUIRE(r.status == 201);
  const auto& s = r.body["state"];
  CHECK(s["to_move"] == "O");
  CHECK(s["last_agent_move"] == move(4, 4));
  CHECK(s.contains("last_agent_depth"));
  CHECK(s.contains("last_stimulation"));
  CHECK(board_from_json(s).count(Cell::X) == 1);
}

TEST_CASE("malformed create requests") {
  GameService svc;
  CHECK(svc.create_game("not json").status == 400);
  CHECK(svc.create_game("[1,2]").status == 400);
  CHECK(svc.create_game("{}").status == 400);
  CHECK(svc.create_game(R"({"agent":"Z"})").status == 400);
  CHECK(svc.create_game(R"({"agent":"A","board_size":4})").status == 400);
  CHECK(svc.create_game(R"({"agent":"A","board_size":"9"})").status == 400);
  CHECK(svc.create_game(R"({"agent":"A","human_plays":"Q"})").status == 400);
  CHECK(svc.create_game(R"({"agent":"Fly"})").status == 400);  // no trajectory anywhere
  CHECK(svc.create_game(R"({"agent":"Fly","trajectory":"0 0.5"})").status == 400);
  CHECK(svc.session_count() == 0);
}

TEST_CASE("moves, conflicts and unknown games") {
  GameService svc;
  const auto id = create(svc, {{"agent", "Original"}, {"board_size", 9}});
  const auto r = svc.post_move(id, move(4, 4).dump());
  REQUIRE(r.status == 200);
  CHECK(r.body["human_move_accepted"] == true);
  CHECK(r.body.contains("agent_move"));
  CHECK_FALSE(r.body.contains("agent_depth"));
  CHECK(r.body["status"] == "Ongoing");
  CHECK(r.body["state"]["to_move"] == "X");

  CHECK(svc.post_move(id, move(4, 4).dump()).status == 409);
  CHECK(svc.post_move(id, move(9, 0).dump()).status == 409);
  CHECK(svc.post_move(id, R"({"row":1})").status == 400);
  CHECK(svc.post_move(id, R"({"row":"1","col":2})").status == 400);
  CHECK(svc.post_move("nope", move(0, 0).dump()).status == 404);
  CHECK(svc.get_game("nope").status == 404);

  const auto g = svc.get_game(id);
  CHECK(g.status == 200);
  CHECK(g.body["state"] == r.body["state"]);

  CHECK(svc.delete_game(id).status == 200);
  CHECK(svc.delete_game(id).status == 404);
  CHECK(svc.get_game(id).status == 404);
}

TEST_CASE("human five ends the game without an agent reply") {
  GameService svc;
  const auto id = create(svc, {{"agent", "Fly"}, {"board_size", 9}, {"trajectory", jumpy_trajectory(20)}});
  json last;
  std::vector<Move> moves;
  for (int turn = 0; turn < 40; ++turn) {
    const auto st = svc.get_game(id).body["state"];
    if (st["status"] != "Ongoing") break;
    // Human plays the depth-2 alpha-beta choice for X.
    GameState g = replay(9, moves);
    REQUIRE(g.board() == board_from_json(st));
    const auto best = alphabeta(g, 2, -kScoreInfinity, kScoreInfinity, true).best_moves.front();
    last = svc.post_move(id, move(best.row, best.col).dump()).body;
    moves.push_back(best);
    if (last.contains("agent_move"))
      moves.push_back({last["agent_move"]["row"].get<int>(), last["agent_move"]["col"].get<int>()});
  }
  CHECK(last["status"] == "Won");
  CHECK(last["state"]["winner"] == "X");
  CHECK_FALSE(last.contains("agent_move"));
  CHECK(replay(9, moves).board() == board_from_json(last["state"]));
  CHECK(svc.post_move(id, move(0, 0).dump()).status == 409);
}

TEST_CASE("idle sessions expire") {
  ServiceConfig cfg;
  cfg.idle_expiry = std::chrono::seconds(10);
  GameService svc(cfg);
  create(svc, {{"agent", "A"}});
  create(svc, {{"agent", "B"}});
  CHECK(svc.expire_idle(std::chrono::steady_clock::now()) == 0);
  CHECK(svc.expire_idle(std::chrono::steady_clock::now() + std::chrono::seconds(11)) == 2);
  CHECK(svc.session_count() == 0);
}

TEST_CASE("sixteen concurrent sessions") {
  GameService svc;
  std::atomic<int> failures{0};
  std::vector<std::jthread> pool;
  for (int t = 0; t < 16; ++t)
    pool.emplace_back([&, t] {
      const auto r = svc.create_game(json{{"agent", t % 2 ? "A" : "C"}, {"board_size", 9}}.dump());
      if (r.status != 201) {
        ++failures;
        return;
      }
      const auto id = r.body["game_id"].get<std::string>();
      std::vector<Move> moves;
      for (int k = 0; k < 4; ++k) {
        const auto st = svc.get_game(id).body["state"];
        if (st["status"] != "Ongoing") break;
        const Board b = board_from_json(st);
        Move m{-1, -1};
        for (int i = 0; i < 81 && m.row < 0; ++i)
          if (b.at(i / 9, i % 9) == Cell::Empty) m = {i / 9, i % 9};
        const auto res = svc.post_move(id, move(m.row, m.col).dump());
        if (res.status != 200) ++failures;
        moves.push_back(m);
        if (res.body.contains("agent_move"))
          moves.push_back({res.body["agent_move"]["row"].get<int>(), res.body["agent_move"]["col"].get<int>()});
        if (replay(9, moves).board() != board_from_json(res.body["state"])) ++failures;
      }
    });
  pool.clear();
  CHECK(failures == 0);
  CHECK(svc.session_count() == 16);
}

TEST_CASE("racing moves on one game: one succeeds, one conflicts") {
  for (int round = 0; round < 10; ++round) {
    GameService svc;
    const auto id = create(svc, {{"agent", "Original"}, {"board_size", 11}});
    std::atomic<int> ok{0}, conflict{0};
    {
      std::jthread a([&] {
        const int s = svc.post_move(id, move(5, 5).dump()).status;
        (s == 200 ? ok : conflict)++;
      });
      std::jthread b([&] {
        const int s = svc.post_move(id, move(5, 5).dump()).status;
        (s == 200 ? ok : conflict)++;
      });
    }
    CHECK(ok == 1);
    CHECK(conflict == 1);
  }
}

TEST_CASE("HTTP round trip") {
  GameService svc;
  httplib::Server server;
  register_routes(server, svc);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::jthread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto agents = client.Get("/api/agents");
  REQUIRE(agents);
  CHECK(agents->status == 200);
  CHECK(agents->get_header_value("Access-Control-Allow-Origin") == "*");

  auto created = client.Post("/api/games", R"({"agent":"B","board_size":7})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const auto id = json::parse(created->body)["game_id"].get<std::string>();

  auto moved = client.Post("/api/games/" + id + "/moves", move(3, 3).dump(), "application/json");
  REQUIRE(moved);
  CHECK(moved->status == 200);
  const auto body = json::parse(moved->body);
  CHECK(body.contains("agent_stimulation"));
  CHECK(body["state"].contains("last_stimulation"));

  auto again = client.Post("/api/games/" + id + "/moves", move(3, 3).dump(), "application/json");
  REQUIRE(again);
  CHECK(again->status == 409);

  auto fetched = client.Get("/api/games/" + id);
  REQUIRE(fetched);
  CHECK(json::parse(fetched->body)["state"] == body["state"]);

  auto options = client.Options("/api/games");
  REQUIRE(options);
  CHECK(options->status == 204);

  auto missing = client.Get("/api/games/unknown");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  auto deleted = client.Delete("/api/games/" + id);
  REQUIRE(deleted);
  CHECK(deleted->status == 200);

  server.stop();
}
