#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "flyai/entropy.hpp"
#include "flyai/game.hpp"
#include "flyai/search.hpp"

namespace httplib {
class Server;
}

namespace flyai {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

struct ServiceConfig {
  std::chrono::seconds idle_expiry{3600};
  // Seeds session entropy and tie-breaks; sessions get consecutive mixes of it.
  std::uint64_t seed = 0;
  // Default trajectory for bionic agents when a request does not supply one.
  std::shared_ptr<const std::vector<DetectionRecord>> trajectory;
};

struct ServerSession {
  std::string game_id;
  GameState state{kDefaultBoardSize};
  Player human_player = Player::X;
  std::unique_ptr<Agent> agent;
  std::chrono::steady_clock::time_point created;
  std::chrono::steady_clock::time_point last_access;
  std::optional<MoveDecision> last_decision;
  std::mutex mutex;  // serializes operations on this game
};

// In-memory game sessions behind the JSON API. Safe for concurrent requests;
// operations on one game are serialized.
class GameService {
 public:
  explicit GameService(ServiceConfig config = {});

  ApiResponse list_agents() const;
  ApiResponse create_game(const std::string& body);
  ApiResponse get_game(const std::string& id);
  ApiResponse post_move(const std::string& id, const std::string& body);
  ApiResponse delete_game(const std::string& id);

  std::size_t session_count() const;
  // Drops sessions idle for longer than the configured expiry.
  std::size_t expire_idle(std::chrono::steady_clock::time_point now);

  static nlohmann::json state_json(const ServerSession& session);

 private:
  std::shared_ptr<ServerSession> find(const std::string& id);
  std::string next_id();

  ServiceConfig config_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<ServerSession>> sessions_;
  std::uint64_t counter_ = 0;
};

// Routes:
//   GET    /api/agents
//   POST   /api/games
//   GET    /api/games/{id}
//   POST   /api/games/{id}/moves
//   DELETE /api/games/{id}
void register_routes(httplib::Server& server, GameService& service);

}  // namespace flyai
