#include "flyai/service.hpp"

#include <sstream>

#include "httplib.h"

#include "flyai/tournament.hpp"

namespace flyai {

using nlohmann::json;

namespace {

ApiResponse error(int status, const std::string& message) {
  return {status, json{{"error", message}}};
}

std::optional<json> parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  auto j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

json move_json(Move m) { return json{{"row", m.row}, {"col", m.col}}; }

}  // namespace

GameService::GameService(ServiceConfig config) : config_(std::move(config)) {}

ApiResponse GameService::list_agents() const {
  auto agents = json::array();
  for (const auto& spec : standard_agents()) {
    agents.push_back({{"name", spec.name},
                      {"description", spec.description},
                      {"method_a", spec.method_a_enabled},
                      {"method_b", spec.method_b_enabled},
                      {"entropy", spec.uses_entropy() ? std::string(to_string(spec.entropy_kind))
                                                      : std::string("none")}});
  }
  return {200, json{{"agents", agents}}};
}

json GameService::state_json(const ServerSession& s) {
  json j{{"game_id", s.game_id},
         {"size", s.state.board().size()},
         {"grid", s.state.board().rows()},
         {"to_move", std::string(1, to_char(s.state.to_move()))},
         {"status", std::string(to_string(s.state.status()))},
         {"human_plays", std::string(1, to_char(s.human_player))},
         {"agent", s.agent->spec().name}};
  if (auto w = s.state.winner()) j["winner"] = std::string(1, to_char(*w));
  if (s.last_decision) {
    j["last_agent_move"] = move_json(s.last_decision->move);
    if (s.agent->spec().method_a_enabled) j["last_agent_depth"] = s.last_decision->depth;
    if (s.last_decision->stimulation) j["last_stimulation"] = *s.last_decision->stimulation;
  }
  return j;
}

std::string GameService::next_id() {
  // Caller holds sessions_mutex_ exclusively.
  const std::uint64_t n = ++counter_;
  const std::uint64_t tag = mix_seed(config_.seed ^ 0x5eed, n);
  std::ostringstream out;
  out << std::hex << (tag & 0xffffffffULL) << '-' << std::dec << n;
  return out.str();
}

ApiResponse GameService::create_game(const std::string& body) {
  auto req = parse_body(body);
  if (!req) return error(400, "body must be a JSON object");

  if (!req->contains("agent") || !(*req)["agent"].is_string())
    return error(400, "missing string field 'agent'");
  auto spec = find_agent((*req)["agent"].get<std::string>());
  if (!spec) return error(400, "unknown agent '" + (*req)["agent"].get<std::string>() + "'");

  int size = kDefaultBoardSize;
  if (req->contains("board_size")) {
    if (!(*req)["board_size"].is_number_integer()) return error(400, "board_size must be an integer");
    size = (*req)["board_size"].get<int>();
    if (size < kMinBoardSize || size > kMaxBoardSize)
      return error(400, "board_size must be in [5, 19]");
  }

  Player human = Player::X;
  if (req->contains("human_plays")) {
    const auto& hp = (*req)["human_plays"];
    std::optional<Player> p;
    if (hp.is_string() && hp.get<std::string>().size() == 1) p = player_from_char(hp.get<std::string>()[0]);
    if (!p) return error(400, "human_plays must be \"X\" or \"O\"");
    human = *p;
  }

  auto trajectory = config_.trajectory;
  if (req->contains("trajectory")) {
    if (!(*req)["trajectory"].is_string()) return error(400, "trajectory must be a string");
    std::istringstream in((*req)["trajectory"].get<std::string>());
    try {
      trajectory = std::make_shared<const std::vector<DetectionRecord>>(read_trajectory(in));
    } catch (const ParseError& e) {
      return error(400, std::string("trajectory: ") + e.what());
    }
  }

  auto session = std::make_shared<ServerSession>();
  std::unique_lock lock(sessions_mutex_);
  session->game_id = next_id();
  const std::uint64_t seed = mix_seed(config_.seed, counter_);
  spec->tie_break_seed = mix_seed(seed, 2);
  try {
    std::optional<EntropySource> entropy;
    if (spec->uses_entropy()) {
      if (is_bionic(spec->entropy_kind)) {
        if (!trajectory || trajectory->size() < 2)
          return error(400, "agent " + spec->name + " needs a trajectory of at least 2 records");
        auto probe = EntropySource::bionic(spec->entropy_kind, trajectory);
        entropy = EntropySource::bionic(spec->entropy_kind, trajectory,
                                        mix_seed(seed, 1) % probe.stream_length());
      } else if (spec->entropy_kind == EntropySourceKind::IdealUniform) {
        entropy = EntropySource::ideal(mix_seed(seed, 1));
      } else {
        entropy = EntropySource::mersenne_twister(static_cast<std::uint32_t>(mix_seed(seed, 1)));
      }
    }
    session->state = new_game(size);
    session->human_player = human;
    session->agent = std::make_unique<Agent>(*spec, std::move(entropy));
  } catch (const std::exception& e) {
    return error(400, e.what());
  }
  session->created = session->last_access = std::chrono::steady_clock::now();
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (session->created - it->second->last_access > config_.idle_expiry)
      it = sessions_.erase(it);
    else
      ++it;
  }
  sessions_[session->game_id] = session;
  lock.unlock();

  std::lock_guard game_lock(session->mutex);
  if (session->human_player == Player::O) {
    session->last_decision = session->agent->choose(session->state);
    session->state.play(session->last_decision->move);
  }
  return {201, json{{"game_id", session->game_id}, {"state", state_json(*session)}}};
}

std::shared_ptr<ServerSession> GameService::find(const std::string& id) {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

ApiResponse GameService::get_game(const std::string& id) {
  auto session = find(id);
  if (!session) return error(404, "unknown game '" + id + "'");
  std::lock_guard lock(session->mutex);
  session->last_access = std::chrono::steady_clock::now();
  return {200, json{{"state", state_json(*session)}}};
}

ApiResponse GameService::post_move(const std::string& id, const std::string& body) {
  auto session = find(id);
  if (!session) return error(404, "unknown game '" + id + "'");
  auto req = parse_body(body);
  if (!req || !req->contains("row") || !req->contains("col") || !(*req)["row"].is_number_integer() ||
      !(*req)["col"].is_number_integer())
    return error(400, "body must be {\"row\": int, \"col\": int}");
  const Move human_move{(*req)["row"].get<int>(), (*req)["col"].get<int>()};

  std::lock_guard lock(session->mutex);
  session->last_access = std::chrono::steady_clock::now();
  auto& state = session->state;
  if (state.terminal()) return error(409, "game is over");
  if (state.to_move() != session->human_player) return error(409, "not the human player's turn");
  try {
    state.play(human_move);
  } catch (const IllegalMove& e) {
    return error(409, e.what());
  }

  json out{{"human_move_accepted", true}};
  if (!state.terminal()) {
    session->last_decision = session->agent->choose(state);
    state.play(session->last_decision->move);
    out["agent_move"] = move_json(session->last_decision->move);
    if (session->agent->spec().method_a_enabled) out["agent_depth"] = session->last_decision->depth;
    if (session->last_decision->stimulation)
      out["agent_stimulation"] = *session->last_decision->stimulation;
  }
  out["state"] = state_json(*session);
  out["status"] = std::string(to_string(state.status()));
  return {200, out};
}

ApiResponse GameService::delete_game(const std::string& id) {
  std::unique_lock lock(sessions_mutex_);
  if (sessions_.erase(id) == 0) return error(404, "unknown game '" + id + "'");
  return {200, json{{"deleted", id}}};
}

std::size_t GameService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::size_t GameService::expire_idle(std::chrono::steady_clock::time_point now) {
  std::unique_lock lock(sessions_mutex_);
  return std::erase_if(sessions_, [&](const auto& kv) {
    return now - kv.second->last_access > config_.idle_expiry;
  });
}

void register_routes(httplib::Server& server, GameService& service) {
  const auto send = [](httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(api.body.dump(), "application/json");
  };
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  server.Get("/api/agents", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.list_agents());
  });
  server.Post("/api/games", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.create_game(req.body));
  });
  server.Get(R"(/api/games/([^/]+))",
             [&service, send](const httplib::Request& req, httplib::Response& res) {
               send(res, service.get_game(req.matches[1]));
             });
  server.Delete(R"(/api/games/([^/]+))",
                [&service, send](const httplib::Request& req, httplib::Response& res) {
                  send(res, service.delete_game(req.matches[1]));
                });
  server.Post(R"(/api/games/([^/]+)/moves)",
              [&service, send](const httplib::Request& req, httplib::Response& res) {
                send(res, service.post_move(req.matches[1], req.body));
              });
}

}  // namespace flyai
