#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "flyai/entropy.hpp"
#include "flyai/game.hpp"
#include "flyai/search.hpp"
#include "flyai/stats.hpp"
#include "flyai/tournament.hpp"

namespace py = pybind11;
using namespace flyai;

namespace {

using Records = std::shared_ptr<const std::vector<DetectionRecord>>;

Records parse_records(const std::string& text) {
  std::istringstream in(text);
  return std::make_shared<const std::vector<DetectionRecord>>(read_trajectory(in));
}

Player player_arg(const std::string& s) {
  auto p = s.size() == 1 ? player_from_char(s[0]) : std::nullopt;
  if (!p) throw py::value_error("player must be 'X' or 'O'");
  return *p;
}

std::string player_str(Player p) { return std::string(1, to_char(p)); }

py::tuple move_tuple(Move m) { return py::make_tuple(m.row, m.col); }

py::dict summary_dict(const StatsSummary& s) {
  py::dict d;
  d["n"] = s.n;
  d["mean"] = s.mean;
  d["median"] = s.median;
  d["std"] = s.std_dev;
  d["kurtosis"] = s.excess_kurtosis;
  d["skewness"] = s.skewness;
  return d;
}

EntropySource make_source(const std::string& kind_name, std::uint64_t seed,
                          const std::optional<std::string>& trajectory) {
  auto kind = parse_entropy_kind(kind_name);
  if (!kind) throw py::value_error("unknown entropy source '" + kind_name + "'");
  ReportSources cfg;
  cfg.seed = seed;
  if (trajectory) cfg.trajectory = parse_records(*trajectory);
  return make_report_source(*kind, cfg);
}

class PyAgent {
 public:
  PyAgent(const std::string& name, std::uint64_t seed, const std::optional<std::string>& trajectory,
          int depth) {
    auto spec = find_agent(name);
    if (!spec) throw py::value_error("unknown agent '" + name + "'");
    spec->search.base_depth = depth;
    spec->tie_break_seed = seed;
    std::optional<EntropySource> entropy;
    if (spec->uses_entropy()) {
      if (is_bionic(spec->entropy_kind)) {
        if (!trajectory) throw py::value_error("agent " + spec->name + " needs a trajectory");
        entropy = EntropySource::bionic(spec->entropy_kind, parse_records(*trajectory));
      } else {
        entropy = EntropySource::mersenne_twister(static_cast<std::uint32_t>(seed));
      }
    }
    agent_.emplace(*spec, std::move(entropy));
  }

  py::dict choose(const GameState& state) {
    const auto d = agent_->choose(state);
    py::dict out;
    out["move"] = move_tuple(d.move);
    out["score"] = d.score;
    out["depth"] = d.depth;
    out["stimulation"] = d.stimulation ? py::cast(*d.stimulation) : py::none();
    return out;
  }

  std::string name() const { return agent_->spec().name; }

 private:
  std::optional<Agent> agent_;
};

}  // namespace

PYBIND11_MODULE(_flyai, m) {
  m.doc() = "Gobang engine, entropy sources and tournament runner";

  py::register_exception<InvalidConfiguration>(m, "InvalidConfiguration", PyExc_ValueError);
  py::register_exception<IllegalMove>(m, "IllegalMove", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InsufficientData>(m, "InsufficientData", PyExc_ValueError);
  py::register_exception<UndefinedMoment>(m, "UndefinedMoment", PyExc_ValueError);
  py::register_exception<EntropyConfigurationError>(m, "EntropyConfigurationError", PyExc_ValueError);

  py::class_<GameState>(m, "GameState")
      .def(py::init<int>(), py::arg("size") = kDefaultBoardSize)
      .def_property_readonly("size", [](const GameState& s) { return s.board().size(); })
      .def_property_readonly("rows", [](const GameState& s) { return s.board().rows(); })
      .def_property_readonly("to_move", [](const GameState& s) { return player_str(s.to_move()); })
      .def_property_readonly("status",
                             [](const GameState& s) { return std::string(to_string(s.status())); })
      .def_property_readonly("winner",
                             [](const GameState& s) -> std::optional<std::string> {
                               if (auto w = s.winner()) return player_str(*w);
                               return std::nullopt;
                             })
      .def_property_readonly("terminal", &GameState::terminal)
      .def_property_readonly("moves",
                             [](const GameState& s) {
                               py::list out;
                               for (const auto& [p, mv] : s.history()) out.append(move_tuple(mv));
                               return out;
                             })
      .def("play", [](GameState& s, int row, int col) { s.play({row, col}); })
      .def("apply", [](const GameState& s, int row, int col) { return apply_move(s, {row, col}); })
      .def("legal_moves",
           [](const GameState& s) {
             py::list out;
             for (auto mv : legal_moves(s)) out.append(move_tuple(mv));
             return out;
           })
      .def("render", [](const GameState& s) { return s.board().render(); })
      .def("__repr__", [](const GameState& s) {
        return "<GameState " + std::to_string(s.board().size()) + "x" +
               std::to_string(s.board().size()) + " " + std::string(to_string(s.status())) + ">";
      });

  m.def("replay", [](int size, const std::vector<std::pair<int, int>>& moves) {
    std::vector<Move> mv;
    for (auto [r, c] : moves) mv.push_back({r, c});
    return replay(size, mv);
  }, py::arg("size"), py::arg("moves"));

  m.def("evaluate", [](const GameState& s, const std::string& perspective) {
    return evaluate(s.board(), player_arg(perspective));
  }, py::arg("state"), py::arg("perspective"));

  const auto search_result = [](const SearchResult& r) {
    py::list moves;
    for (auto mv : r.best_moves) moves.append(move_tuple(mv));
    return py::make_tuple(r.score, moves);
  };
  m.def("minimax", [search_result](const GameState& s, int depth, bool maximizing) {
    return search_result(minimax(s, depth, maximizing));
  }, py::arg("state"), py::arg("depth"), py::arg("maximizing") = true);
  m.def("alphabeta", [search_result](const GameState& s, int depth, bool maximizing) {
    return search_result(alphabeta(s, depth, -kScoreInfinity, kScoreInfinity, maximizing));
  }, py::arg("state"), py::arg("depth"), py::arg("maximizing") = true);
  m.def("candidate_moves", [](const GameState& s, int radius) {
    py::list out;
    for (auto mv : candidate_moves(s, radius)) out.append(move_tuple(mv));
    return out;
  }, py::arg("state"), py::arg("radius") = 2);

  m.def("map_sample_to_depth", [](int s) { return map_sample_to_depth(s).depth; });
  m.def("map_sample_to_stimulation", [](int s) { return map_sample_to_stimulation(s).level; });

  py::class_<PyAgent>(m, "Agent")
      .def(py::init<const std::string&, std::uint64_t, const std::optional<std::string>&, int>(),
           py::arg("name"), py::arg("seed") = 0, py::arg("trajectory") = py::none(),
           py::arg("depth") = 2)
      .def_property_readonly("name", &PyAgent::name)
      .def("choose", &PyAgent::choose);
  m.def("agent_names", [] {
    std::vector<std::string> out;
    for (const auto& a : standard_agents()) out.push_back(a.name);
    return out;
  });

  m.def("samples", [](const std::string& source, std::size_t n, std::uint64_t seed,
                      const std::optional<std::string>& trajectory) {
    auto src = make_source(source, seed, trajectory);
    return src.take(n);
  }, py::arg("source"), py::arg("n"), py::arg("seed") = 1, py::arg("trajectory") = py::none());

  m.def("simulate_fly", [](std::size_t steps, std::uint64_t seed, int fan_period) {
    FlySimConfig cfg;
    cfg.fan_period = fan_period;
    FlySimulator sim(seed, cfg);
    std::ostringstream out;
    write_trajectory(out, sim.run(steps));
    return out.str();
  }, py::arg("steps"), py::arg("seed") = 7, py::arg("fan_period") = FlySimConfig{}.fan_period);

  m.def("summarize", [](const std::vector<int>& samples) {
    const auto s = summarize(samples);
    auto d = summary_dict(s);
    d["interpretation"] = interpret(s).text();
    return d;
  }, py::arg("samples"));

  m.def("run_match", [](const std::vector<std::string>& agents, int blocks, int games,
                        int board_size, std::uint64_t seed,
                        const std::optional<std::string>& trajectory, unsigned threads) {
    auto lineup = standard_lineup(trajectory ? parse_records(*trajectory) : nullptr, agents);
    MatchConfig cfg;
    cfg.blocks = blocks;
    cfg.games_per_block = games;
    cfg.board_size = board_size;
    cfg.master_seed = seed;
    cfg.threads = threads;
    WinRateReport report;
    {
      py::gil_scoped_release release;
      report = run_match(lineup, cfg);
    }
    return summarize_win_rates(report).json;
  }, py::arg("agents"), py::arg("blocks") = 50, py::arg("games") = 10, py::arg("board_size") = 11,
     py::arg("seed") = 42, py::arg("trajectory") = py::none(), py::arg("threads") = 0);
}
