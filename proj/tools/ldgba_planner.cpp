// ldgba-planner: convert tasks, train and roll out agents, check traces,
// run the value-iteration oracle and gradient checks.
//
// Exit codes: 0 success or passing verdict, 1 failing verdict, 2 usage or
// input error, 3 internal error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "ldgba/agent/compare.hpp"
#include "ldgba/cli/run.hpp"
#include "ldgba/neural/checkpoint.hpp"
#include "ldgba/neural/grad_check.hpp"

namespace fs = std::filesystem;
using namespace ldgba;

namespace {

constexpr int kOk = 0, kVerdictFail = 1, kInputError = 2, kInternal = 3;

// ---- shared option groups ----

struct TaskFlags {
  std::string task, formula, atoms, hoa;

  void add(CLI::App* app) {
    app->add_option("--task", task, "Registry task name");
    app->add_option("--formula", formula, "LTL formula");
    app->add_option("--atoms", atoms, "Comma separated atoms for --formula (default: atoms of the formula)");
    app->add_option("--hoa", hoa, "HOA file holding the task automaton");
  }

  bool given() const { return !task.empty() || !formula.empty() || !hoa.empty(); }

  cli::TaskSource source() const {
    if (int(!task.empty()) + int(!formula.empty()) + int(!hoa.empty()) > 1)
      throw cli::InputError("give at most one of --task, --formula, --hoa");
    if (!atoms.empty() && formula.empty()) throw cli::InputError("--atoms only applies to --formula");
    if (!formula.empty()) return {cli::TaskKind::Formula, formula, atoms};
    if (!hoa.empty()) return {cli::TaskKind::Hoa, cli::read_file(hoa), {}};
    return {cli::TaskKind::Registry, task, {}};
  }
};

struct ConfigFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;  // config key -> value, from the dedicated flags
  std::string baseline;

  void add(CLI::App* app, const std::set<std::string>& skip = {}) {
    app->add_option("--config", config_file, "File of 'key = value' lines overriding the preset's config");
    app->add_option("--set", sets, "Override any config key (key=value); repeatable");
    static const std::vector<std::pair<std::string, std::string>> keyed = {
        {"episodes", "Training episodes"},
        {"steps", "Steps per episode"},
        {"batch", "Batch size M"},
        {"sync", "Target sync period K (steps)"},
        {"obs-window", "Observation window length"},
        {"task-window", "Task FIFO length k"},
        {"gamma", "Discount factor"},
        {"alpha", "Learning rate"},
        {"seed", "Seed (flag > LDGBA_PLANNER_SEED > config file > preset)"},
        {"mode", "aware|unaware"},
        {"reward", "base|redesigned"},
        {"optimizer", "sgd|adam"},
        {"cadence", "every_m|every_step"},
        {"p-epsilon", "Per-step chance of an epsilon move in the N part"},
        {"eps-start", "Initial exploration rate"},
        {"eps-end", "Final exploration rate"},
        {"eps-decay", "Fraction of episodes over which exploration decays"},
        {"replay", "Replay memory capacity"},
    };
    for (const auto& [flag, help] : keyed) {
      if (skip.count(flag)) continue;
      std::string key = flag;
      std::replace(key.begin(), key.end(), '-', '_');
      app->add_option_function<std::string>(
          "--" + flag, [this, key](const std::string& v) { flags[key] = v; }, help);
    }
    app->add_option("--baseline", baseline, "Use the dense fixed-window baseline network")->check(CLI::IsMember({"dense"}));
  }

  static void apply_file(agent::TrainConfig& c, const std::string& path) {
    std::istringstream in(cli::read_file(path));
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
      ++n;
      const std::string t = worlds::detail::trim(line);
      if (t.empty() || t[0] == '#' || t == "[train]") continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw agent::ConfigError(path + ":" + std::to_string(n) + ": expected key = value");
      c.set(worlds::detail::trim(t.substr(0, eq)), worlds::detail::trim(t.substr(eq + 1)));
    }
  }

  void apply(agent::TrainConfig& c) const {
    if (!config_file.empty()) apply_file(c, config_file);
    if (const char* env = std::getenv("LDGBA_PLANNER_SEED")) c.seed = agent::parse_uint("LDGBA_PLANNER_SEED", env);
    for (const auto& [k, v] : flags) c.set(k, v);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw agent::ConfigError("--set expects key=value, got '" + s + "'");
      c.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!baseline.empty()) c.network = agent::Network::Dense;
    c.check();
  }

  bool given() const { return !config_file.empty() || !sets.empty() || !flags.empty() || !baseline.empty(); }
};

struct SourceFlags {
  std::string preset, env;
  TaskFlags task;
  ConfigFlags config;

  void add(CLI::App* app, const std::set<std::string>& skip = {}) {
    app->add_option("--preset", preset, "Built-in environment")->check(CLI::IsMember(worlds::preset_names()));
    app->add_option("--env", env, "Environment file");
    task.add(app);
    config.add(app, skip);
  }

  bool given() const { return !preset.empty() || !env.empty(); }

  /// Environment, task and fully resolved config; config problems are
  /// reported before anything is built.
  cli::Setup resolve() const {
    if (preset.empty() == env.empty()) throw cli::InputError("give exactly one of --preset or --env");
    worlds::GridSpec spec = preset.empty() ? worlds::load_env(env) : worlds::preset_spec(preset);
    config.apply(spec.train);
    cli::TaskSource t = task.source();
    if (t.kind == cli::TaskKind::Registry && t.text.empty()) t.text = spec.task;
    if (t.kind == cli::TaskKind::Registry) spec.task = t.text;
    return cli::make_setup(std::move(spec), preset.empty() ? env : "preset:" + preset, std::move(t));
  }
};

product::Product make_product(const cli::Setup& s) {
  return product::Product(s.pomdp, s.automaton, s.config().reward, s.config().base_reward);
}

std::string suffixed(const std::string& path, const std::string& suffix) {
  const fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

double mean_tail(const std::vector<agent::EpisodeMetrics>& ms, std::size_t n) {
  if (ms.empty()) return 0.0;
  const std::size_t from = ms.size() > n ? ms.size() - n : 0;
  double s = 0;
  for (std::size_t i = from; i < ms.size(); ++i) s += ms[i].acc_reward;
  return s / static_cast<double>(ms.size() - from);
}

// ---- convert ----

struct ConvertCmd {
  TaskFlags task;
  std::string out, name;

  int run() const {
    if (!task.given()) throw cli::InputError("convert needs --task or --formula");
    if (!task.hoa.empty()) throw cli::InputError("convert reads a formula or registry task, not HOA");
    const auto src = task.source();
    const automata::Ldgba a = cli::build_automaton(src);
    const std::string text = automata::dump_hoa(a, name.empty() ? src.text : name);
    if (out.empty()) std::cout << text;
    else cli::write_file(out, text);
    std::size_t eps = 0;
    for (automata::StateId q = 0; q < a.size(); ++q) eps += a.epsilon_successors(q).size();
    (out.empty() ? std::cerr : std::cout) << "states " << a.size() << ", acceptance sets " << a.acceptance_set_count()
                                          << ", epsilon edges " << eps << "\n";
    return kOk;
  }
};

// ---- train ----

struct TrainCmd {
  SourceFlags src;
  std::string manifest, out = "run";
  bool quiet = false;

  cli::Setup resolve() const {
    if (manifest.empty()) return src.resolve();
    if (src.given() || src.task.given() || src.config.given())
      throw cli::InputError("--manifest replaces every environment, task and config flag");
    return cli::setup_from_manifest(cli::read_file(manifest));
  }

  int run() const {
    const cli::Setup s = resolve();
    const agent::TrainConfig& cfg = s.config();
    fs::create_directories(out);
    const fs::path dir(out);
    cli::write_file((dir / "manifest.json").string(), cli::manifest_json(s, "train").dump(2) + "\n");
    const product::Product p = make_product(s);
    const auto t0 = std::chrono::steady_clock::now();
    auto progress = [&](std::uint64_t ep, double reward) {
      if (quiet || cfg.episodes < 10 || (ep + 1) % (cfg.episodes / 10) != 0) return;
      std::cerr << "episode " << ep + 1 << "/" << cfg.episodes << " reward " << reward << "\n";
    };
    if (s.two_agents()) {
      std::array<std::ofstream, 2> csv{std::ofstream((dir / "metrics_agent0.csv").string()),
                                       std::ofstream((dir / "metrics_agent1.csv").string())};
      for (auto& c : csv) c << cli::metrics_header();
      const auto r = agent::marl_run_training(p, cfg, cli::marl_options(s), [&](const agent::MarlEpisode& m) {
        for (int k = 0; k < 2; ++k) csv[k] << cli::metrics_row(m.agents[k]) << std::flush;
        progress(m.agents[0].episode, m.agents[0].acc_reward + m.agents[1].acc_reward);
      });
      for (int k = 0; k < 2; ++k) {
        std::vector<agent::EpisodeMetrics> ms;
        for (const auto& m : r.metrics) ms.push_back(m.agents[k]);
        const std::string tag = "_agent" + std::to_string(k);
        cli::write_file((dir / ("plot" + tag + ".csv")).string(), cli::plot_csv(ms));
        neural::save_checkpoint(r.nets[k], (dir / ("checkpoint" + tag + ".bin")).string());
        std::cout << "agent " << k << ": final-100 mean reward " << mean_tail(ms, 100) << "\n";
      }
    } else {
      std::ofstream csv((dir / "metrics.csv").string());
      csv << cli::metrics_header();
      const auto r = agent::run_training(p, cfg, cli::start_states(s), [&](const agent::EpisodeMetrics& m) {
        csv << cli::metrics_row(m) << std::flush;
        progress(m.episode, m.acc_reward);
      });
      cli::write_file((dir / "plot.csv").string(), cli::plot_csv(r.metrics));
      neural::save_checkpoint(r.net, (dir / "checkpoint.bin").string());
      std::cout << "final-100 mean reward " << mean_tail(r.metrics, 100) << "\n";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "trained " << cfg.episodes << " episodes in " << secs << " s; outputs in " << out << "\n";
    return kOk;
  }
};

// ---- rollout ----

struct RolloutSummary {
  agent::TraceVerdict verdict;
  std::vector<std::pair<automata::StateId, std::vector<std::uint32_t>>> phases;  // q -> cells visited
};

RolloutSummary summarize(const cli::Setup& s, const agent::Trace& t) {
  RolloutSummary r{agent::check_trace(t, s.automaton), {}};
  for (const auto& st : t.steps) {
    if (st.epsilon) continue;
    if (r.phases.empty() || r.phases.back().first != st.q) r.phases.push_back({st.q, {st.s}});
    r.phases.back().second.push_back(st.next_s);
  }
  return r;
}

void print_summary(std::ostream& os, const cli::Setup& s, const RolloutSummary& r, const std::string& who = "") {
  os << who << "moves " << r.verdict.length << ", trap " << (r.verdict.trap ? "yes" : "no") << "\n";
  for (std::size_t k = 0; k < r.verdict.set_visits.size(); ++k)
    os << who << "F" << k << " visits " << r.verdict.set_visits[k] << "\n";
  for (const auto& [q, cells] : r.phases) {
    os << who << "phase q" << q << ":";
    const std::size_t shown = std::min<std::size_t>(cells.size(), 24);
    for (std::size_t i = 0; i < shown; ++i) os << " " << worlds::to_string(s.spec.cell_of(cells[i]));
    if (cells.size() > shown) os << " ... (" << cells.size() << " cells)";
    os << "\n";
  }
}

struct RolloutCmd {
  SourceFlags src;
  std::string manifest, checkpoint, out = "trace.jsonl", stats = "rollouts.csv", start, cycle;
  std::optional<std::uint64_t> steps, seed;
  std::size_t count = 1, jobs = 1;
  bool stop_on_trap = false;

  cli::Setup resolve() const {
    if (manifest.empty()) {
      if (checkpoint.empty()) throw cli::InputError("rollout needs --manifest or --checkpoint");
      return src.resolve();
    }
    if (src.given() || src.task.given() || src.config.given())
      throw cli::InputError("--manifest replaces every environment, task and config flag");
    return cli::setup_from_manifest(cli::read_file(manifest));
  }

  std::string checkpoint_path(const std::string& tag) const {
    if (!checkpoint.empty()) return tag.empty() ? checkpoint : suffixed(checkpoint, tag);
    return (fs::path(manifest).parent_path() / ("checkpoint" + tag + ".bin")).string();
  }

  std::uint32_t start_state(const cli::Setup& s, pomdp::Rng& rng) const {
    if (!start.empty()) {
      const worlds::Cell c = worlds::detail::parse_cell(start, 0);
      if (!s.spec.inside(c) || s.spec.is_blocked(c)) throw cli::InputError("--start is not a free cell");
      return s.spec.state_of(c);
    }
    const auto starts = cli::start_states(s);
    return starts[rng.index(pomdp::Stream::Init, starts.size())];
  }

  void write_manifest(const cli::Setup& s, std::uint64_t n_steps, std::uint64_t base_seed,
                      const std::vector<std::string>& ckpts) const {
    auto j = cli::manifest_json(s, "rollout");
    nlohmann::ordered_json r;
    r["steps"] = n_steps;
    r["seed"] = base_seed;
    r["count"] = count;
    r["start"] = start.empty() ? "sampled" : start;
    r["stop_on_trap"] = stop_on_trap;
    nlohmann::ordered_json cj = nlohmann::ordered_json::array();
    for (const auto& c : ckpts) cj.push_back({{"path", c}, {"hash", cli::git_blob_sha1(cli::read_file(c))}});
    r["checkpoints"] = cj;
    j["rollout"] = r;
    cli::write_file((count > 1 ? stats : out) + ".manifest.json", j.dump(2) + "\n");
  }

  int run() const {
    const cli::Setup s = resolve();
    const product::Product p = make_product(s);
    const agent::TrainConfig& cfg = s.config();
    const std::uint64_t n_steps = steps.value_or(cfg.steps), base_seed = seed.value_or(cfg.seed);
    if (count == 0 || jobs == 0) throw cli::InputError("--count and --jobs must be positive");
    if (s.two_agents()) return run_pair(s, p, n_steps, base_seed);

    const std::string ckpt = checkpoint_path("");
    const neural::QNet net = neural::load_checkpoint(ckpt);
    write_manifest(s, n_steps, base_seed, {ckpt});
    auto one = [&](std::uint64_t sd) {
      pomdp::Rng rng(sd);
      const std::uint32_t x0 = start_state(s, rng);
      return agent::rollout(p, net, cfg, x0, n_steps, rng, stop_on_trap);
    };
    if (count == 1) {
      const agent::Trace t = one(base_seed);
      std::ofstream f(out);
      if (!f) throw cli::InputError("cannot write '" + out + "'");
      agent::write_trace(f, t);
      print_summary(std::cout, s, summarize(s, t));
      return kOk;
    }
    // Isolated workers over disjoint seeds; results are gathered in rollout order.
    std::vector<RolloutSummary> res(count);
    std::vector<double> rewards(count);
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_lock;
    for (std::size_t w = 0; w < std::min(jobs, count); ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += jobs) {
            const agent::Trace t = one(base_seed + i);
            res[i] = summarize(s, t);
            rewards[i] = 0;
            for (const auto& st : t.steps) rewards[i] += st.reward;
          }
        } catch (...) {
          std::lock_guard<std::mutex> g(failure_lock);
          failure = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    std::ostringstream csv;
    csv << "rollout,seed,moves,reward,accepting_visits,trap";
    for (std::size_t k = 0; k < s.automaton.acceptance_set_count(); ++k) csv << ",F" << k;
    csv << "\n";
    double visits = 0, traps = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const auto& v = res[i].verdict;
      csv << i << "," << base_seed + i << "," << v.length << "," << agent::format_double(rewards[i]) << ","
          << v.accepting_visits << "," << v.trap;
      for (auto n : v.set_visits) csv << "," << n;
      csv << "\n";
      visits += static_cast<double>(v.accepting_visits);
      traps += v.trap;
    }
    cli::write_file(stats, csv.str());
    std::cout << count << " rollouts: mean accepting visits " << visits / static_cast<double>(count)
              << ", trap rate " << traps / static_cast<double>(count) << "; per-rollout rows in " << stats << "\n";
    return kOk;
  }

  int run_pair(const cli::Setup& s, const product::Product& p, std::uint64_t n_steps, std::uint64_t base_seed) const {
    const std::array<std::string, 2> paths{checkpoint_path("_agent0"), checkpoint_path("_agent1")};
    const std::array<neural::QNet, 2> nets{neural::load_checkpoint(paths[0]), neural::load_checkpoint(paths[1])};
    write_manifest(s, n_steps, base_seed, {paths[0], paths[1]});
    const auto atoms = s.automaton.atoms().names();
    std::string first = atoms.empty() ? "" : atoms.front(), second = atoms.size() > 1 ? atoms[1] : first;
    if (!cycle.empty()) {
      const auto comma = cycle.find(',');
      if (comma == std::string::npos) throw cli::InputError("--cycle expects first,second");
      first = cycle.substr(0, comma);
      second = cycle.substr(comma + 1);
    }
    const auto opt = cli::marl_options(s);
    std::ostringstream csv;
    csv << "rollout,seed,co_occupancy,cycles0,cycles1,trap0,trap1\n";
    std::size_t total_co = 0;
    for (std::size_t i = 0; i < count; ++i) {
      pomdp::Rng env(base_seed + i);
      std::array<pomdp::Rng, 2> rng{agent::agent_rng(base_seed + i, 0), agent::agent_rng(base_seed + i, 1)};
      const auto jt = agent::marl_rollout(p, nets, s.config(), opt.starts, n_steps, env, rng);
      const std::size_t co = agent::co_occupancy(jt);
      total_co += co;
      std::array<RolloutSummary, 2> sum{summarize(s, jt.agents[0]), summarize(s, jt.agents[1])};
      csv << i << "," << base_seed + i << "," << co;
      for (int k = 0; k < 2; ++k) csv << "," << agent::count_cycles(jt.agents[k], first, second);
      for (int k = 0; k < 2; ++k) csv << "," << sum[k].verdict.trap;
      csv << "\n";
      if (count == 1) {
        for (int k = 0; k < 2; ++k) {
          std::ofstream f(suffixed(out, "_agent" + std::to_string(k)));
          agent::write_trace(f, jt.agents[k]);
          print_summary(std::cout, s, sum[k], "agent" + std::to_string(k) + " ");
          std::cout << "agent" << k << " " << first << "-then-" << second << " cycles "
                    << agent::count_cycles(jt.agents[k], first, second) << "\n";
        }
        std::cout << "co-occupancy " << co << "\n";
      }
    }
    if (count > 1) {
      cli::write_file(stats, csv.str());
      std::cout << count << " joint rollouts: co-occupancy " << total_co << "; per-rollout rows in " << stats << "\n";
    }
    return kOk;
  }
};

// ---- check ----

struct CheckCmd {
  std::string trace;
  TaskFlags task;
  std::optional<std::size_t> periodize;

  int run() const {
    if (!task.given()) throw cli::InputError("check needs --task, --formula or --hoa");
    std::ifstream in(trace);
    if (!in) throw cli::InputError("cannot read '" + trace + "'");
    const agent::Trace t = agent::read_trace(in);
    const automata::Ldgba a = cli::build_automaton(task.source());
    std::size_t moves = 0;
    for (const auto& st : t.steps) moves += !st.epsilon;
    if (moves == 0) {
      std::cout << "verdict: insufficient (no environment moves)\n";
      return kVerdictFail;
    }
    const agent::TraceVerdict v = agent::check_trace(t, a, periodize);
    std::cout << "moves " << v.length << ", accepting visits " << v.accepting_visits << "\n";
    bool all = true;
    for (std::size_t k = 0; k < v.set_visits.size(); ++k) {
      std::cout << "F" << k << " visits " << v.set_visits[k] << "\n";
      all &= v.set_visits[k] > 0;
    }
    if (v.trap) {
      std::cout << "verdict: trap\n";
      return kVerdictFail;
    }
    if (v.lasso) {
      std::cout << "verdict: " << (*v.lasso ? "accepted" : "rejected") << " (lasso, cycle " << *periodize << ")\n";
      return *v.lasso ? kOk : kVerdictFail;
    }
    std::cout << "verdict: " << (all ? "visited" : "unvisited") << " (every acceptance set seen at least once)\n";
    return all ? kOk : kVerdictFail;
  }
};

// ---- oracle ----

struct OracleCmd {
  SourceFlags src;
  double tol = 1e-10;
  std::size_t bound = 50000;
  std::string out = "qtable.csv", explicit_out, compare;

  int run() const {
    const cli::Setup s = src.resolve();
    if (s.two_agents()) throw cli::InputError("the oracle covers single-agent products");
    const product::Product p = make_product(s);
    const auto e = product::enumerate_explicit(p, bound);
    const double g = s.config().gamma;
    const auto t = product::value_iteration(e, g, tol);
    std::ostringstream csv;
    csv << "state,s,x,y,q,action,action_name,q_value\n";
    for (std::uint32_t x = 0; x < e.size(); ++x)
      for (std::uint32_t a = 0; a < e.actions; ++a) {
        if (!t.available(x, a)) continue;
        const auto ps = e.state(x);
        const auto c = s.spec.cell_of(ps.s);
        const std::string name = p.is_epsilon(a) ? "eps" + std::to_string(a - p.env_action_count())
                                                 : s.pomdp.action_names()[a];
        csv << x << "," << ps.s << "," << c.x << "," << c.y << "," << ps.q << "," << a << "," << name << ","
            << agent::format_double(t.at(x, a)) << "\n";
      }
    cli::write_file(out, csv.str());
    if (!explicit_out.empty()) {
      std::ostringstream ex;
      ex << "state,action,to,prob,reward\n";
      for (std::uint32_t x = 0; x < e.size(); ++x)
        for (std::uint32_t a = 0; a < e.actions; ++a)
          for (const auto& edge : e.row(x, a))
            ex << x << "," << a << "," << edge.to << "," << agent::format_double(edge.prob) << ","
               << agent::format_double(edge.reward) << "\n";
      cli::write_file(explicit_out, ex.str());
    }
    std::cout << "product states " << e.size() << ", actions " << e.actions << ", gamma " << g << "\n";
    std::cout << "iterations " << t.iterations << ", bellman residual " << t.residual
              << (t.converged ? "" : " (not converged)") << "\n";
    if (!compare.empty()) {
      const auto net = neural::load_checkpoint(compare);
      for (bool det : {false, true}) {
        const auto r = agent::compare_policy(p, net, e, t, cli::start_states(s), det);
        std::cout << (det ? "deterministic part: " : "all states: ") << "compared " << r.states << ", agreement "
                  << r.fraction() << ", mean q-gap " << r.mean_q_gap << "\n";
      }
    }
    return t.converged ? kOk : kVerdictFail;
  }
};

// ---- gradcheck ----

struct GradCheckCmd {
  std::string seeds = "1..20", arch = "lstm";
  double tol = 1e-4, h = 1e-5;

  std::pair<std::uint64_t, std::uint64_t> range() const {
    const auto dots = seeds.find("..");
    try {
      if (dots == std::string::npos) {
        const auto v = agent::parse_uint("--seed", seeds);
        return {v, v};
      }
      const auto lo = agent::parse_uint("--seed", seeds.substr(0, dots)),
                 hi = agent::parse_uint("--seed", seeds.substr(dots + 2));
      if (hi < lo) throw cli::InputError("--seed range is empty");
      return {lo, hi};
    } catch (const agent::ConfigError& e) {
      throw cli::InputError(e.what());
    }
  }

  int run() const {
    const auto [lo, hi] = range();
    const auto a = arch == "lstm" ? neural::Architecture::TwinLstm : neural::Architecture::Dense;
    bool ok = true;
    for (std::uint64_t seed = lo; seed <= hi; ++seed) {
      const auto c = neural::random_grad_case(seed, a);
      const auto r = neural::grad_check(c.net, c.obs, c.task, c.weights, tol, h);
      std::cout << "seed " << seed << ": max relative error " << r.max_rel_error << " at " << r.worst_param << "["
                << r.worst_index << "] over " << r.checked << " parameters: " << (r.pass ? "pass" : "FAIL") << "\n";
      ok &= r.pass;
    }
    return ok ? kOk : kVerdictFail;
  }
};

// ---- environments ----

struct EnvSaveCmd {
  std::string preset, out, all;

  int run() const {
    if (!all.empty()) {
      fs::create_directories(all);
      for (const auto& n : worlds::preset_names())
        worlds::write_env(worlds::preset_spec(n), (fs::path(all) / (n + ".env")).string());
      std::cout << "wrote " << worlds::preset_names().size() << " presets to " << all << "\n";
      return kOk;
    }
    if (preset.empty()) throw cli::InputError("env-save needs --preset or --all");
    const std::string text = worlds::save_env(worlds::preset_spec(preset));
    if (out.empty()) std::cout << text;
    else cli::write_file(out, text);
    return kOk;
  }
};

struct ValidateCmd {
  std::string env, hoa;

  int run() const {
    if (env.empty() && hoa.empty()) throw cli::InputError("validate needs --env and/or --hoa");
    if (!env.empty()) {
      const auto g = worlds::load_env(env);
      const auto m = worlds::build_grid(g);
      if (const auto probs = pomdp::validate(m); !probs.empty()) throw cli::InputError(env + ": " + probs.front());
      std::cout << env << ": ok (" << m.state_count() << " states, " << m.action_count() << " actions, "
                << m.observation_count() << " observations, task " << g.task << ")\n";
    }
    if (!hoa.empty()) {
      const auto a = automata::load_hoa(cli::read_file(hoa));
      if (const auto probs = automata::validate(a); !probs.empty()) throw cli::InputError(hoa + ": " + probs.front());
      std::cout << hoa << ": ok (" << a.size() << " states, " << a.acceptance_set_count() << " acceptance sets)\n";
    }
    return kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTL task planning with LDGBA products and recurrent Q-networks"};
  app.require_subcommand(1);

  ConvertCmd convert;
  auto* c = app.add_subcommand("convert", "Translate a formula or registry task to HOA");
  convert.task.add(c);
  c->add_option("--out", convert.out, "Output HOA file (default: stdout)");
  c->add_option("--name", convert.name, "HOA name header");

  TrainCmd train;
  auto* t = app.add_subcommand("train", "Train an agent; writes manifest, metrics, plot data and checkpoint");
  train.src.add(t);
  t->add_option("--manifest", train.manifest, "Re-run exactly the run recorded in this manifest");
  t->add_option("--out", train.out, "Output directory")->capture_default_str();
  t->add_flag("--quiet", train.quiet, "No progress lines");

  RolloutCmd roll;
  auto* r = app.add_subcommand("rollout", "Greedy rollout of a trained checkpoint");
  roll.src.add(r, {"steps", "seed"});
  r->add_option("--manifest", roll.manifest, "Training manifest; its directory holds the checkpoint");
  r->add_option("--checkpoint", roll.checkpoint, "Checkpoint file (two agents: suffixed _agent0/_agent1)");
  r->add_option("--steps", roll.steps, "Rollout length (default: config steps)");
  r->add_option("--seed", roll.seed, "Rollout seed (default: config seed)");
  r->add_option("--start", roll.start, "Start cell x,y (default: the preset start or a sampled free cell)");
  r->add_option("--out", roll.out, "Trace file (JSON lines)")->capture_default_str();
  r->add_option("--count", roll.count, "Number of rollouts; above 1 only aggregate statistics are written");
  r->add_option("--jobs", roll.jobs, "Parallel workers for batch rollouts");
  r->add_option("--stats", roll.stats, "Batch statistics CSV")->capture_default_str();
  r->add_option("--cycle", roll.cycle, "Two agents: atoms first,second of a counted cycle");
  r->add_flag("--stop-on-trap", roll.stop_on_trap, "End the rollout when the automaton is trapped");

  CheckCmd check;
  auto* k = app.add_subcommand("check", "Check a trace against a task");
  k->add_option("--trace", check.trace, "Trace file")->required();
  check.task.add(k);
  k->add_option("--periodize", check.periodize, "Repeat the last N labels forever and decide the lasso");

  OracleCmd oracle;
  auto* o = app.add_subcommand("oracle", "Value iteration on the explicit product");
  oracle.src.add(o);
  o->add_option("--tol", oracle.tol, "Residual tolerance")->capture_default_str();
  o->add_option("--bound", oracle.bound, "Largest product state count to enumerate")->capture_default_str();
  o->add_option("--out", oracle.out, "Q-table CSV")->capture_default_str();
  o->add_option("--explicit", oracle.explicit_out, "Also write the explicit MDP rows as CSV");
  o->add_option("--compare", oracle.compare, "Checkpoint whose greedy policy is compared with the oracle's");

  GradCheckCmd grad;
  auto* g = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradients on seeded networks");
  g->add_option("--seed", grad.seeds, "Seed or range lo..hi")->capture_default_str();
  g->add_option("--tol", grad.tol, "Relative error tolerance")->capture_default_str();
  g->add_option("--step", grad.h, "Central difference step")->capture_default_str();
  g->add_option("--arch", grad.arch, "lstm|dense")->check(CLI::IsMember({"lstm", "dense"}))->capture_default_str();

  EnvSaveCmd env_save;
  auto* es = app.add_subcommand("env-save", "Write preset environment files");
  es->add_option("--preset", env_save.preset, "Preset")->check(CLI::IsMember(worlds::preset_names()));
  es->add_option("--out", env_save.out, "Output file (default: stdout)");
  es->add_option("--all", env_save.all, "Write every preset into this directory");

  ValidateCmd validate;
  auto* v = app.add_subcommand("validate", "Validate an environment file and/or a HOA automaton");
  v->add_option("--env", validate.env, "Environment file");
  v->add_option("--hoa", validate.hoa, "HOA file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*c) return convert.run();
    if (*t) return train.run();
    if (*r) return roll.run();
    if (*k) return check.run();
    if (*o) return oracle.run();
    if (*g) return grad.run();
    if (*es) return env_save.run();
    if (*v) return validate.run();
  } catch (const logic::ParseError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kInputError;
  } catch (const translate::FragmentError& e) {
    std::cerr << "unsupported formula: " << e.what() << "\n";
    return kInputError;
  } catch (const automata::HoaError& e) {
    std::cerr << "HOA error: " << e.what() << "\n";
    return kInputError;
  } catch (const worlds::EnvError& e) {
    std::cerr << "environment error: " << e.what() << "\n";
    return kInputError;
  } catch (const neural::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return kInputError;
  } catch (const product::BoundExceeded& e) {
    std::cerr << "product too large: " << e.what() << "\n";
    return kInputError;
  } catch (const cli::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {  // config, trace and model validation
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
