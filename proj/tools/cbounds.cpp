#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cbounds/datagen.hpp"
#include "cbounds/pipeline.hpp"
#include "cbounds/response_oracle.hpp"
#include "json.hpp"

using namespace cbounds;
using Json = nlohmann::ordered_json;

namespace {

struct Config {
  std::string graph;
  std::string example;
  std::string table;
  std::string method = "auto";
  std::string mode = "sem-sampled";
  std::string delta_grid = "0:0.2:0.02";
  std::string dump;
  std::string out;
  std::string errors_csv;
  double delta = 0;
  double budget_s = 1200;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t r_cap = 1'000'000;
  long col_cap = 1'000'000;
  int workers = 1;
  int count = 0;
  bool multi_pass = false;
  bool observe = false;
};

RandomMode parse_mode(const std::string& s) {
  if (s == "dirichlet") return RandomMode::kDirichlet;
  if (s == "sem-random") return RandomMode::kSemRandom;
  if (s == "sem-sampled") return RandomMode::kSemSampled;
  throw Error(ErrorCode::kParse, "unknown mode '" + s + "' (dirichlet, sem-random, sem-sampled)");
}

struct Inputs {
  ProblemSpec spec;
  std::optional<Example> example;
};

Inputs load_problem(const Config& c) {
  if (c.graph.empty() == c.example.empty()) {
    throw Error(ErrorCode::kParse, "give exactly one of --graph and --example");
  }
  Inputs in;
  if (!c.graph.empty()) {
    in.spec = read_problem(c.graph);
    return in;
  }
  in.example = builtin_example(c.example);
  in.spec.graph = in.example->graph;
  in.spec.query = in.example->query;
  if (c.observe) in.spec.observation = in.example->observation;
  return in;
}

/// --table wins; otherwise the example's model, resampled when --seed is given.
ProbabilityTable instance_table(const Config& c, const Inputs& in, std::uint64_t seed,
                                bool seeded) {
  if (!c.table.empty()) return read_table(in.spec.graph, c.table);
  if (!in.example) throw Error(ErrorCode::kParse, "--table is required with --graph");
  if (seeded) return random_instance(in.example->model, seed, parse_mode(c.mode));
  return table_from_model(in.example->model);
}

ProbabilityTable load_table(const Config& c, const Inputs& in) {
  return instance_table(c, in, c.seed, c.seed_set);
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + c.out);
  f << text;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string sci(double x, int digits = 2) {
  if (x == 0) return "0";
  const int e = static_cast<int>(std::floor(std::log10(std::abs(x))));
  double m = x / std::pow(10.0, e);
  int exp = e;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits - 1, m);
  if (std::string(buf).rfind("10", 0) == 0) {
    m /= 10;
    ++exp;
    std::snprintf(buf, sizeof buf, "%.*f", digits - 1, m);
  }
  return std::string(buf) + "e" + std::to_string(exp);
}

/// Loads the pruned problem from --dump when the file exists, otherwise
/// builds it and writes the dump if a path was given.
PrunedProblem pruned_for(const Config& c, const ProblemSpec& spec) {
  const Observation* w = spec.observation_ptr();
  if (!c.dump.empty() && std::filesystem::exists(c.dump)) {
    std::ifstream f(c.dump, std::ios::binary);
    return read_pruned(f, spec.graph, spec.query, w);
  }
  PrunedProblem problem = build_pruned(spec.graph, spec.query, w);
  if (!c.dump.empty()) {
    std::ofstream f(c.dump, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, "cannot write " + c.dump);
    write_pruned(f, problem);
  }
  return problem;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> grid;
  auto number = [&](const std::string& t) {
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, "bad delta grid entry '" + t + "'");
    }
  };
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw Error(ErrorCode::kParse, "delta grid is start:stop:step");
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double step = number(parts[2]);
    if (step <= 0) throw Error(ErrorCode::kParse, "delta grid step must be positive");
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
  }
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) grid.push_back(number(p));
  return grid;
}

Json histogram_json(const GreedyResult& r) {
  return {{"-1", r.histogram[0]}, {"0", r.histogram[1]}, {"1", r.histogram[2]},
          {"other", r.histogram[3]}};
}

// ---------------------------------------------------------------- commands

int cmd_validate(const Config& c) {
  const Inputs in = load_problem(c);
  const auto report = validate_graph(in.spec.graph);
  Json j;
  j["valid"] = report.ok();
  Json v = Json::array();
  for (const auto& x : report.violations) {
    v.push_back({{"code", std::string(to_string(x.code))}, {"detail", x.detail}});
  }
  j["violations"] = v;
  int rc = report.ok() ? 0 : 2;
  if (report.ok()) {
    auto check = [&](const char* key, auto&& f) {
      try {
        f();
        j[key] = "ok";
      } catch (const Error& e) {
        j[key] = e.what();
        rc = 2;
      }
    };
    check("query", [&] { validate_query(in.spec.graph, in.spec.query); });
    if (in.spec.observation) {
      check("observation",
            [&] { validate_observation(in.spec.graph, in.spec.query, *in.spec.observation); });
    }
  }
  emit(c, dump_json(j));
  return rc;
}

int cmd_stats(const Config& c) {
  const Inputs in = load_problem(c);
  const auto& g = in.spec.graph;
  require_valid(g);
  const ResponseCount r = count_R(g);
  const int bits = hyperarc_bits(g);
  const std::uint64_t candidates = std::uint64_t{1} << bits;
  const std::uint64_t h = count_valid(g);
  Json j;
  j["R"] = r.decimal();
  j["R_sci"] = r.scientific(2);
  j["candidates"] = candidates;
  j["candidates_sci"] = sci(static_cast<double>(candidates));
  j["candidates_log2"] = bits;
  j["H"] = h;
  j["H_sci"] = sci(static_cast<double>(h));
  emit(c, dump_json(j));
  return 0;
}

int cmd_bound(const Config& c) {
  const Inputs in = load_problem(c);
  const ProbabilityTable p = load_table(c, in);
  BoundRequest req;
  req.method = parse_method(c.method);
  req.delta = c.delta;
  req.r_cap = c.r_cap;
  req.col_cap = c.col_cap;
  std::optional<PrunedProblem> problem;
  if (!c.dump.empty()) {
    problem = pruned_for(c, in.spec);
    req.prebuilt = &*problem;
  }
  emit(c, bounds_json(compute_bounds(in.spec, p, req)));
  return 0;
}

int cmd_sweep(const Config& c) {
  const Inputs in = load_problem(c);
  const ProbabilityTable p = load_table(c, in);
  require_valid(in.spec.graph);
  validate_query(in.spec.graph, in.spec.query);
  if (in.spec.observation) {
    validate_observation(in.spec.graph, in.spec.query, *in.spec.observation);
  }
  const PrunedProblem problem = pruned_for(c, in.spec);
  lp::SolverOptions options;
  options.max_columns = c.col_cap;
  std::ostringstream os;
  os << "delta,lower,upper,status\n";
  for (const auto& row : delta_sweep(problem, p, parse_grid(c.delta_grid), options)) {
    os << format_double(row.delta) << ',' << format_double(row.lower) << ','
       << format_double(row.upper) << ',' << row.status << '\n';
  }
  emit(c, os.str());
  return 0;
}

int greedy_batch(const Config& c, const Inputs& in, const PrunedProblem& problem) {
  if (!in.example) throw Error(ErrorCode::kParse, "--count needs --example");
  lp::SolverOptions options;
  options.max_columns = c.col_cap;
  const CellIndex index(problem);
  int lower_exact = 0;
  int upper_exact = 0;
  int upper_10 = 0;
  int sandwich = 0;
  std::ostringstream errors;
  errors << "seed,lp_lower,lp_upper,greedy_lower,greedy_upper,eps_lower,eps_upper\n";
  for (int k = 0; k < c.count; ++k) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(k);
    const ProbabilityTable p = instance_table(c, in, seed, true);
    const Bounds lp = bounds_pruned(problem, p, options);
    const double gl = greedy_lower(problem, index, p).bound;
    const double gu = greedy_upper(problem, index, p).bound;
    const double eps_l = lp.lower > 0 ? (lp.lower - gl) / lp.lower : lp.lower - gl;
    const double eps_u = lp.upper > 0 ? (gu - lp.upper) / lp.upper : gu - lp.upper;
    lower_exact += std::abs(gl - lp.lower) <= 1e-8;
    upper_exact += std::abs(gu - lp.upper) <= 1e-8;
    upper_10 += eps_u <= 0.1;
    sandwich += !(gl <= lp.lower + 1e-8 && lp.lower <= lp.upper + 1e-8 && lp.upper <= gu + 1e-8);
    errors << seed << ',' << format_double(lp.lower) << ',' << format_double(lp.upper) << ','
           << format_double(gl) << ',' << format_double(gu) << ',' << format_double(eps_l) << ','
           << format_double(eps_u) << '\n';
  }
  if (!c.errors_csv.empty()) {
    std::ofstream f(c.errors_csv, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, "cannot write " + c.errors_csv);
    f << errors.str();
  }
  const double n = c.count;
  Json j;
  j["example"] = in.example->id;
  j["instances"] = c.count;
  j["mode"] = c.mode;
  j["first_seed"] = c.seed;
  j["lower_exact_pct"] = 100.0 * lower_exact / n;
  j["upper_exact_pct"] = 100.0 * upper_exact / n;
  j["upper_within_10pct"] = 100.0 * upper_10 / n;
  j["sandwich_violations"] = sandwich;
  emit(c, dump_json(j));
  return sandwich == 0 ? 0 : 1;
}

int cmd_greedy(const Config& c) {
  const Inputs in = load_problem(c);
  ProblemSpec spec = in.spec;
  if (spec.observation) {
    throw Error(ErrorCode::kPreconditionFailed, "the greedy does not handle observations");
  }
  require_valid(spec.graph);
  validate_query(spec.graph, spec.query);
  const PrunedProblem problem = pruned_for(c, spec);
  if (c.count > 0) return greedy_batch(c, in, problem);

  const ProbabilityTable p = load_table(c, in);
  GreedyOptions options;
  options.multi_pass = c.multi_pass;
  GreedyResult lo;
  GreedyResult hi;
  const Bounds b = greedy_bounds(problem, p, options, &lo, &hi);
  Json j;
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  j["method"] = to_string(b.method);
  j["H_size"] = b.h_size;
  j["steps_lower"] = lo.steps;
  j["steps_upper"] = hi.steps;
  j["passes"] = std::max(lo.passes, hi.passes);
  j["lambda_lower"] = histogram_json(lo);
  j["lambda_upper"] = histogram_json(hi);
  Json warnings = Json::array();
  for (const auto& w : lo.warnings) warnings.push_back(w);
  j["warnings"] = warnings;
  emit(c, dump_json(j));
  return 0;
}

int cmd_bench(const Config& c) {
  const Inputs in = load_problem(c);
  const auto& g = in.spec.graph;
  require_valid(g);
  validate_query(g, in.spec.query);
  const ProbabilityTable dims(g.a_count(), g.b_count());
  const ResponseSpace s(g);
  using Clock = std::chrono::steady_clock;
  auto seconds = [](Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
  };
  Json j;
  j["graph"] = in.example ? in.example->id : c.graph;
  j["R"] = count_R(g).scientific(2);
  j["budget_s"] = c.budget_s;
  j["workers"] = 1;
  j["solver"] = "cbounds revised simplex";

  auto t0 = Clock::now();
  const PrunedProblem direct = algorithm1(g, in.spec.query, dims);
  j["t_H"] = seconds(t0);
  j["H_size"] = direct.size();
  const auto run = algorithm3_benchmark(s, in.spec.query, dims, c.budget_s);
  j["t_R"] = run.completed ? Json(run.seconds) : Json(">" + format_double(c.budget_s));
  j["R_visited"] = run.visited;
  if (run.completed) j["agree"] = run.problem.codes == direct.codes && run.problem.flags == direct.flags;

  if (in.spec.observation) {
    const auto& w = *in.spec.observation;
    validate_observation(g, in.spec.query, w);
    t0 = Clock::now();
    const PrunedProblem direct_w = algorithm2(g, in.spec.query, w, dims);
    j["t_H_obs"] = seconds(t0);
    const auto run_w = algorithm4_benchmark(s, in.spec.query, w, dims, c.budget_s);
    j["t_R_obs"] = run_w.completed ? Json(run_w.seconds) : Json(">" + format_double(c.budget_s));
    if (run_w.completed) {
      j["agree_obs"] = run_w.problem.codes == direct_w.codes && run_w.problem.flags == direct_w.flags;
    }
  }
  emit(c, dump_json(j));
  return 0;
}

int cmd_gen(const Config& c) {
  if (c.example.empty()) throw Error(ErrorCode::kParse, "gen needs --example");
  if (c.out.empty()) throw Error(ErrorCode::kParse, "gen needs --out PREFIX");
  const Inputs in = load_problem(c);
  const ProbabilityTable p = load_table(c, in);
  {
    std::ofstream f(c.out + ".json", std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, "cannot write " + c.out + ".json");
    f << problem_json(in.spec.graph, in.spec.query, in.spec.observation_ptr());
  }
  std::ofstream f(c.out + ".csv", std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + c.out + ".csv");
  write_table(f, in.spec.graph, p);
  return 0;
}

int cmd_probe(const Config& c) {
  const Inputs in = load_problem(c);
  ProblemSpec spec = in.spec;
  spec.observation.reset();
  require_valid(spec.graph);
  validate_query(spec.graph, spec.query);
  const PrunedProblem problem = pruned_for(c, spec);
  const int n = std::max(1, c.count);
  int lower = 0;
  int upper = 0;
  double worst = 0;
  Json worst_seed = nullptr;
  for (int k = 0; k < n; ++k) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(k);
    const ProbabilityTable p = instance_table(c, in, seed, c.count > 0 || c.seed_set);
    const DualProbe probe = dual_integrality_probe(problem, p);
    lower += probe.lower_integral;
    upper += probe.upper_integral;
    if (probe.max_deviation > worst) {
      worst = probe.max_deviation;
      worst_seed = seed;
    }
  }
  Json j;
  j["instances"] = n;
  j["lower_integral_fraction"] = static_cast<double>(lower) / n;
  j["upper_integral_fraction"] = static_cast<double>(upper) / n;
  j["max_deviation"] = worst;
  j["worst_seed"] = worst_seed;
  emit(c, dump_json(j));
  return 0;
}

int exit_code(ErrorCode code) {
  switch (category(code)) {
    case ErrorCategory::kModel: return 2;
    case ErrorCategory::kCapacity: return 3;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds on counterfactual queries over discrete causal graphs"};
  app.require_subcommand(1);
  Config c;

  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("--graph", c.graph, "problem JSON (graph, query, observation)");
    sub->add_option("--example", c.example, "builtin example id instead of --graph");
    sub->add_flag("--observe", c.observe, "condition a builtin example on its observation");
  };
  auto add_table = [&](CLI::App* sub) {
    sub->add_option("--table", c.table, "probability table CSV");
    sub->add_option("--seed", c.seed, "resample the example's table with this seed")
        ->each([&](const std::string&) { c.seed_set = true; });
    sub->add_option("--mode", c.mode, "dirichlet | sem-random | sem-sampled");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "output path (default stdout)");
    sub->add_option("--workers", c.workers, "worker threads (computation is sequential)");
    sub->add_option("--r-cap", c.r_cap, "largest |R| the naive LP accepts");
    sub->add_option("--col-cap", c.col_cap, "largest column count handed to the LP solver");
  };

  auto* validate = app.add_subcommand("validate", "check graph, query and observation");
  add_problem(validate);
  add_common(validate);
  auto* stats = app.add_subcommand("stats", "|R|, candidate and valid hyperarc counts");
  add_problem(stats);
  add_common(stats);
  auto* bound = app.add_subcommand("bound", "compute lower and upper bounds");
  add_problem(bound);
  add_table(bound);
  add_common(bound);
  bound->add_option("--method", c.method, "auto | pruned | closed-form | naive | greedy");
  bound->add_option("--delta", c.delta, "half-width of the per-cell estimate interval");
  bound->add_option("--dump", c.dump, "binary hyperarc dump to reuse or create");
  auto* sweep = app.add_subcommand("sweep", "finite-data bounds over a delta grid (CSV)");
  add_problem(sweep);
  add_table(sweep);
  add_common(sweep);
  sweep->add_option("--delta-grid", c.delta_grid, "start:stop:step or a comma list");
  sweep->add_option("--dump", c.dump, "binary hyperarc dump to reuse or create");
  auto* greedy = app.add_subcommand("greedy", "greedy dual bounds; --count runs a batch");
  add_problem(greedy);
  add_table(greedy);
  add_common(greedy);
  greedy->add_option("--dump", c.dump, "binary hyperarc dump to reuse or create");
  greedy->add_option("--count", c.count, "instances per batch (needs --example)");
  greedy->add_option("--errors-csv", c.errors_csv, "per-instance errors of a batch");
  greedy->add_flag("--multi-pass", c.multi_pass, "revisit cells until nothing changes");
  auto* bench = app.add_subcommand("bench", "time the direct and enumeration constructions");
  add_problem(bench);
  add_common(bench);
  bench->add_option("--budget-s", c.budget_s, "wall-clock budget for the enumeration");
  auto* gen = app.add_subcommand("gen", "write PREFIX.json and PREFIX.csv for an example");
  add_problem(gen);
  add_table(gen);
  gen->add_option("--out", c.out, "output prefix");
  auto* probe = app.add_subcommand("probe", "integrality of the optimal duals");
  add_problem(probe);
  add_table(probe);
  add_common(probe);
  probe->add_option("--count", c.count, "instances (seeds from --seed upward)");
  probe->add_option("--dump", c.dump, "binary hyperarc dump to reuse or create");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c.workers < 1) throw Error(ErrorCode::kParse, "--workers must be positive");
    if (validate->parsed()) return cmd_validate(c);
    if (stats->parsed()) return cmd_stats(c);
    if (bound->parsed()) return cmd_bound(c);
    if (sweep->parsed()) return cmd_sweep(c);
    if (greedy->parsed()) return cmd_greedy(c);
    if (bench->parsed()) return cmd_bench(c);
    if (gen->parsed()) return cmd_gen(c);
    if (probe->parsed()) return cmd_probe(c);
  } catch (const Error& e) {
    Json j{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 1;
}
