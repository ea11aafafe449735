// Command-line front end for the gapsat library.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gapsat/gapsat.hpp"

namespace fs = std::filesystem;
using namespace gapsat;

namespace {

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream out;
    out << std::cin.rdbuf();
    return out.str();
  }
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Formula read_formula(const std::string& path) {
  std::vector<std::string> warnings;
  Formula f = parse_dimacs(read_text(path), &warnings);
  for (const auto& w : warnings)
    std::cerr << "warning: " << path << ": " << w << '\n';
  return f;
}

std::vector<Clause> read_clauses(const std::string& path) {
  std::istringstream in(read_text(path));
  return parse_clause_list(in);
}

/// Reads a model; the variable count is taken from `n` or, if 0, from the
/// largest literal in the file.
Assignment read_model(const std::string& path, Var n) {
  const std::string text = read_text(path);
  if (n == 0) {
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
      char* end = nullptr;
      const long v = std::strtol(tok.c_str(), &end, 10);
      if (*end == '\0')
        n = std::max<Var>(n, static_cast<Var>(std::labs(v)));
    }
  }
  return parse_model(text, n);
}

/// Writes to `path`, or stdout when the path is empty or "-".
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string clause_list(const std::vector<Clause>& clauses, const std::vector<std::string>& comments = {}) {
  std::ostringstream out;
  for (const auto& c : comments)
    out << "c " << c << '\n';
  for (const auto& c : clauses)
    write_clause(out, c);
  return out.str();
}

/// Cap syntax: "N" (absolute), "X%" (of m) or "m/10".
std::optional<std::size_t> parse_cap(const std::string& spec, std::size_t m) {
  if (spec.empty() || spec == "none")
    return std::nullopt;
  if (spec == "m/10")
    return m / 10;
  if (spec.back() == '%')
    return percent_cap(std::stod(spec.substr(0, spec.size() - 1)), m);
  std::size_t pos = 0;
  const auto value = std::stoull(spec, &pos);
  if (pos != spec.size())
    throw std::invalid_argument("bad cap '" + spec + "'");
  return static_cast<std::size_t>(value);
}

struct ScoringOptions {
  std::string kind;
  std::optional<double> epsilon, cb;

  void add_to(CLI::App* app) {
    app->add_option("--scoring", kind, "Scoring function: poly or exp (default by clause width)")
        ->check(CLI::IsMember({"poly", "exp"}));
    app->add_option("--eps", epsilon, "poly: epsilon");
    app->add_option("--cb", cb, "poly/exp: cb");
  }

  std::optional<ScoringFunction> resolve() const {
    if (kind.empty()) {
      if (epsilon || cb)
        throw std::invalid_argument("--eps/--cb need --scoring");
      return std::nullopt;
    }
    ScoringFunction s = kind == "poly" ? ScoringFunction::poly(epsilon.value_or(0.9), cb.value_or(2.06))
                                       : ScoringFunction::exp(cb.value_or(3.0));
    s.validate();
    return s;
  }
};

ScoringFunction scoring_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  ScoringFunction s;
  if (kind == "poly")
    s = ScoringFunction::poly(j.value("epsilon", 0.9), j.value("cb", 2.06));
  else if (kind == "exp")
    s = ScoringFunction::exp(j.value("cb", 3.0));
  else
    throw std::invalid_argument("unknown scoring kind '" + kind + "'");
  s.validate();
  return s;
}

SolverConfig solver_from_json(const nlohmann::json& j) {
  SolverConfig cfg;
  cfg.id = j.at("id").get<std::string>();
  const std::string kind = j.value("kind", "probsat");
  if (kind == "probsat")
    cfg.kind = SolverConfig::Kind::probsat;
  else if (kind == "gapsat")
    cfg.kind = SolverConfig::Kind::gapsat;
  else
    throw std::invalid_argument("unknown solver kind '" + kind + "'");
  if (j.contains("scoring")) {
    cfg.scoring = scoring_from_json(j["scoring"]);
    cfg.gapsat.scoring = cfg.scoring;
  }
  if (j.contains("miner_seconds"))
    cfg.gapsat.minerSeconds = j["miner_seconds"].get<double>();
  if (j.contains("miner_conflicts"))
    cfg.gapsat.minerConflicts = j["miner_conflicts"].get<std::uint64_t>();
  if (j.contains("initial_flips"))
    cfg.gapsat.initialFlips = j["initial_flips"].get<std::uint64_t>();
  if (j.contains("width_limit"))
    cfg.gapsat.widthLimit = j["width_limit"].get<std::size_t>();
  if (j.contains("cap_percent"))
    cfg.gapsat.countCapPercent = j["cap_percent"].get<double>();
  return cfg;
}

std::vector<SolverConfig> read_solver_configs(const std::vector<std::string>& paths) {
  std::vector<SolverConfig> out;
  for (const auto& path : paths) {
    const auto j = nlohmann::json::parse(read_text(path));
    if (j.is_array())
      for (const auto& item : j)
        out.push_back(solver_from_json(item));
    else
      out.push_back(solver_from_json(j));
  }
  return out;
}

std::vector<BenchInstance> read_instances(const std::vector<std::string>& paths, const std::string& extension) {
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == extension)
          files.push_back(entry.path());
    } else {
      files.emplace_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<BenchInstance> out;
  for (const auto& file : files)
    out.push_back({file.stem().string(), std::make_shared<const Formula>(read_formula(file.string()))});
  return out;
}

std::vector<double> read_csv_column(const std::string& path, const std::string& column) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty CSV");
  const auto header = split_csv_line(line);
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end())
    throw std::runtime_error(path + ": no column '" + column + "'");
  const auto index = static_cast<std::size_t>(it - header.begin());
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto cells = split_csv_line(line);
    if (index >= cells.size())
      throw std::runtime_error(path + ": short row '" + line + "'");
    values.push_back(std::stod(cells[index]));
  }
  return values;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"GapSAT: SLS with CDCL-mined and resolution clauses"};
  app.require_subcommand(1);
  int exitCode = 0;

  // gen ----------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate a uniform or planted random k-SAT instance");
  GenSpec genSpec;
  bool genPlanted = false;
  std::string genOut, genSolution;
  gen->add_option("-n,--vars", genSpec.n, "Number of variables")->required();
  gen->add_option("-k,--width", genSpec.k, "Clause width")->capture_default_str();
  gen->add_option("--ratio", genSpec.ratio, "Clause-to-variable ratio (default: threshold for k)");
  gen->add_option("-m,--clauses", genSpec.m, "Number of clauses (overrides --ratio)");
  gen->add_option("--seed", genSpec.seed)->capture_default_str();
  gen->add_flag("--planted", genPlanted, "Plant a hidden solution");
  gen->add_option("-o,--output", genOut, "Output file (default stdout)");
  gen->add_option("--solution", genSolution, "Where to write the planted solution (default <output>.sol)");
  gen->callback([&] {
    std::vector<std::string> comments = {"gapsat gen n=" + std::to_string(genSpec.n) + " k=" +
                                         std::to_string(genSpec.k) + " seed=" + std::to_string(genSpec.seed) +
                                         (genPlanted ? " planted" : "")};
    if (!genPlanted) {
      write_output(genOut, emit_dimacs(gen_uniform(genSpec), comments));
      return;
    }
    const auto [f, hidden] = gen_planted(genSpec);
    write_output(genOut, emit_dimacs(f, comments));
    std::string solPath = genSolution;
    if (solPath.empty())
      solPath = genOut.empty() || genOut == "-" ? "planted.sol" : genOut + ".sol";
    write_output(solPath, format_model(hidden) + "\n");
  });

  // solve-sls ----------------------------------------------------------------
  auto* sls = app.add_subcommand("solve-sls", "Run probSAT (no restarts) on a DIMACS file");
  std::string slsInput;
  std::uint64_t slsMaxFlips = default_flip_timeout(3), slsSeed = 0;
  std::optional<double> slsSeconds;
  ScoringOptions slsScoring;
  sls->add_option("input", slsInput, "DIMACS file or - for stdin")->required();
  sls->add_option("--max-flips", slsMaxFlips)->capture_default_str();
  sls->add_option("--seconds", slsSeconds, "Optional wall-clock limit");
  sls->add_option("--seed", slsSeed)->capture_default_str();
  slsScoring.add_to(sls);
  sls->callback([&] {
    const Formula f = read_formula(slsInput);
    const ScoringFunction scoring = slsScoring.resolve().value_or(default_scoring(f.max_width_or_zero()));
    SlsLimits limits;
    limits.maxFlips = slsMaxFlips;
    if (slsSeconds)
      limits.deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(*slsSeconds));
    const RunResult r = probsat_run(f, limits, slsSeed, scoring);
    std::cout << "c probsat " << scoring.describe() << " seed " << slsSeed << ": "
              << (r.solved() ? "solved" : "gave up") << " after " << r.flipsUsed << " flips in " << r.wallSeconds
              << " s\n";
    std::cout << "c result status=" << (r.solved() ? "solved" : "flips-exhausted") << " flips=" << r.flipsUsed
              << " seconds=" << r.wallSeconds << " seed=" << slsSeed << '\n';
    std::cout << "s " << (r.solved() ? "SATISFIABLE" : "UNKNOWN") << '\n';
    if (r.model)
      std::cout << format_model(*r.model) << '\n';
    exitCode = r.solved() ? 10 : 0;
  });

  // mine ---------------------------------------------------------------------
  auto* mine = app.add_subcommand("mine", "Run the CDCL miner and export learned clauses");
  std::string mineInput, mineOut, mineCap, mineMode = "chronological";
  double mineSeconds = defaultMinerSeconds;
  std::optional<std::uint64_t> mineConflicts;
  std::size_t mineWidth = std::numeric_limits<std::size_t>::max();
  bool mineEarlyStop = false;
  std::uint64_t mineSeed = 0;
  mine->add_option("input", mineInput)->required();
  mine->add_option("--seconds", mineSeconds)->capture_default_str();
  mine->add_option("--conflicts", mineConflicts, "Conflict budget (deterministic)");
  mine->add_option("--width-limit", mineWidth, "Keep clauses of at most this width");
  mine->add_option("--cap", mineCap, "Count cap: N, X% of m, or m/10");
  mine->add_flag("--early-stop", mineEarlyStop, "Stop mining once the cap is reached");
  mine->add_option("--mode", mineMode, "Selection when over the cap")
      ->check(CLI::IsMember({"chronological", "random"}))
      ->capture_default_str();
  mine->add_option("--seed", mineSeed)->capture_default_str();
  mine->add_option("-o,--output", mineOut);
  mine->callback([&] {
    const Formula f = read_formula(mineInput);
    const auto cap = parse_cap(mineCap, f.num_clauses());
    MiningBudget budget;
    budget.wallSeconds = mineSeconds;
    budget.conflictLimit = mineConflicts;
    budget.widthLimit = mineWidth;
    if (mineEarlyStop)
      budget.countCap = cap;
    const MiningOutcome out = cdcl_solve_and_mine(f, budget, mineSeed);
    const auto exported = filter_learned(out.learned, mineWidth, cap,
                                         mineMode == "random" ? FilterMode::random : FilterMode::chronological,
                                         mineSeed);
    std::cerr << "c miner status=" << to_string(out.status) << " conflicts=" << out.conflicts
              << " seconds=" << out.seconds << '\n';
    write_output(mineOut, clause_list(exported, {"learned " + std::to_string(out.totalLearnedSeen) + " exported " +
                                                 std::to_string(exported.size())}));
  });

  // enrich -------------------------------------------------------------------
  auto* enrich = app.add_subcommand("enrich", "Add resolvents or learned clauses to a formula");
  std::string enrichInput, enrichOut, enrichMode = "level1", enrichCap = "m/10";
  std::optional<std::size_t> enrichWidth;
  std::uint64_t enrichSeed = 0, enrichPairs = defaultLevel2PairBudget;
  double enrichSeconds = defaultMinerSeconds;
  std::optional<std::uint64_t> enrichConflicts;
  enrich->add_option("input", enrichInput)->required();
  enrich->add_option("--mode", enrichMode)
      ->check(CLI::IsMember({"level1", "level2", "ternary", "cdcl"}))
      ->capture_default_str();
  enrich->add_option("--max-width", enrichWidth, "Width limit (default: max clause width + 1)");
  enrich->add_option("--cap", enrichCap, "N, X% of m, m/10, or none")->capture_default_str();
  enrich->add_option("--seed", enrichSeed)->capture_default_str();
  enrich->add_option("--pair-budget", enrichPairs, "Level-2 pair inspections")->capture_default_str();
  enrich->add_option("--seconds", enrichSeconds, "cdcl mode: miner wall budget")->capture_default_str();
  enrich->add_option("--conflicts", enrichConflicts, "cdcl mode: conflict budget");
  enrich->add_option("-o,--output", enrichOut);
  enrich->callback([&] {
    const Formula f = read_formula(enrichInput);
    const std::size_t width = enrichWidth.value_or(f.max_width_or_zero() + 1);
    const auto cap = parse_cap(enrichCap, f.num_clauses());
    std::vector<Clause> pool;
    if (enrichMode == "level1") {
      pool = level1_resolvents(f, width).clauses;
    } else if (enrichMode == "level2") {
      const auto p = level2_resolvents(f, width, enrichPairs);
      if (p.truncated)
        std::cerr << "warning: level-2 enumeration stopped after " << p.pairsInspected << " pairs\n";
      pool = p.clauses;
    } else if (enrichMode == "ternary") {
      pool = ternary_saturate(f);
    } else {
      MiningBudget budget;
      budget.wallSeconds = enrichSeconds;
      budget.conflictLimit = enrichConflicts;
      budget.widthLimit = width;
      const auto out = cdcl_solve_and_mine(f, budget, enrichSeed);
      pool = filter_learned(out.learned, width, std::nullopt, FilterMode::chronological, enrichSeed);
    }
    const auto added = cap ? sample_pool(pool, *cap, enrichSeed) : pool;
    const Formula g = augment(f, added);
    const std::vector<std::string> comments = {"added " + std::to_string(g.num_clauses() - f.num_clauses())};
    write_output(enrichOut, emit_dimacs(g, comments));
  });

  // backbone -----------------------------------------------------------------
  auto* backbone = app.add_subcommand("backbone", "Compute the backbone by iterated CDCL calls");
  std::string bbInput, bbOut;
  BackboneOptions bbOptions;
  backbone->add_option("input", bbInput)->required();
  backbone->add_option("--conflicts", bbOptions.conflictsPerCall, "Per-call conflict budget")->capture_default_str();
  backbone->add_option("--seconds", bbOptions.secondsPerCall, "Per-call wall budget")->capture_default_str();
  backbone->add_option("--seed", bbOptions.seed)->capture_default_str();
  backbone->add_option("-o,--output", bbOut);
  backbone->callback([&] {
    const Formula f = read_formula(bbInput);
    const Backbone bb = compute_backbone(f, bbOptions);
    std::vector<Clause> units;
    for (Lit l : bb.literals)
      units.push_back({l});
    write_output(bbOut, clause_list(units, {"backbone size " + std::to_string(bb.literals.size()) + " complete " +
                                            (bb.complete ? "yes" : "no") + " calls " +
                                            std::to_string(bb.solverCalls)}));
    if (!bb.complete) {
      std::cerr << "error: a solver call ran out of budget; the backbone is incomplete\n";
      exitCode = 1;
    }
  });

  // inject -------------------------------------------------------------------
  auto* inject = app.add_subcommand("inject", "Add deceptive or general-model clauses");
  std::string injInput, injOut, injModel = "general", injSolution, injBackbone;
  std::size_t injCount = 0;
  std::uint64_t injSeed = 0;
  inject->add_option("input", injInput)->required();
  inject->add_option("--model", injModel)->check(CLI::IsMember({"deceptive", "general"}))->capture_default_str();
  inject->add_option("-t,--count", injCount, "Number of clauses")->required();
  inject->add_option("--seed", injSeed)->capture_default_str();
  inject->add_option("--solution", injSolution, "Solution file (general model; default: first CDCL model)");
  inject->add_option("--backbone", injBackbone, "Backbone file as written by 'backbone' (default: compute)");
  inject->add_option("-o,--output", injOut);
  inject->callback([&] {
    const Formula f = read_formula(injInput);
    Backbone bb;
    if (!injBackbone.empty()) {
      for (const auto& c : read_clauses(injBackbone)) {
        if (c.size() != 1)
          throw std::runtime_error("backbone file must contain unit clauses");
        bb.literals.push_back(c[0]);
      }
      std::sort(bb.literals.begin(), bb.literals.end());
    } else {
      bb = compute_backbone(f, {2'000'000, 120.0, injSeed});
      if (!bb.complete)
        throw std::runtime_error("backbone computation ran out of budget");
    }
    std::vector<Clause> extra;
    if (injModel == "deceptive") {
      extra = gen_deceptive(bb, injCount, injSeed);
    } else {
      std::optional<Assignment> solution;
      if (!injSolution.empty()) {
        solution = read_model(injSolution, f.num_vars());
      } else {
        MiningBudget budget;
        budget.conflictLimit = 10'000'000;
        solution = cdcl_solve_and_mine(f, budget, injSeed).model;
        if (!solution)
          throw std::runtime_error("no model found for the general model");
      }
      extra = gen_general(*solution, bb, injCount, injSeed);
    }
    const Formula g = augment(f, extra);
    write_output(injOut, emit_dimacs(g, {{"added " + std::to_string(g.num_clauses() - f.num_clauses()) + " " +
                                          injModel + " clauses"}}));
  });

  // quality ------------------------------------------------------------------
  auto* quality = app.add_subcommand("quality", "Per-clause correct-literal report against a solution");
  std::string qClauses, qSolution, qOut;
  quality->add_option("clauses", qClauses, "Clause list or DIMACS file")->required();
  quality->add_option("solution", qSolution, "Solution file (v ... 0)")->required();
  quality->add_option("-o,--output", qOut);
  quality->callback([&] {
    const auto clauses = read_clauses(qClauses);
    Var n = 0;
    for (const auto& c : clauses)
      for (Lit l : c)
        n = std::max(n, l.var());
    const Assignment solution = read_model(qSolution, 0);
    if (solution.num_vars() < n)
      throw std::invalid_argument("solution does not cover variable " + std::to_string(n));
    const auto report = quality_report(clauses, solution);
    std::ostringstream out;
    out << "clauseId,width,correct,quality\n";
    for (const auto& row : report.perClause)
      out << row.clauseId << ',' << row.width << ',' << row.correct << ',' << row.quality << '\n';
    write_output(qOut, out.str());
    std::cerr << "mean quality " << report.meanQuality << ", mean correct literals " << report.meanCorrectLiterals
              << " over " << clauses.size() << " clauses\n";
  });

  // solve --------------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "GapSAT: SLS, CDCL clause mining, SLS on the augmented formula");
  std::string solveInput;
  double solveBudget = 5000;
  std::uint64_t solveSeed = 0;
  GapsatConfig solveConfig;
  ScoringOptions solveScoring;
  solve->add_option("input", solveInput)->required();
  solve->add_option("--budget", solveBudget, "Wall-clock budget in seconds")->capture_default_str();
  solve->add_option("--seed", solveSeed)->capture_default_str();
  solve->add_option("--miner-seconds", solveConfig.minerSeconds)->capture_default_str();
  solve->add_option("--miner-conflicts", solveConfig.minerConflicts, "Conflict budget for the miner");
  solve->add_option("--initial-flips", solveConfig.initialFlips, "Override the first SLS phase flips");
  solve->add_option("--final-flips", solveConfig.finalMaxFlips, "Flip limit for the last SLS phase");
  solve->add_option("--width-limit", solveConfig.widthLimit, "Override the learned-clause width limit");
  solve->add_option("--cap-percent", solveConfig.countCapPercent, "Override the cap (percent of m)");
  solveScoring.add_to(solve);
  solve->callback([&] {
    const Formula f = read_formula(solveInput);
    solveConfig.scoring = solveScoring.resolve();
    const SolveResult r = run_gapsat(f, solveBudget, solveSeed, solveConfig);
    std::cout << "s " << r.status_name() << '\n';
    if (r.model)
      std::cout << format_model(*r.model) << '\n';
    std::cout << r.accounting_line() << '\n';
    exitCode = r.status == SolveResult::Status::sat ? 10 : r.status == SolveResult::Status::unsat ? 20 : 0;
  });

  // bench --------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "Run solvers on instances and write PAR2 summaries");
  std::vector<std::string> benchInstances, benchSolvers;
  std::string benchExt = ".cnf", benchOut = ".", benchCurrency = "flips";
  std::size_t benchRuns = 10, benchWorkers = 1;
  std::uint64_t benchSeed = 0;
  std::optional<double> benchTimeout;
  bool benchWelch = false;
  bench->add_option("-i,--instances", benchInstances, "Instance files or directories")->required();
  bench->add_option("--ext", benchExt, "Instance file extension inside directories")->capture_default_str();
  bench->add_option("-s,--solvers", benchSolvers, "Solver configuration JSON files")->required();
  bench->add_option("--runs", benchRuns, "Runs per instance and solver")->capture_default_str();
  bench->add_option("--seed", benchSeed, "Base seed; run r uses seed + r")->capture_default_str();
  bench->add_option("--currency", benchCurrency)->check(CLI::IsMember({"flips", "seconds"}))->capture_default_str();
  bench->add_option("--timeout", benchTimeout, "Timeout (default: flip timeout for the instance width)");
  bench->add_option("--workers", benchWorkers)->capture_default_str();
  bench->add_flag("--welch", benchWelch, "Unpaired Welch t-test instead of paired");
  bench->add_option("-o,--out-dir", benchOut)->capture_default_str();
  bench->callback([&] {
    const auto instances = read_instances(benchInstances, benchExt);
    if (instances.empty())
      throw std::runtime_error("no instances found");
    const auto solvers = read_solver_configs(benchSolvers);
    BenchBudget budget;
    budget.currency = benchCurrency == "flips" ? Currency::flips : Currency::seconds;
    if (benchTimeout)
      budget.timeout = *benchTimeout;
    else if (budget.currency == Currency::flips)
      budget.timeout = static_cast<double>(default_flip_timeout(instances.front().formula->max_width_or_zero()));
    else
      budget.timeout = 5000;
    auto report = run_suite(instances, solvers, benchRuns, budget, benchSeed, benchWorkers);
    if (benchWelch)
      report.summary = summarize(report.records, budget, true);
    fs::create_directories(benchOut);
    auto write = [&](const std::string& name, auto&& fn) {
      std::ofstream out(fs::path(benchOut) / name);
      if (!out)
        throw std::runtime_error("cannot write " + name);
      fn(out);
    };
    write("trials.csv", [&](std::ostream& o) { write_trials_csv(o, report.records); });
    write("summary.csv", [&](std::ostream& o) { write_summary_csv(o, report.summary); });
    write("pairwise.csv", [&](std::ostream& o) { write_pairwise_csv(o, report.summary); });
    for (const auto& s : solvers)
      write("cactus_" + s.id + ".csv", [&](std::ostream& o) { write_cactus_csv(o, report.records, s.id, budget.currency); });
    for (const auto& s : report.summary.solvers)
      std::cout << s.solverId << ": solved " << s.solvedCount << "/" << s.trials << ", score " << s.score << '\n';
    for (const auto& note : report.records)
      if (!note.note.empty())
        std::cerr << "note: " << note.instanceId << " " << note.solverId << " seed " << note.seed << ": "
                  << note.note << '\n';
  });

  // stats --------------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "Paired tests on two CSV columns");
  std::string statsFile, statsA, statsB;
  bool statsWelch = false;
  stats->add_option("csv", statsFile)->required();
  stats->add_option("column_a", statsA)->required();
  stats->add_option("column_b", statsB)->required();
  stats->add_flag("--welch", statsWelch, "Unpaired Welch t-test instead of paired");
  stats->callback([&] {
    const auto a = read_csv_column(statsFile, statsA);
    const auto b = read_csv_column(statsFile, statsB);
    std::cout.precision(10);
    std::cout << "n " << a.size() << '\n';
    std::cout << "mean_a " << mean(a) << "\nmean_b " << mean(b) << '\n';
    auto attempt = [](const char* what, auto&& fn) {
      try {
        fn();
      } catch (const std::exception& e) {
        std::cout << what << " n/a (" << e.what() << ")\n";
      }
    };
    attempt("t", [&] {
      const auto t = statsWelch ? welch_t_test(a, b) : paired_t_test(a, b);
      std::cout << (statsWelch ? "welch_t " : "paired_t ") << t.t << "\np " << t.p << "\ndf " << t.df << '\n';
    });
    attempt("wilcoxon", [&] {
      const auto w = wilcoxon_signed_rank(a, b);
      std::cout << "wilcoxon_w_plus " << w.wPlus << "\nwilcoxon_p " << w.p << (w.exact ? " (exact)" : " (normal)")
                << '\n';
    });
    attempt("cohens_d", [&] { std::cout << "cohens_d " << cohens_d(a, b) << '\n'; });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exitCode;
}
