// Command-line front end: solve an instance, compare a method against the
// brute-force oracle, or generate random instances.
//
// Exit codes: 0 success, 1 usage error, 2 infeasible instance,
// 3 enumeration budget exceeded.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "tariffsched/tariffsched.hpp"

namespace ts = tariffsched;

namespace {

struct SolveArgs {
  std::string objective;
  std::string method;
  std::string input;
  std::string epsilon;
  std::string sequence;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<int> parse_sequence(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

// Dispatches to the solver selected by (objective, method); throws
// std::invalid_argument on unsupported combinations.
ts::Schedule run_method(const ts::Instance& inst, const SolveArgs& a) {
  if (a.objective == "sumcj" && a.method == "exact") return ts::solve_unweighted(inst);
  if (a.objective == "wsumcj" && a.method == "seq-dp") {
    if (a.sequence.empty())
      throw std::invalid_argument("--sequence is required for --method seq-dp");
    return ts::optimal_reservation(inst, parse_sequence(a.sequence));
  }
  if (a.objective == "wsumcj" && a.method == "ptas") {
    if (a.epsilon.empty()) throw std::invalid_argument("--epsilon is required for --method ptas");
    return ts::ptas_run(inst, ts::rat_from_string(a.epsilon));
  }
  if (a.objective == "makespan" && a.method == "exact") return ts::makespan_solve(inst);
  throw std::invalid_argument("unsupported objective/method combination: " + a.objective + "/" +
                              a.method);
}

ts::OracleResult run_oracle(const ts::Instance& inst, const SolveArgs& a,
                            const ts::EnumerationBudget& budget) {
  if (a.objective == "sumcj") return ts::opt_unweighted(inst, budget);
  if (a.objective == "wsumcj" && a.method == "seq-dp")
    return ts::opt_fixed_sequence(inst, parse_sequence(a.sequence), budget);
  if (a.objective == "wsumcj") return ts::opt_weighted(inst, budget);
  if (a.objective == "makespan") return ts::opt_makespan(inst, budget);
  throw std::invalid_argument("no oracle for objective " + a.objective);
}

ts::EnumerationBudget budget_from_env_or_flag(std::optional<std::uint64_t> flag) {
  ts::EnumerationBudget b;
  if (!flag) {
    if (const char* env = std::getenv("TARIFFSCHED_BUDGET")) {
      flag = std::strtoull(env, nullptr, 10);
      if (*flag == 0) flag.reset();
    }
  }
  if (flag) {
    b.max_profiles = *flag;
    b.max_permutations = *flag;
  }
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preemptive scheduling under piecewise-constant time-of-use tariffs"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto add_solve_flags = [&sa](CLI::App* cmd) {
    cmd->add_option("--objective", sa.objective, "sumcj | wsumcj | makespan")->required();
    cmd->add_option("--method", sa.method, "exact | seq-dp | ptas")->required();
    cmd->add_option("--epsilon", sa.epsilon, "approximation parameter for ptas (rational)");
    cmd->add_option("--sequence", sa.sequence, "comma-separated job ids for seq-dp");
    cmd->add_option("--input", sa.input, "instance file, or - for stdin")->required();
  };

  auto* solve_cmd = app.add_subcommand("solve", "solve an instance and print the schedule");
  add_solve_flags(solve_cmd);

  auto* oracle_cmd =
      app.add_subcommand("oracle", "solve and compare against the brute-force optimum");
  add_solve_flags(oracle_cmd);
  std::uint64_t budget_flag = 0;
  auto* budget_opt = oracle_cmd->add_option("--budget", budget_flag, "enumeration budget");
  std::string report_path;
  oracle_cmd->add_option("--report", report_path, "append the report to a JSON-lines file");

  ts::GenParams gp;
  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen_cmd->add_option("--n", gp.n, "number of jobs");
  gen_cmd->add_option("--k", gp.k, "number of tariff intervals");
  gen_cmd->add_option("--dmax", gp.dmax, "horizon bound before feasibility padding");
  gen_cmd->add_option("--emax", gp.emax, "maximum interval cost");
  gen_cmd->add_option("--machines", gp.machines, "machine count");
  gen_cmd->add_option("--weighted", gp.weighted, "draw random weights instead of 1");
  gen_cmd->add_option("--seed", gp.seed, "random seed");
  gen_cmd->add_option("--pmax", gp.pmax, "maximum processing time");
  gen_cmd->add_option("--wmax", gp.wmax, "maximum weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen_cmd->parsed()) {
      const ts::Instance inst = ts::generate_instance(gp);
      std::cout << ts::write_instance(inst) << "\n";
      return 0;
    }

    const ts::Instance inst = ts::read_instance(read_input(sa.input));

    if (solve_cmd->parsed()) {
      const ts::Schedule sched = run_method(inst, sa);
      std::cout << ts::write_schedule(sched) << "\n";
      return 0;
    }

    // oracle subcommand
    const auto budget = budget_from_env_or_flag(
        budget_opt->count() > 0 ? std::optional<std::uint64_t>(budget_flag) : std::nullopt);
    const auto t0 = std::chrono::steady_clock::now();
    const ts::Schedule sched = run_method(inst, sa);
    const auto t1 = std::chrono::steady_clock::now();
    const ts::OracleResult oracle = run_oracle(inst, sa, budget);
    const double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    ts::OrderedJson report;
    report["instance_digest"] = ts::instance_digest(inst);
    std::string method = sa.objective + "/" + sa.method;
    if (!sa.epsilon.empty()) method += "@" + sa.epsilon;
    report["method"] = method;
    report["objective_value"] = ts::rat_to_string(sched.total_cost);
    report["oracle_value"] = ts::rat_to_string(oracle.total);
    if (oracle.total > 0)
      report["ratio"] = ts::rat_to_string(sched.total_cost / oracle.total);
    else if (sched.total_cost == 0)
      report["ratio"] = "1";
    report["wall_time_ms"] = wall_ms;
    const std::string line = report.dump();
    std::cout << line << "\n";
    if (!report_path.empty()) {
      std::ofstream out(report_path, std::ios::app);
      if (!out) throw std::runtime_error("cannot open report file: " + report_path);
      out << line << "\n";
    }
    return 0;
  } catch (const ts::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ts::BudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const ts::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
