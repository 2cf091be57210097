#include "ehsoc/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "ehsoc/errors.hpp"

namespace ehsoc {

namespace {

EvalResult evaluate_greedy(const ExperimentConfig& config, const EhMdp& real, int e_max) {
  if (real.grid().index_of(1.0) >= 0) return evaluate(real, greedy_policy(real));
  // The experiment grid lacks iota = 1; GP lives on its own {0, 1} grid.
  SystemModel model = make_system(config, e_max, 2);
  const EhMdp greedy_mdp = build_mdp(model);
  return evaluate(greedy_mdp, greedy_policy(greedy_mdp));
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::ofstream out(dir / name);
  if (!out) throw ConfigError("cannot write output file '" + (dir / name).string() + "'");
  return out;
}

void write_summary_csv(const Comparison& c, std::ostream& out) {
  out << "policy,gain,ratio_to_op\n" << std::setprecision(9);
  const double op = c.eval_op.g_mu;
  auto line = [&](const char* name, double g) { out << name << ',' << g << ',' << (op > 0 ? g / op : 0.0) << '\n'; };
  line("op", op);
  line("op_ideal_real", c.eval_op_ideal_real.g_mu);
  line("op_ideal_ideal", c.eval_op_ideal_ideal.g_mu);
  line("gp", c.eval_gp.g_mu);
}

void write_simulation_csv(const std::vector<std::pair<std::string, SimTrace>>& runs,
                          const std::vector<const EvalResult*>& analytic, std::ostream& out) {
  out << "policy,replica,slots,seed,empirical_reward,std_error,analytic_g,occupancy_tv\n"
      << std::setprecision(9);
  int replica = 0;
  std::string last;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& [name, trace] = runs[i];
    replica = name == last ? replica + 1 : 0;
    last = name;
    out << name << ',' << replica << ',' << trace.slots << ',' << trace.rng_seed << ','
        << trace.empirical_reward << ',' << trace.std_error << ',' << analytic[i]->g_mu << ','
        << total_variation(trace.occupancy, analytic[i]->pi) << '\n';
  }
}

}  // namespace

Comparison compare_policies(const ExperimentConfig& config, int e_max, int iota_steps) {
  const SystemModel model = make_system(config, e_max, iota_steps);
  const EhMdp real = build_mdp(model);
  const EhMdp ideal = build_ideal_mdp(model);
  const SolverOptions options = config.solver_options();

  SolveResult op = solve_rvi(real, options);
  Policy op_ideal = op_ideal_policy(real, ideal, options);
  EvalResult eval_op = evaluate(real, op.policy);
  EvalResult eval_real = evaluate(real, op_ideal);
  EvalResult eval_ideal = evaluate(ideal, op_ideal);
  EvalResult eval_gp = evaluate_greedy(config, real, e_max);
  return Comparison{e_max,         iota_steps,           std::move(op),         std::move(op_ideal),
                    std::move(eval_op), std::move(eval_real), std::move(eval_ideal), std::move(eval_gp)};
}

std::vector<SweepPoint> sweep_capacity(const ExperimentConfig& config, int workers) {
  struct Task {
    int e_max;
    int steps;
    const char* variant;
  };
  std::vector<Task> tasks;
  for (int e_max : config.sweep_emax) tasks.push_back({e_max, 1, "iota0"});
  if (config.sweep_full_iota)
    for (int e_max : config.sweep_emax) tasks.push_back({e_max, config.iota_steps_full, "full"});

  std::vector<SweepPoint> points(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Comparison c = compare_policies(config, tasks[i].e_max, tasks[i].steps);
        points[i] = SweepPoint{tasks[i].e_max, tasks[i].variant, c.eval_op.g_mu,
                               c.eval_op_ideal_real.g_mu, c.eval_op_ideal_ideal.g_mu};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return points;
}

void write_policy_surface(const Policy& policy, std::ostream& out) { write_policy_csv(policy, out); }

void write_steady_state(const Comparison& c, std::ostream& out) {
  out << "e,pi_op,pi_opideal_real,pi_opideal_ideal\n" << std::setprecision(9);
  for (int e = 0; e <= c.e_max; ++e)
    out << e << ',' << c.eval_op.pi[e] << ',' << c.eval_op_ideal_real.pi[e] << ','
        << c.eval_op_ideal_ideal.pi[e] << '\n';
}

void write_throughput_sweep(const std::vector<SweepPoint>& points, std::ostream& out) {
  out << "e_max,g_op,g_opideal_real,g_opideal_ideal,variant\n" << std::setprecision(9);
  for (const auto& p : points)
    out << p.e_max << ',' << p.g_op << ',' << p.g_op_ideal_real << ',' << p.g_op_ideal_ideal << ','
        << p.variant << '\n';
}

void write_splitting_surface(const Policy& policy, std::ostream& out) {
  out << "e,h,iota\n";
  char iota[32];
  for (int e = 0; e <= policy.e_max(); ++e)
    for (int h = 0; h <= policy.h_max(); ++h) {
      std::snprintf(iota, sizeof iota, "%.6f", policy.iota(e, h));
      out << e << ',' << h << ',' << iota << '\n';
    }
}

void print_summary(const Comparison& c, std::ostream& out) {
  const double op = c.eval_op.g_mu;
  out << "e_max=" << c.e_max << " iota levels=" << c.iota_steps << " (RVI sweeps " << c.op.iterations
      << ", span " << std::setprecision(3) << c.op.span << ")\n";
  out << std::left << std::setw(18) << "policy" << std::setw(14) << "gain" << "ratio to OP\n";
  auto row = [&](const char* name, double g) {
    out << std::left << std::setw(18) << name << std::setw(14) << std::setprecision(6) << std::fixed << g
        << std::setprecision(4) << (op > 0 ? g / op : 0.0) << '\n'
        << std::defaultfloat;
  };
  row("OP", op);
  row("OP-IDEAL (real)", c.eval_op_ideal_real.g_mu);
  row("OP-IDEAL (ideal)", c.eval_op_ideal_ideal.g_mu);
  row("GP", c.eval_gp.g_mu);
  for (const EvalResult* r : {&c.eval_op, &c.eval_op_ideal_real})
    if (!r->warning.empty()) out << "warning: " << r->warning << '\n';
}

void run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + options.out_dir.string() + "': " + ec.message());
  const auto& dir = options.out_dir;

  switch (config.experiment) {
    case Experiment::solve: {
      const Comparison c = compare_policies(config, config.e_max, config.iota_steps);
      auto op = open_output(dir, "policy_op.csv");
      write_policy_csv(c.op.policy, op);
      auto opi = open_output(dir, "policy_op_ideal.csv");
      write_policy_csv(c.op_ideal, opi);
      auto summary = open_output(dir, "summary.csv");
      write_summary_csv(c, summary);
      if (options.log) print_summary(c, *options.log);
      break;
    }
    case Experiment::evaluate: {
      const Comparison c = compare_policies(config, config.e_max, config.iota_steps);
      const std::pair<const char*, const EvalResult*> files[] = {
          {"eval_op.csv", &c.eval_op},
          {"eval_op_ideal_real.csv", &c.eval_op_ideal_real},
          {"eval_op_ideal_ideal.csv", &c.eval_op_ideal_ideal},
          {"eval_gp.csv", &c.eval_gp},
      };
      for (const auto& [name, result] : files) {
        auto out = open_output(dir, name);
        write_eval_csv(*result, out);
      }
      auto low = open_output(dir, "eval_op_ideal_real_from_empty.csv");
      EvalResult from_empty;
      from_empty.pi = c.eval_op_ideal_real.pi_from_empty;
      from_empty.j = c.eval_op_ideal_real.j;
      from_empty.g_mu = c.eval_op_ideal_real.g_mu_from_empty;
      write_eval_csv(from_empty, low);
      auto summary = open_output(dir, "summary.csv");
      write_summary_csv(c, summary);
      if (options.log) print_summary(c, *options.log);
      break;
    }
    case Experiment::sweep_emax: {
      const auto points = sweep_capacity(config, options.workers);
      auto out = open_output(dir, "throughput_sweep.csv");
      write_throughput_sweep(points, out);
      if (options.log) write_throughput_sweep(points, *options.log);
      break;
    }
    case Experiment::simulate: {
      const Comparison c = compare_policies(config, config.e_max, config.iota_steps);
      const SystemModel model = make_system(config, config.e_max, config.iota_steps);
      const EhMdp real = build_mdp(model);
      std::vector<std::pair<std::string, SimTrace>> runs;
      std::vector<const EvalResult*> analytic;
      const std::pair<const char*, std::pair<const Policy*, const EvalResult*>> policies[] = {
          {"op", {&c.op.policy, &c.eval_op}},
          {"op_ideal_real", {&c.op_ideal, &c.eval_op_ideal_real}},
      };
      for (const auto& [name, pe] : policies) {
        if (config.sim_replicas == 1) {
          SimOptions sim;
          std::ofstream trace_file;
          if (config.trace_every > 0) {
            trace_file = open_output(dir, std::string("trace_") + name + ".csv");
            sim.trace = &trace_file;
            sim.trace_every = config.trace_every;
          }
          runs.emplace_back(name, simulate(real, *pe.first, config.sim_slots, config.seed, sim));
          analytic.push_back(pe.second);
        } else {
          for (auto& t : simulate_replicas(real, *pe.first, config.sim_slots, config.seed,
                                           config.sim_replicas, options.workers)) {
            runs.emplace_back(name, std::move(t));
            analytic.push_back(pe.second);
          }
        }
      }
      // GP needs iota = 1 on the grid.
      const SystemModel gp_model = make_system(config, config.e_max, std::max(2, config.iota_steps));
      const EhMdp gp_mdp = build_mdp(gp_model);
      const Policy gp = greedy_policy(gp_mdp);
      runs.emplace_back("gp", simulate(gp_mdp, gp, config.sim_slots, config.seed));
      analytic.push_back(&c.eval_gp);

      auto out = open_output(dir, "simulation.csv");
      write_simulation_csv(runs, analytic, out);
      if (options.log) write_simulation_csv(runs, analytic, *options.log);
      break;
    }
    case Experiment::figures_data: {
      const Comparison base = compare_policies(config, config.e_max, config.iota_steps);
      auto surface = open_output(dir, "policy_surface.csv");
      write_policy_surface(base.op.policy, surface);
      auto steady = open_output(dir, "steady_state.csv");
      write_steady_state(base, steady);
      const auto points = sweep_capacity(config, options.workers);
      auto sweep = open_output(dir, "throughput_sweep.csv");
      write_throughput_sweep(points, sweep);
      const Comparison full = compare_policies(config, config.e_max, config.iota_steps_full);
      auto split = open_output(dir, "splitting_surface.csv");
      write_splitting_surface(full.op.policy, split);
      if (options.log) print_summary(base, *options.log);
      break;
    }
  }
}

}  // namespace ehsoc
