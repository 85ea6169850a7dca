// aprelax: single runs, eps sweeps and self-checks for the relaxation schemes.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <variant>

#include "aprelax/aprelax.hpp"

namespace fs = std::filesystem;
using namespace aprelax;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Settings-file key for each flag; flags are applied in this order after the config file.
const std::vector<std::pair<std::string, std::string>> kFlagKeys = {
    {"model", "model"},       {"ic", "ic"},         {"n", "n"},
    {"eps", "eps"},           {"sigma", "sigma"},   {"gamma", "gamma"},
    {"mu", "mu"},             {"tau-star", "tau_star"}, {"t-final", "t_final"},
    {"cfl", "cfl"},           {"boundary", "boundary"}, {"diffusion-number", "diffusion_number"},
    {"phi-floor", "phi_floor"}, {"out", "out"},     {"seed", "seed"},
    {"cases", "cases"}};

// Messages from the library start with "<key>: "; name the flag instead.
std::string name_flag(const std::string& message) {
  const auto colon = message.find(':');
  if (colon == std::string::npos) return message;
  const auto key = message.substr(0, colon);
  for (const auto& [flag, k] : kFlagKeys)
    if (k == key) return "--" + flag + message.substr(colon);
  return message;
}

struct Options {
  std::map<std::string, std::string> values;
  std::string config_path;
  bool dump_config = false;
  bool flip_psi = false;
};

void add_common(CLI::App* cmd, Options& o) {
  for (const auto& [flag, key] : kFlagKeys)
    cmd->add_option("--" + flag, o.values[flag], "override '" + key + "'")->allow_extra_args(false);
  cmd->add_option("--config", o.config_path, "flat key = value file, applied before flags");
  cmd->add_flag("--dump-config", o.dump_config, "print the resolved settings and exit");
}

Settings resolve(CLI::App* cmd, const Options& o, Settings s) {
  if (!o.config_path.empty()) {
    try {
      apply_config_file(s, o.config_path);
    } catch (const std::exception& e) {
      throw usage_error(std::string("--config: ") + e.what());
    }
  }
  for (const auto& [flag, key] : kFlagKeys) {
    if (cmd->count("--" + flag) == 0) continue;
    try {
      apply_setting(s, key, o.values.at(flag));
    } catch (const std::exception& e) {
      throw usage_error(name_flag(e.what()));
    }
  }
  try {
    s.study.validate();
  } catch (const std::exception& e) {
    throw usage_error(name_flag(e.what()));
  }
  return s;
}

std::string eps_label(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

unsigned sweep_threads() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("APRELAX_THREADS"); env && *env) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (*end != '\0' || cap < 1)
      throw usage_error(std::string("APRELAX_THREADS: expected a positive integer, got '") + env + "'");
    threads = std::min(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

int cmd_run(const Settings& s) {
  const auto& c = s.study;
  if (c.models.size() != 1 || c.ics.size() != 1 || c.n_list.size() != 1 || c.eps_list.size() != 1)
    throw usage_error("run: --model, --ic, --n and --eps each take a single value");
  const auto model = make_model(c.models.front(), c.model_params());
  const auto ic = c.ics.front();
  const auto n = c.n_list.front();
  const double eps = c.eps_list.front();
  const auto grid = c.grid(n);

  StudyRow row;
  row.model = to_string(c.models.front());
  row.ic = std::string(to_string(ic));
  row.n = n;
  row.eps = eps;
  row.sigma = c.sigma;
  row.gamma = c.gamma;
  row.mu = c.mu;
  row.t_final = c.t_final;
  row.cfl = c.cfl;
  std::string fields;
  try {
    std::visit(
        [&](const auto& m) {
          const auto pair = run_pair(m, InitialData{ic}, grid, c.scheme(eps));
          row.phi0 = pair.phi0;
          row.phiT = pair.phiT;
          row.steps = pair.steps;
          row.lambda_initial = pair.lambda_initial;
          row.lambda_max = pair.lambda_max;
          fields = fields_csv(m, grid, pair);
        },
        model);
  } catch (const solver_abort& e) {
    std::cerr << "aprelax: solver aborted: " << e.what() << '\n';
    return exit_failure;
  }
  row.ok = true;

  const std::string table = std::string(csv_header) + '\n' + csv_row(row) + '\n';
  if (!s.out.empty()) {
    const fs::path dir = fs::path(s.out) / row.model / row.ic /
                         ("N" + std::to_string(n) + "_eps" + eps_label(eps));
    write_file(dir / "fields.csv", fields);
    write_file(dir / "run.csv", table);
    std::cerr << "aprelax: wrote " << (dir / "fields.csv").string() << '\n';
  }
  std::cout << table;
  return exit_ok;
}

int cmd_sweep(const Settings& s) {
  const auto threads = sweep_threads();
  std::cerr << "aprelax: sweep on " << threads << " thread(s)\n";
  const auto result = run_sweep(s.study, threads);

  int status = exit_ok;
  for (const auto& row : result.rows)
    if (!row.ok) {
      std::cerr << "aprelax: row failed (" << row.rate_group() << ", eps=" << row.eps
                << "): " << row.error << '\n';
      status = exit_failure;
    }

  const fs::path dir(s.out.empty() ? "." : s.out);
  emit_csv(result, dir / "sweep.csv");
  write_file(dir / "rates.csv", rates_csv(result.fits));
  try {
    emit_plot(result, dir / "sweep.svg");
  } catch (const std::invalid_argument& e) {
    std::cerr << "aprelax: no plot: " << e.what() << '\n';
  }
  std::cerr << "aprelax: wrote " << (dir / "sweep.csv").string() << '\n';

  std::printf("%-28s %8s %6s %10s\n", "group", "slope", "used", "excluded");
  for (const auto& f : result.fits) {
    if (f.fit) {
      std::printf("%-28s %8.4f %6zu %10zu\n", f.group.c_str(), f.fit->slope, f.fit->used,
                  f.fit->excluded_eps.size());
    } else {
      std::printf("%-28s %8s %6s %10s\n", f.group.c_str(), "n/a", "-", "-");
      std::cerr << "aprelax: no fit for " << f.group << ": " << f.error << '\n';
    }
  }
  std::printf("rows: %zu ok, %zu failed\n", result.rows.size() - result.failures(),
              result.failures());
  return status;
}

int cmd_check(const Settings& s, bool flip_psi) {
  BalanceOptions options;
  if (flip_psi) options.psi_sign = -1.0;
  const auto psystem = std::get<PSystem>(make_model(ModelName::PSystem, s.study.model_params()));
  const std::vector<CheckOutcome> outcomes = {
      check_entropy_balance(s.seed, s.cases, psystem,
                            options),
      check_sandwich(s.seed, s.cases,
                     ConstitutiveLaw::psystem(s.study.gamma, s.study.tau_star)),
      check_ru_bound(s.seed, s.cases),
      check_splitting_limit(s.seed, s.cases,
                            psystem),
  };
  std::printf("%-28s %8s %12s %12s %s\n", "property", "cases", "worst", "tolerance", "status");
  int status = exit_ok;
  for (const auto& o : outcomes) {
    std::printf("%-28s %8zu %12.4e %12.4e %s\n", o.name.c_str(), o.cases, o.worst, o.tolerance,
                o.passed() ? "ok" : "FAIL");
    if (!o.passed() && status == exit_ok) {
      std::cerr << "aprelax: FAIL " << o.name << ": " << o.first_failure << " [--seed " << s.seed
                << " --cases " << s.cases << "]\n";
      status = exit_failure;
    }
  }
  return status;
}

Settings run_defaults() {
  Settings s;
  s.study.models = {ModelName::PSystem};
  s.study.ics = {InitialKind::Smooth};
  s.study.n_list = {400};
  s.study.eps_list = {1e-2};
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic-preserving relaxation schemes: runs, eps sweeps and self-checks"};
  app.require_subcommand(1);
  Options run_opts, sweep_opts, check_opts;
  auto* run = app.add_subcommand("run", "one split/limit pair; writes fields and the phi row");
  auto* sweep = app.add_subcommand("sweep", "full model x ic x N x eps cross product");
  auto* check = app.add_subcommand("check", "randomized identity and inequality suites");
  add_common(run, run_opts);
  add_common(sweep, sweep_opts);
  add_common(check, check_opts);
  // mutation hook for testing the checker itself
  check->add_flag("--flip-psi-sign", check_opts.flip_psi)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    CLI::App* cmd = run->parsed() ? run : (sweep->parsed() ? sweep : check);
    const Options& o = run->parsed() ? run_opts : (sweep->parsed() ? sweep_opts : check_opts);
    const Settings settings = resolve(cmd, o, run->parsed() ? run_defaults() : Settings{});
    if (o.dump_config) {
      std::cout << dump_config(settings);
      return exit_ok;
    }
    if (cmd == run) return cmd_run(settings);
    if (cmd == sweep) return cmd_sweep(settings);
    return cmd_check(settings, o.flip_psi);
  } catch (const usage_error& e) {
    std::cerr << "aprelax: invalid argument: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "aprelax: error: " << e.what() << '\n';
    return exit_failure;
  }
}
