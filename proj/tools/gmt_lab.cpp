// gmt-lab: batch front end for the gmt library.
//
//   gmt-lab <density|pv|blowup|metric|dmo|generate> --config PATH [--out PATH] [--threads N] [--seed S]
//
// Exit codes: 0 success, 2 config or I/O error, 3 numerical guard (resolution
// guard, LP size cap), 1 anything else.

#include "commands.hpp"

#include "gmt/parallel.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace {

using Handler = void (*)(const gmt::cli::RunContext&, std::ostream&);

int run(const std::string& command, Handler handler, const std::string& config_path, const std::string& out_path,
        int threads, std::optional<std::uint64_t> seed) {
  gmt::cli::RunContext ctx;
  ctx.command = command;
  ctx.config = gmt::Config::load(config_path);
  if (seed) {
    ctx.seed = *seed;
  } else if (const auto* top = ctx.config.find(""); top && top->find("seed")) {
    ctx.seed = static_cast<std::uint64_t>(top->integer("seed"));
  }
  ctx.out_path = out_path;
  ctx.hash = gmt::cli::config_hash(command, ctx.config, ctx.seed);
  gmt::set_thread_count(threads);

  std::ostringstream buffer;
  handler(ctx, buffer);
  if (command == "generate" || out_path.empty()) {
    std::cout << buffer.str();
    return 0;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw gmt::IoError("cannot write '" + out_path + "'");
  file << buffer.str();
  if (!file) throw gmt::IoError("write failed for '" + out_path + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gmt-lab: rectifiability diagnostics on weighted point clouds"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  int threads = 1;
  std::optional<std::uint64_t> seed;

  const std::vector<std::pair<std::string, Handler>> commands = {
      {"density", gmt::cli::cmd_density}, {"pv", gmt::cli::cmd_pv},   {"blowup", gmt::cli::cmd_blowup},
      {"metric", gmt::cli::cmd_metric},   {"dmo", gmt::cli::cmd_dmo}, {"generate", gmt::cli::cmd_generate}};
  const std::map<std::string, std::string> help = {
      {"density", "Lambda-density scan along a ladder of radii"},
      {"pv", "truncated principal value convergence scan"},
      {"blowup", "flatness, symmetry and sandwich diagnostics of blowups"},
      {"metric", "F_r, F, scaling residual or flat-cone distance"},
      {"dmo", "mean oscillation moduli of a coefficient field"},
      {"generate", "write corpus measures and their manifest"}};
  for (const auto& [name, handler] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config_path, "run config (key = value with [sections])")->required();
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [name, handler] : commands) {
    if (!app.got_subcommand(name)) continue;
    try {
      return run(name, handler, config_path, out_path, threads, seed);
    } catch (const gmt::NumericalGuardError& e) {
      std::cerr << "gmt-lab: numerical guard: " << e.what() << '\n';
      return 3;
    } catch (const gmt::IoError& e) {
      std::cerr << "gmt-lab: " << e.what() << '\n';
      return 2;
    } catch (const gmt::SingularMatrixError& e) {
      std::cerr << "gmt-lab: invalid parameters: " << e.what() << '\n';
      return 2;
    } catch (const gmt::ContractError& e) {
      std::cerr << "gmt-lab: invalid parameters: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "gmt-lab: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
