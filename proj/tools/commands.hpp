#pragma once

#include "gmt/config.hpp"

#include <cstdint>
#include <ostream>
#include <string>

namespace gmt::cli {

struct RunContext {
  std::string command;
  Config config;
  std::uint64_t seed = 1;
  std::string out_path;  // empty: stdout
  std::string hash;      // over command, config (minus threads/out) and seed
};

std::string config_hash(const std::string& command, const Config& config, std::uint64_t seed);

void cmd_density(const RunContext& ctx, std::ostream& out);
void cmd_pv(const RunContext& ctx, std::ostream& out);
void cmd_blowup(const RunContext& ctx, std::ostream& out);
void cmd_metric(const RunContext& ctx, std::ostream& out);
void cmd_dmo(const RunContext& ctx, std::ostream& out);
// Writes the measure CSV(s) and manifest next to ctx.out_path; `out` receives a summary.
void cmd_generate(const RunContext& ctx, std::ostream& out);

}  // namespace gmt::cli
