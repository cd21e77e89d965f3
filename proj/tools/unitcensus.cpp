// unitcensus: exact census of integers whose unit group Z_n^x misses a fixed
// finite abelian group, with the matching asymptotic constants and main terms.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "unitcensus/report.hpp"

namespace {

using unitcensus::RunConfig;

void add_common_flags(CLI::App* cmd, RunConfig& cfg, std::string& x_text) {
  cmd->add_option("--x", x_text, "x grid: comma list (10,1e4) or geometric start:stop:factor");
  cmd->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  cmd->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", cfg.out_path, "write output to a file instead of stdout");
  cmd->add_option("--Q", cfg.Q, "prime truncation bound for the delta products");
  cmd->add_option("--sieve-cap", cfg.sieve_cap, "largest allowed sieve limit");
  cmd->add_flag("--no-timestamp", cfg.no_timestamp, "omit the timestamp from JSON meta");
  cmd->set_config("--config", "", "key=value config file (flags take precedence)");
}

std::vector<uint64_t> parse_palpha_list(const std::string& text) {
  std::vector<uint64_t> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoull(tok));
  }
  if (out.empty()) throw CLI::ValidationError("--palpha", "empty list");
  return out;
}

void parse_k_range(const std::string& text, uint32_t& k_min, uint32_t& k_max) {
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    k_min = 1;
    k_max = static_cast<uint32_t>(std::stoul(text));
  } else {
    k_min = static_cast<uint32_t>(std::stoul(text.substr(0, dots)));
    k_max = static_cast<uint32_t>(std::stoul(text.substr(dots + 2)));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"census of unit groups missing a fixed finite abelian subgroup"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string x_text;
  std::string palpha_text;
  std::string k_range_text;

  CLI::App* count = app.add_subcommand("count", "exact S(x;G) over an x grid");
  count->add_option("--group", cfg.group_spec, "group spec, e.g. Z4*Z2^2 or [4,2,2]")->required();
  add_common_flags(count, cfg, x_text);

  CLI::App* compare = app.add_subcommand("compare", "exact counts against the asymptotic main terms");
  compare->add_option("--group", cfg.group_spec, "group spec")->required();
  add_common_flags(compare, cfg, x_text);

  CLI::App* verify = app.add_subcommand("verify", "exact structural identity suite");
  add_common_flags(verify, cfg, x_text);
  verify->add_option("--palpha", palpha_text, "comma list of prime powers (default 2,3,4,5,8,9)");
  verify->add_option("--k", k_range_text, "max multiplicity or range, e.g. 3 or 1..3");
  verify->add_option("--ell", cfg.ell_max, "max power-of-p slice");
  verify->add_flag("--inject-fault", cfg.inject_fault, "flip one count to exercise FAIL reporting")
      ->group("");  // hidden; test harness only

  CLI::App* constants = app.add_subcommand("constants", "delta, K and Gamma constant tables");
  add_common_flags(constants, cfg, x_text);
  constants->add_option("--palpha", palpha_text, "comma list of prime powers")->required();
  constants->add_option("--k", k_range_text, "k range, e.g. 1..3");

  CLI::App* bench = app.add_subcommand("bench", "sieve throughput report");
  add_common_flags(bench, cfg, x_text);
  bench->add_option("--bench-x", cfg.bench_x, "sieve limit to time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return unitcensus::kExitUsage;
  }

  try {
    if (!x_text.empty()) cfg.x_grid = unitcensus::parse_x_grid(x_text);
    if (!palpha_text.empty()) cfg.palphas = parse_palpha_list(palpha_text);
    if (!k_range_text.empty()) parse_k_range(k_range_text, cfg.k_min, cfg.k_max);

    if (count->parsed()) {
      if (cfg.x_grid.empty()) cfg.x_grid = {1000000};
      return unitcensus::run_count(cfg, std::cout, std::cerr);
    }
    if (compare->parsed()) {
      if (cfg.x_grid.empty()) cfg.x_grid = unitcensus::parse_x_grid("1e4:1e7:2");
      return unitcensus::run_compare(cfg, std::cout, std::cerr);
    }
    if (verify->parsed()) {
      if (cfg.x_grid.empty()) cfg.x_grid = {100000};
      return unitcensus::run_verify(cfg, std::cout, std::cerr);
    }
    if (constants->parsed()) {
      return unitcensus::run_constants(cfg, std::cout, std::cerr);
    }
    if (bench->parsed()) {
      return unitcensus::run_bench(cfg, std::cout, std::cerr);
    }
  } catch (const unitcensus::resource_limit_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return unitcensus::kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return unitcensus::kExitUsage;
  }
  return unitcensus::kExitUsage;
}
