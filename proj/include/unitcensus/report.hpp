#pragma once

// Command layer shared by the CLI binary and the test suites: run
// configuration, the exact-identity verification suite, and CSV/JSON report
// writers.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "unitcensus/asymptotics.hpp"
#include "unitcensus/counting.hpp"

namespace unitcensus {

struct RunConfig {
  std::string group_spec;
  std::vector<uint64_t> x_grid;
  uint64_t sieve_cap = kDefaultSieveCap;
  int threads = 0;  // 0 = hardware concurrency
  std::string format = "csv";
  std::string out_path;  // empty = stdout
  uint64_t Q = kDefaultTruncationQ;
  bool no_timestamp = false;

  // verify
  std::vector<uint64_t> palphas = {2, 3, 4, 5, 8, 9};
  uint32_t k_max = 3;
  uint32_t ell_max = 6;
  bool inject_fault = false;

  // constants
  uint32_t k_min = 1;

  // bench
  uint64_t bench_x = 10000000;

  SieveOptions sieve_options() const;
};

// Exit codes used by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFailed = 2;
inline constexpr int kExitResource = 3;

// "10,100" or geometric "1e4:1e8:2". Throws std::invalid_argument.
std::vector<uint64_t> parse_x_grid(const std::string& text);

struct IdentityRow {
  std::string name;
  std::string params;
  uint64_t lhs = 0;
  uint64_t rhs = 0;
  bool is_inequality = false;  // pass means lhs <= rhs
  bool pass() const { return is_inequality ? lhs <= rhs : lhs == rhs; }
};

// Every exact structural identity the counters satisfy, evaluated at each x:
// the ell-slice partition of S, the reduction of each slice to the ell = 0
// slice, the split of the ell = 0 slice into D_m counts, the odd-omega
// identity for powers of Z_2, inclusion-exclusion for coprime pairs, and the
// union/monotonicity bounds. `inject_fault` corrupts one row to exercise
// failure reporting.
std::vector<IdentityRow> exact_identity_suite(const std::vector<uint64_t>& xs,
                                              const std::vector<uint64_t>& palphas,
                                              uint32_t k_max, uint32_t ell_max,
                                              const SieveOptions& opt, bool inject_fault = false);

int run_count(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_constants(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace unitcensus
