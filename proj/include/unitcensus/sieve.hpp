#pragma once

// Segmented sieving: smallest-prime-factor tables, a streaming factorization
// of every n <= limit, and per-n unit-group profiles restricted to the primes
// a query cares about.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "unitcensus/abelian.hpp"

namespace unitcensus {

class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr uint64_t kDefaultSieveCap = uint64_t{1} << 31;

struct SieveOptions {
  uint32_t segment_len = uint32_t{1} << 20;
  int threads = 1;  // 0 = hardware concurrency
  uint64_t cap = kDefaultSieveCap;
};

// Largest possible number of distinct prime factors below the sieve cap.
inline constexpr int kMaxOmega = 9;

// Full factorization of one integer, factors ascending.
struct FactorView {
  uint64_t n = 0;
  int count = 0;
  struct PF {
    uint32_t q;
    uint8_t beta;
  } f[kMaxOmega];
};

// Streams the factorization of every n in [1, limit] in increasing order.
// Single-threaded; content is independent of segment_len.
void for_each_factored(uint64_t limit, const SieveOptions& opt,
                       const std::function<void(const FactorView&)>& sink);

// Counts, for each grid threshold x_j, the n <= x_j with pred(n) true.
// The grid must be nonempty and strictly increasing. Segments may be spread
// over worker threads; each worker evaluates its own predicate instance, so
// predicates may keep scratch state.
std::vector<uint64_t> count_over_grid(
    const std::vector<uint64_t>& grid,
    const std::function<std::function<bool(const FactorView&)>()>& make_pred,
    const SieveOptions& opt);

struct SpfSegment {
  uint64_t base = 0;
  std::vector<uint32_t> spf;  // spf[i] = least prime factor of base+i; 0 for base+i < 2
};

// Streams segments covering [0, limit]; deterministic content for any
// segment_len.
void build_spf(uint64_t limit, const SieveOptions& opt,
               const std::function<void(const SpfSegment&)>& sink);

// Materialized smallest-prime-factor table.
class SpfTable {
 public:
  explicit SpfTable(uint64_t limit, const SieveOptions& opt = {});

  uint64_t limit() const { return limit_; }
  uint32_t spf(uint64_t n) const;
  std::vector<PrimePower> factorize(uint64_t n) const;

 private:
  uint64_t limit_;
  std::vector<uint32_t> spf_;
};

// Unit-group data for one n, restricted to the query primes.
struct UnitGroupProfile {
  uint64_t n = 0;
  uint32_t p_valuation = 0;           // v_p(n) for the designated prime, if any
  std::vector<PPartition> partitions;  // one per query prime, in query order
};

// Caps applied to streamed partitions; domination tests never look past the
// largest part sizes / part counts a query needs.
struct PartitionTruncation {
  uint32_t max_part = UINT32_MAX;
  uint32_t max_parts = UINT32_MAX;
};

// Emits, in order for each n in [1, x], the ell-primary partition of Z_n^x
// for every query prime. The profile object is reused between calls.
void unit_group_stream(uint64_t x, const std::vector<uint64_t>& query_primes,
                       std::optional<uint64_t> p_for_valuation,
                       const std::function<void(const UnitGroupProfile&)>& sink,
                       const SieveOptions& opt = {},
                       const PartitionTruncation& trunc = {});

// The ell-primary partition of Z_n^x assembled from a factorization: each odd
// prime q contributes v_ell(q-1), q = ell itself contributes beta-1, and
// 2^beta contributes {1} or {1, beta-2} when ell = 2. Parts are returned
// unsorted; `out` is appended to.
void collect_ell_parts(const FactorView& fv, uint64_t ell, std::vector<uint32_t>& out);

}  // namespace unitcensus
