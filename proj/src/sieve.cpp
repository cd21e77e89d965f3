#include "unitcensus/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <thread>

#include "unitcensus/nt.hpp"

namespace unitcensus {

namespace {

constexpr uint32_t kBlockLen = uint32_t{1} << 16;

struct SievePrime {
  uint32_t p;
  uint32_t inv;  // p * inv == 1 (mod 2^32), p odd
  uint32_t lim;  // UINT32_MAX / p; m*inv <= lim  <=>  p | m
};

// Odd primes <= sqrt(limit) with Montgomery exact-division constants.
std::vector<SievePrime> sieve_primes(uint64_t limit) {
  auto root = static_cast<uint32_t>(std::sqrt(static_cast<double>(limit)));
  while (static_cast<uint64_t>(root + 1) * (root + 1) <= limit) ++root;
  std::vector<SievePrime> out;
  for (uint32_t p : primes_up_to(root)) {
    if (p == 2) continue;
    uint32_t inv = p;  // Newton iteration doubles correct bits each round
    for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
    out.push_back({p, inv, UINT32_MAX / p});
  }
  return out;
}

void check_cap(uint64_t limit, const SieveOptions& opt) {
  if (limit > opt.cap) {
    throw resource_limit_error("requested limit " + std::to_string(limit) +
                               " exceeds sieve cap " + std::to_string(opt.cap));
  }
}

int resolve_threads(const SieveOptions& opt) {
  if (opt.threads > 0) return opt.threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Factorizes every n in [lo, hi) and hands each FactorView to `sink`,
// ascending. Scratch buffers are reused across calls.
class BlockFactorizer {
 public:
  explicit BlockFactorizer(const std::vector<SievePrime>& primes) : primes_(primes) {
    views_.resize(kBlockLen);
    rem_.resize(kBlockLen);
  }

  template <class Sink>
  void run(uint64_t lo, uint64_t hi, Sink&& sink) {
    const auto len = static_cast<uint32_t>(hi - lo);
    for (uint32_t i = 0; i < len; ++i) {
      uint64_t n = lo + i;
      FactorView& fv = views_[i];
      fv.n = n;
      fv.count = 0;
      auto m = static_cast<uint32_t>(n);
      if (n >= 2 && (m & 1) == 0) {
        auto tz = static_cast<uint8_t>(std::countr_zero(m));
        fv.f[fv.count++] = {2, tz};
        m >>= tz;
      }
      rem_[i] = m;
    }
    for (const SievePrime& sp : primes_) {
      const uint64_t p = sp.p;
      if (p * p >= hi) break;
      uint64_t first = ((lo + p - 1) / p) * p;
      if (first < p) first = p;
      for (uint64_t mlt = first; mlt < hi; mlt += p) {
        const auto i = static_cast<uint32_t>(mlt - lo);
        uint32_t r = rem_[i] * sp.inv;  // exact: p divides rem_[i]
        uint8_t beta = 1;
        while (true) {
          uint32_t next = r * sp.inv;
          if (next > sp.lim) break;
          r = next;
          ++beta;
        }
        rem_[i] = r;
        FactorView& fv = views_[i];
        fv.f[fv.count++] = {sp.p, beta};
      }
    }
    for (uint32_t i = 0; i < len; ++i) {
      FactorView& fv = views_[i];
      if (rem_[i] > 1) fv.f[fv.count++] = {rem_[i], 1};
      sink(fv);
    }
  }

 private:
  const std::vector<SievePrime>& primes_;
  std::vector<FactorView> views_;
  std::vector<uint32_t> rem_;
};

}  // namespace

void for_each_factored(uint64_t limit, const SieveOptions& opt,
                       const std::function<void(const FactorView&)>& sink) {
  if (limit == 0) return;
  check_cap(limit, opt);
  std::vector<SievePrime> primes = sieve_primes(limit);
  BlockFactorizer fact(primes);
  for (uint64_t lo = 1; lo <= limit; lo += kBlockLen) {
    uint64_t hi = std::min(limit + 1, lo + kBlockLen);
    fact.run(lo, hi, sink);
  }
}

std::vector<uint64_t> count_over_grid(
    const std::vector<uint64_t>& grid,
    const std::function<std::function<bool(const FactorView&)>()>& make_pred,
    const SieveOptions& opt) {
  if (grid.empty()) throw std::invalid_argument("empty x grid");
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i] >= grid[i + 1]) throw std::invalid_argument("x grid must be strictly increasing");
  }
  const uint64_t limit = grid.back();
  check_cap(limit, opt);

  const std::vector<SievePrime> primes = sieve_primes(limit);
  const uint64_t seg_len = std::max<uint64_t>(opt.segment_len, kBlockLen);
  const uint64_t num_segments = (limit + seg_len - 1) / seg_len;
  const int threads = std::min<int>(resolve_threads(opt), static_cast<int>(num_segments));

  std::atomic<uint64_t> next_segment{0};
  std::vector<std::vector<uint64_t>> worker_buckets(std::max(threads, 1));

  auto work = [&](int wid) {
    std::function<bool(const FactorView&)> pred = make_pred();
    BlockFactorizer fact(primes);
    std::vector<uint64_t>& buckets = worker_buckets[wid];
    buckets.assign(grid.size(), 0);
    while (true) {
      uint64_t seg = next_segment.fetch_add(1, std::memory_order_relaxed);
      if (seg >= num_segments) break;
      uint64_t seg_lo = 1 + seg * seg_len;
      uint64_t seg_hi = std::min(limit + 1, seg_lo + seg_len);
      for (uint64_t lo = seg_lo; lo < seg_hi; lo += kBlockLen) {
        uint64_t hi = std::min(seg_hi, lo + kBlockLen);
        // Common case: the whole block falls in one grid bucket.
        size_t b_lo = std::lower_bound(grid.begin(), grid.end(), lo) - grid.begin();
        size_t b_hi = std::lower_bound(grid.begin(), grid.end(), hi - 1) - grid.begin();
        if (b_lo == b_hi) {
          uint64_t c = 0;
          fact.run(lo, hi, [&](const FactorView& fv) { c += pred(fv) ? 1 : 0; });
          buckets[b_lo] += c;
        } else {
          fact.run(lo, hi, [&](const FactorView& fv) {
            if (pred(fv)) {
              size_t b = std::lower_bound(grid.begin(), grid.end(), fv.n) - grid.begin();
              ++buckets[b];
            }
          });
        }
      }
    }
  };

  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }

  std::vector<uint64_t> out(grid.size(), 0);
  for (const std::vector<uint64_t>& b : worker_buckets) {
    for (size_t j = 0; j < b.size(); ++j) out[j] += b[j];
  }
  for (size_t j = 1; j < out.size(); ++j) out[j] += out[j - 1];
  return out;
}

void build_spf(uint64_t limit, const SieveOptions& opt,
               const std::function<void(const SpfSegment&)>& sink) {
  check_cap(limit, opt);
  auto root = static_cast<uint32_t>(std::sqrt(static_cast<double>(limit)));
  while (static_cast<uint64_t>(root + 1) * (root + 1) <= limit) ++root;
  const std::vector<uint32_t> primes = primes_up_to(root);

  SpfSegment seg;
  for (uint64_t lo = 0; lo <= limit; lo += opt.segment_len) {
    const uint64_t hi = std::min(limit + 1, lo + opt.segment_len);
    seg.base = lo;
    seg.spf.assign(hi - lo, 0);
    for (uint32_t p : primes) {
      if (static_cast<uint64_t>(p) * p >= hi) break;
      uint64_t first = std::max<uint64_t>(((lo + p - 1) / p) * p, p);
      for (uint64_t m = first; m < hi; m += p) {
        uint32_t& slot = seg.spf[m - lo];
        if (slot == 0) slot = p;
      }
    }
    for (uint64_t n = std::max<uint64_t>(lo, 2); n < hi; ++n) {
      uint32_t& slot = seg.spf[n - lo];
      if (slot == 0) slot = static_cast<uint32_t>(n);
    }
    sink(seg);
  }
}

SpfTable::SpfTable(uint64_t limit, const SieveOptions& opt) : limit_(limit) {
  spf_.reserve(limit + 1);
  build_spf(limit, opt, [this](const SpfSegment& seg) {
    spf_.insert(spf_.end(), seg.spf.begin(), seg.spf.end());
  });
}

uint32_t SpfTable::spf(uint64_t n) const {
  if (n < 2 || n > limit_) throw std::out_of_range("spf query outside table range");
  return spf_[n];
}

std::vector<PrimePower> SpfTable::factorize(uint64_t n) const {
  if (n < 2 || n > limit_) throw std::out_of_range("factorize query outside table range");
  std::vector<PrimePower> out;
  while (n > 1) {
    uint64_t p = spf_[n];
    uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

void collect_ell_parts(const FactorView& fv, uint64_t ell, std::vector<uint32_t>& out) {
  for (int i = 0; i < fv.count; ++i) {
    const uint64_t q = fv.f[i].q;
    const uint32_t beta = fv.f[i].beta;
    if (q == 2) {
      if (ell == 2) {
        if (beta == 2) out.push_back(1);
        if (beta >= 3) {
          out.push_back(1);
          out.push_back(beta - 2);
        }
      }
      continue;
    }
    uint32_t v = valuation(q - 1, ell);
    if (v > 0) out.push_back(v);
    if (q == ell && beta >= 2) out.push_back(beta - 1);
  }
}

void unit_group_stream(uint64_t x, const std::vector<uint64_t>& query_primes,
                       std::optional<uint64_t> p_for_valuation,
                       const std::function<void(const UnitGroupProfile&)>& sink,
                       const SieveOptions& opt, const PartitionTruncation& trunc) {
  if (x < 1) throw std::invalid_argument("unit_group_stream: x must be >= 1");
  if (query_primes.empty()) throw std::invalid_argument("unit_group_stream: no query primes");
  for (uint64_t ell : query_primes) {
    if (!is_prime_u64(ell)) throw std::domain_error("query prime is not prime");
  }

  UnitGroupProfile profile;
  profile.partitions.resize(query_primes.size());
  for (size_t i = 0; i < query_primes.size(); ++i) profile.partitions[i].ell = query_primes[i];

  for_each_factored(x, opt, [&](const FactorView& fv) {
    profile.n = fv.n;
    profile.p_valuation = 0;
    if (p_for_valuation) {
      for (int i = 0; i < fv.count; ++i) {
        if (fv.f[i].q == *p_for_valuation) profile.p_valuation = fv.f[i].beta;
      }
    }
    for (size_t qi = 0; qi < query_primes.size(); ++qi) {
      std::vector<uint32_t>& parts = profile.partitions[qi].parts;
      parts.clear();
      collect_ell_parts(fv, query_primes[qi], parts);
      if (trunc.max_part != UINT32_MAX) {
        for (uint32_t& v : parts) v = std::min(v, trunc.max_part);
      }
      std::sort(parts.begin(), parts.end(), std::greater<>());
      if (parts.size() > trunc.max_parts) parts.resize(trunc.max_parts);
    }
    sink(profile);
  });
}

}  // namespace unitcensus
