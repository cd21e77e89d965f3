#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "oracles.hpp"
#include "unitcensus/nt.hpp"
#include "unitcensus/sieve.hpp"

using namespace unitcensus;

TEST_CASE("spf values for small n") {
  std::map<uint64_t, uint32_t> expect = {{2, 2}, {3, 3}, {4, 2}, {5, 5},  {6, 2},
                                         {7, 7}, {8, 2}, {9, 3}, {10, 2}};
  SpfTable table(10);
  for (auto [n, spf] : expect) CHECK(table.spf(n) == spf);
  CHECK_THROWS_AS(table.spf(1), std::out_of_range);
  CHECK_THROWS_AS(table.spf(11), std::out_of_range);
}

TEST_CASE("spf limit 2 is a single prime entry") {
  int segments = 0;
  uint32_t value = 0;
  build_spf(2, {}, [&](const SpfSegment& seg) {
    ++segments;
    value = seg.spf.back();
  });
  CHECK(segments == 1);
  CHECK(value == 2);
}

TEST_CASE("spf is independent of segment length") {
  SieveOptions a, b;
  a.segment_len = 1000;
  b.segment_len = 1 << 18;
  std::vector<uint32_t> va, vb;
  build_spf(30000, a, [&](const SpfSegment& s) { va.insert(va.end(), s.spf.begin(), s.spf.end()); });
  build_spf(30000, b, [&](const SpfSegment& s) { vb.insert(vb.end(), s.spf.begin(), s.spf.end()); });
  CHECK(va == vb);
}

TEST_CASE("prime count to 1e6 against an independent sieve") {
  // Plain bool-array Eratosthenes, written here, not the library's.
  const uint32_t N = 1000000;
  std::vector<bool> comp(N + 1, false);
  uint64_t primes = 0;
  for (uint64_t i = 2; i <= N; ++i) {
    if (!comp[i]) {
      ++primes;
      for (uint64_t j = i * i; j <= N; j += i) comp[j] = true;
    }
  }
  CHECK(primes == 78498);

  uint64_t via_spf = 0;
  build_spf(N, {}, [&](const SpfSegment& seg) {
    for (size_t i = 0; i < seg.spf.size(); ++i) {
      if (seg.spf[i] == seg.base + i && seg.base + i >= 2) ++via_spf;
    }
  });
  CHECK(via_spf == primes);

  uint64_t via_stream = 0;
  for_each_factored(N, {}, [&](const FactorView& fv) {
    if (fv.count == 1 && fv.f[0].beta == 1) ++via_stream;
  });
  CHECK(via_stream == primes);
}

TEST_CASE("factorize via spf table") {
  SpfTable table(1 << 21);
  CHECK(table.factorize(12) == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(table.factorize(97) == std::vector<PrimePower>{{97, 1}});
  CHECK(table.factorize(1594323) == std::vector<PrimePower>{{3, 13}});
  CHECK(table.factorize(1048576) == std::vector<PrimePower>{{2, 20}});
}

TEST_CASE("factored stream round-trips and is exhaustive") {
  uint64_t seen = 0;
  for_each_factored(100000, {}, [&](const FactorView& fv) {
    ++seen;
    CHECK(fv.n == seen);
    unsigned __int128 prod = 1;
    uint64_t prev_q = 0;
    for (int i = 0; i < fv.count; ++i) {
      CHECK(fv.f[i].q > prev_q);
      prev_q = fv.f[i].q;
      CHECK(is_prime_u64(fv.f[i].q));
      for (uint32_t e = 0; e < fv.f[i].beta; ++e) prod *= fv.f[i].q;
    }
    CHECK(static_cast<uint64_t>(prod) == fv.n);
  });
  CHECK(seen == 100000);
}

TEST_CASE("stream profiles match the direct construction") {
  const std::vector<uint64_t> query = {2, 3, 5};
  unit_group_stream(10000, query, 3, [&](const UnitGroupProfile& prof) {
    FiniteAbelianGroup direct = oracles::unit_group_direct(prof.n);
    for (size_t i = 0; i < query.size(); ++i) {
      CHECK(prof.partitions[i] == direct.p_partition(query[i]));
    }
    CHECK(prof.p_valuation == valuation(prof.n, 3));
  });
}

TEST_CASE("profile spot values") {
  std::vector<std::vector<uint32_t>> two_parts(17);
  unit_group_stream(16, {2}, std::nullopt, [&](const UnitGroupProfile& prof) {
    two_parts[prof.n] = prof.partitions[0].parts;
  });
  CHECK(two_parts[16] == std::vector<uint32_t>{2, 1});  // Z_16^x = Z_4 x Z_2
  CHECK(two_parts[1].empty());
  CHECK(two_parts[2].empty());
  CHECK(two_parts[8] == std::vector<uint32_t>{1, 1});
  CHECK(two_parts[15] == std::vector<uint32_t>{2, 1});  // Z_15^x = Z_4 x Z_2
  CHECK(two_parts[7] == std::vector<uint32_t>{1});
}

TEST_CASE("sampled large-n part assembly against direct construction") {
  std::mt19937_64 rng(23);
  const std::vector<uint64_t> query = {2, 3};
  for (int i = 0; i < 500; ++i) {
    uint64_t n = 2 + rng() % 100000000;
    FiniteAbelianGroup direct = oracles::unit_group_direct(n);
    FactorView fv;
    fv.n = n;
    fv.count = 0;
    for (const Factor& f : factorize_u64(n)) {
      fv.f[fv.count++] = {static_cast<uint32_t>(f.p), static_cast<uint8_t>(f.e)};
    }
    for (uint64_t ell : query) {
      std::vector<uint32_t> parts;
      collect_ell_parts(fv, ell, parts);
      std::sort(parts.begin(), parts.end(), std::greater<>());
      CHECK(parts == direct.p_partition(ell).parts);
    }
  }
}

TEST_CASE("stream is deterministic across segmenting and threads") {
  auto fingerprint = [](const SieveOptions& opt) {
    uint64_t h = 1469598103934665603ull;
    unit_group_stream(
        20000, {2, 3}, 2,
        [&](const UnitGroupProfile& prof) {
          auto mix = [&](uint64_t v) { h = (h ^ v) * 1099511628211ull; };
          mix(prof.n);
          mix(prof.p_valuation);
          for (const PPartition& part : prof.partitions) {
            for (uint32_t p : part.parts) mix(p);
            mix(0xabcd);
          }
        },
        opt);
    return h;
  };
  SieveOptions small_seg, large_seg;
  small_seg.segment_len = 4096;
  large_seg.segment_len = 1 << 20;
  CHECK(fingerprint(small_seg) == fingerprint(large_seg));

  // Grid counting must not depend on worker count or segmenting either.
  auto run_count = [](int threads, uint32_t seg) {
    SieveOptions opt;
    opt.threads = threads;
    opt.segment_len = seg;
    auto make_pred = []() -> std::function<bool(const FactorView&)> {
      return [](const FactorView& fv) { return fv.count == 2; };
    };
    return count_over_grid({999, 65536, 300000}, make_pred, opt);
  };
  auto base = run_count(1, 1 << 20);
  CHECK(run_count(1, 4096) == base);
  CHECK(run_count(4, 1 << 16) == base);
  CHECK(run_count(8, 1 << 20) == base);
}

TEST_CASE("truncated profiles stay sound for domination") {
  // Capping parts at the query's largest exponent and keeping one part past
  // the query's length must not change any embedding decision.
  PartitionTruncation trunc;
  trunc.max_part = 2;
  trunc.max_parts = 3;
  std::vector<std::vector<uint32_t>> full, cut;
  unit_group_stream(100000, {2}, std::nullopt,
                    [&](const UnitGroupProfile& p) { full.push_back(p.partitions[0].parts); });
  unit_group_stream(
      100000, {2}, std::nullopt,
      [&](const UnitGroupProfile& p) { cut.push_back(p.partitions[0].parts); }, {}, trunc);
  REQUIRE(full.size() == cut.size());
  // Queries the truncation is built for: parts <= 2, at most 3 of them.
  const std::vector<std::vector<uint32_t>> lambdas = {
      {1}, {2}, {1, 1}, {2, 1}, {2, 2}, {1, 1, 1}, {2, 2, 2}, {2, 1, 1}};
  auto dominates = [](const std::vector<uint32_t>& mu, const std::vector<uint32_t>& lam) {
    if (lam.size() > mu.size()) return false;
    for (size_t i = 0; i < lam.size(); ++i) {
      if (lam[i] > mu[i]) return false;
    }
    return true;
  };
  for (size_t i = 0; i < full.size(); ++i) {
    for (const auto& lam : lambdas) {
      CHECK(dominates(full[i], lam) == dominates(cut[i], lam));
    }
  }
}

TEST_CASE("resource cap") {
  SieveOptions opt;
  opt.cap = 1000;
  CHECK_THROWS_AS(for_each_factored(10000, opt, [](const FactorView&) {}), resource_limit_error);
  auto make_pred = []() -> std::function<bool(const FactorView&)> {
    return [](const FactorView&) { return true; };
  };
  CHECK_THROWS_AS(count_over_grid({2000}, make_pred, opt), resource_limit_error);
  CHECK(count_over_grid({10, 1000}, make_pred, opt) == std::vector<uint64_t>{10, 1000});
}

TEST_CASE("stream argument validation") {
  CHECK_THROWS_AS(unit_group_stream(10, {}, std::nullopt, [](const UnitGroupProfile&) {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(unit_group_stream(10, {4}, std::nullopt, [](const UnitGroupProfile&) {}),
                  std::domain_error);
}
