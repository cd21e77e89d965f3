#include "unitcensus/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "unitcensus/nt.hpp"
#include "unitcensus/special.hpp"

namespace unitcensus {

using ordered_json = nlohmann::ordered_json;

SieveOptions RunConfig::sieve_options() const {
  SieveOptions opt;
  opt.threads = threads;
  opt.cap = sieve_cap;
  return opt;
}

namespace {

uint64_t parse_number(const std::string& tok) {
  size_t pos = 0;
  double v = std::stod(tok, &pos);
  if (pos != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
  if (!(v >= 1.0) || v > 9.0e15) throw std::invalid_argument("number out of range '" + tok + "'");
  return static_cast<uint64_t>(std::llround(v));
}

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

ordered_json meta_block(const RunConfig& cfg, const std::string& schema) {
  ordered_json meta;
  meta["schema"] = schema;
  if (!cfg.no_timestamp) meta["timestamp"] = timestamp_utc();
  return meta;
}

class OutputSink {
 public:
  explicit OutputSink(const RunConfig& cfg, std::ostream& fallback) {
    if (!cfg.out_path.empty()) {
      file_.open(cfg.out_path);
      if (!file_) throw std::invalid_argument("cannot open output file " + cfg.out_path);
      stream_ = &file_;
    } else {
      stream_ = &fallback;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

int usage_error(std::ostream& err, const std::string& what) {
  err << "error: " << what << "\n";
  return kExitUsage;
}

}  // namespace

std::vector<uint64_t> parse_x_grid(const std::string& text) {
  std::vector<uint64_t> grid;
  if (text.find(':') != std::string::npos) {
    std::istringstream is(text);
    std::string a, b, c;
    if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
      throw std::invalid_argument("geometric grid must be start:stop:factor");
    uint64_t start = parse_number(a);
    uint64_t stop = parse_number(b);
    double factor = std::stod(c);
    if (!(factor > 1.0)) throw std::invalid_argument("grid factor must be > 1");
    double x = static_cast<double>(start);
    while (x <= static_cast<double>(stop) * (1.0 + 1e-12)) {
      auto v = static_cast<uint64_t>(std::llround(x));
      if (grid.empty() || v > grid.back()) grid.push_back(v);
      x *= factor;
    }
  } else {
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (!tok.empty()) grid.push_back(parse_number(tok));
    }
  }
  if (grid.empty()) throw std::invalid_argument("empty x grid");
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i] >= grid[i + 1]) throw std::invalid_argument("x grid must be strictly increasing");
  }
  return grid;
}

std::vector<IdentityRow> exact_identity_suite(const std::vector<uint64_t>& xs,
                                              const std::vector<uint64_t>& palphas,
                                              uint32_t k_max, uint32_t ell_max,
                                              const SieveOptions& opt, bool inject_fault) {
  std::vector<IdentityRow> rows;
  auto param_str = [](uint64_t x, uint64_t pa, int64_t k, int64_t ell) {
    std::string s = "x=" + std::to_string(x) + " p^a=" + std::to_string(pa);
    if (k >= 0) s += " k=" + std::to_string(k);
    if (ell >= 0) s += " l=" + std::to_string(ell);
    return s;
  };

  std::vector<PrimePower> pps;
  for (uint64_t v : palphas) {
    std::vector<Factor> fs = factorize_u64(v);
    if (fs.size() != 1) throw std::invalid_argument("p^alpha list entry is not a prime power");
    pps.push_back(make_prime_power(fs[0].p, fs[0].e));
  }

  for (uint64_t x : xs) {
    for (const PrimePower& pa : pps) {
      const uint64_t value = pa.value();
      for (uint32_t k = 1; k <= k_max; ++k) {
        // S as the sum of its ell-slices.
        uint64_t slice_sum = 0;
        uint64_t pl = 1;
        for (uint32_t ell = 0; pl <= x; ++ell) {
          slice_sum += count_S_ell(x, pa, k, ell, opt);
          if (pl > x / pa.p) break;
          pl *= pa.p;
        }
        FiniteAbelianGroup g = FiniteAbelianGroup::from_prime_powers(
            std::vector<PrimePower>(k, pa));
        rows.push_back({"slice-partition", param_str(x, value, k, -1),
                        count_S({x}, g, opt)[0], slice_sum});

        // Each slice reduces to the ell = 0 slice at a shrunken threshold.
        for (uint32_t ell = 1; ell <= ell_max; ++ell) {
          uint64_t pl2 = 1;
          bool overflow = false;
          for (uint32_t i = 0; i < ell; ++i) {
            if (pl2 > x / pa.p) {
              overflow = true;
              break;
            }
            pl2 *= pa.p;
          }
          uint64_t y = overflow ? 0 : x / pl2;
          uint64_t rhs;
          if (value == 2) {
            if (ell == 1)
              rhs = count_S0(y, pa, k, opt);
            else if (ell == 2)
              rhs = count_S0(y, pa, static_cast<int64_t>(k) - 1, opt);
            else
              rhs = count_S0(y, pa, static_cast<int64_t>(k) - 2, opt);
          } else if (pa.p == 2) {
            rhs = ell <= pa.alpha + 1 ? count_S0(y, pa, k, opt)
                                      : count_S0(y, pa, static_cast<int64_t>(k) - 1, opt);
          } else {
            rhs = ell <= pa.alpha ? count_S0(y, pa, k, opt)
                                  : count_S0(y, pa, static_cast<int64_t>(k) - 1, opt);
          }
          rows.push_back({"slice-reduction", param_str(x, value, k, ell),
                          count_S_ell(x, pa, k, ell, opt), rhs});
        }

        // The ell = 0 slice splits by the number of prime factors = 1 mod p^a.
        if (value >= 3) {
          uint64_t dm_sum = 0;
          for (uint32_t m = 0; m < k; ++m) dm_sum += count_D_m(x, pa, m, opt);
          rows.push_back({"zero-slice-split", param_str(x, value, k, -1),
                          count_S0(x, pa, k, opt), dm_sum});
        }
      }
    }

    // Odd-integer omega identity for powers of Z_2.
    for (uint32_t k = 1; k <= std::max(k_max, 4u); ++k) {
      uint64_t pim_sum = 0;
      for (uint32_t m = 0; m < k; ++m) pim_sum += count_pi_m_star(x, m, opt);
      rows.push_back({"odd-omega-split", "x=" + std::to_string(x) + " k=" + std::to_string(k),
                      count_S0(x, make_prime_power(2, 1), k, opt), pim_sum});
    }

    // Inclusion-exclusion and the union bound for coprime pairs.
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"Z3", "Z4"}, {"Z9", "Z5"}, {"Z3^2", "Z4^2"}, {"Z8", "Z9"}, {"Z5", "Z4"}};
    for (const auto& [s1, s2] : pairs) {
      FiniteAbelianGroup h1 = parse_group(s1);
      FiniteAbelianGroup h2 = parse_group(s2);
      uint64_t sum = count_S({x}, h1, opt)[0] + count_S({x}, h2, opt)[0];
      uint64_t both = count_S_pair(x, h1, h2, opt);
      uint64_t product = count_S({x}, h1.times(h2), opt)[0];
      std::string params = "x=" + std::to_string(x) + " " + s1 + "," + s2;
      rows.push_back({"inclusion-exclusion", params, product, sum - both});
      rows.push_back({"union-bound", params, product, sum, true});
      rows.push_back({"subgroup-monotone", params, count_S({x}, h1, opt)[0], product, true});
    }
  }

  if (inject_fault && !rows.empty()) rows.front().lhs += 1;
  return rows;
}

int run_count(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  FiniteAbelianGroup g = parse_group(cfg.group_spec);
  if (g.is_trivial()) throw trivial_group_error();
  std::vector<uint64_t> counts = count_S(cfg.x_grid, g, cfg.sieve_options());
  OutputSink sink(cfg, out);
  if (cfg.format == "csv") {
    sink.stream() << "x,counter,params,value\n";
    for (size_t i = 0; i < cfg.x_grid.size(); ++i) {
      sink.stream() << cfg.x_grid[i] << ",S," << g.render() << ',' << counts[i] << "\n";
    }
  } else {
    ordered_json doc;
    doc["meta"] = meta_block(cfg, "count.v1");
    doc["meta"]["group"] = g.render();
    ordered_json rows = ordered_json::array();
    for (size_t i = 0; i < cfg.x_grid.size(); ++i) {
      rows.push_back({{"x", cfg.x_grid[i]}, {"counter", "S"}, {"params", g.render()},
                      {"value", counts[i]}});
    }
    doc["rows"] = rows;
    sink.stream() << doc.dump(2) << "\n";
  }
  (void)err;
  return kExitOk;
}

int run_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  FiniteAbelianGroup g = parse_group(cfg.group_spec);
  if (g.is_trivial()) throw trivial_group_error();
  for (uint64_t x : cfg.x_grid) {
    if (x <= 16) return usage_error(err, "compare needs x > 16 (loglog territory)");
  }
  std::vector<uint64_t> counts = count_S(cfg.x_grid, g, cfg.sieve_options());

  std::vector<MainTerm> terms;
  terms.reserve(cfg.x_grid.size());
  for (uint64_t x : cfg.x_grid)
    terms.push_back(main_term_general(static_cast<double>(x), g, cfg.Q));

  OutputSink sink(cfg, out);
  auto row_values = [&](size_t i) {
    double exact = static_cast<double>(counts[i]);
    double ratio = exact / terms[i].dominant_total;
    double llx = std::log(std::log(static_cast<double>(cfg.x_grid[i])));
    return std::tuple<double, double, double, double>(terms[i].total, terms[i].dominant_total,
                                                      ratio, (ratio - 1.0) * llx);
  };
  if (cfg.format == "csv") {
    sink.stream() << "x,exact,main_sum,main_dominant,ratio,residual\n";
    for (size_t i = 0; i < cfg.x_grid.size(); ++i) {
      auto [total, dom, ratio, resid] = row_values(i);
      sink.stream() << cfg.x_grid[i] << ',' << counts[i] << ',' << format_double(total) << ','
                    << format_double(dom) << ',' << format_double(ratio) << ','
                    << format_double(resid) << "\n";
    }
  } else {
    ordered_json doc;
    doc["meta"] = meta_block(cfg, "compare.v1");
    doc["meta"]["group"] = g.render();
    doc["meta"]["branch"] = to_string(terms.front().branch);
    double dom_coeff = 0.0;
    ordered_json coeffs = ordered_json::array();
    for (const MainTermEntry& e : terms.front().terms) {
      coeffs.push_back({{"p", e.summand.p},
                        {"alpha", e.summand.alpha},
                        {"k", e.summand.k},
                        {"coefficient", e.coefficient},
                        {"dominant", e.dominant},
                        {"placeholder", e.placeholder}});
      if (e.dominant) dom_coeff += e.coefficient;
    }
    doc["meta"]["coefficients"] = coeffs;
    doc["meta"]["dominant_coefficient"] = dom_coeff;
    ordered_json rows = ordered_json::array();
    for (size_t i = 0; i < cfg.x_grid.size(); ++i) {
      auto [total, dom, ratio, resid] = row_values(i);
      rows.push_back({{"x", cfg.x_grid[i]}, {"exact", counts[i]}, {"main_sum", total},
                      {"main_dominant", dom}, {"ratio", ratio}, {"residual", resid}});
    }
    doc["rows"] = rows;
    sink.stream() << doc.dump(2) << "\n";
  }
  return kExitOk;
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<IdentityRow> rows = exact_identity_suite(cfg.x_grid, cfg.palphas, cfg.k_max,
                                                       cfg.ell_max, cfg.sieve_options(),
                                                       cfg.inject_fault);
  size_t failures = 0;
  OutputSink sink(cfg, out);
  if (cfg.format == "csv") {
    sink.stream() << "identity,params,lhs,rhs,status\n";
    for (const IdentityRow& r : rows) {
      if (!r.pass()) ++failures;
      sink.stream() << r.name << ',' << r.params << ',' << r.lhs << ',' << r.rhs << ','
                    << (r.pass() ? "PASS" : "FAIL") << "\n";
    }
  } else {
    ordered_json doc;
    doc["meta"] = meta_block(cfg, "verify.v1");
    ordered_json jrows = ordered_json::array();
    for (const IdentityRow& r : rows) {
      if (!r.pass()) ++failures;
      jrows.push_back({{"identity", r.name}, {"params", r.params}, {"lhs", r.lhs},
                       {"rhs", r.rhs}, {"status", r.pass() ? "PASS" : "FAIL"}});
    }
    doc["meta"]["failures"] = failures;
    doc["rows"] = jrows;
    sink.stream() << doc.dump(2) << "\n";
  }
  if (failures > 0) {
    err << failures << " identity check(s) failed\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int run_constants(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.palphas.empty()) return usage_error(err, "constants needs a --palpha list");
  if (cfg.k_min < 1 || cfg.k_min > cfg.k_max) return usage_error(err, "bad k range");

  std::vector<PrimePower> pps;
  for (uint64_t v : cfg.palphas) {
    std::vector<Factor> fs = factorize_u64(v);
    if (fs.size() != 1) return usage_error(err, std::to_string(v) + " is not a prime power");
    pps.push_back(make_prime_power(fs[0].p, fs[0].e));
  }

  OutputSink sink(cfg, out);
  if (cfg.format == "csv") {
    sink.stream() << "kind,p,alpha,k,tau,value,method,Q,error_estimate,note\n";
    for (const PrimePower& pa : pps) {
      if (pa.value() >= 3) {
        DeltaResult d = delta(residue_set_B(pa), DeltaMethod::l_function, cfg.Q);
        sink.stream() << "delta," << pa.p << ',' << pa.alpha << ",," << pa.phi() - 1 << ','
                      << format_double(d.value) << ',' << to_string(d.method) << ','
                      << d.truncation_Q << ',' << format_double(d.error_estimate) << ",\n";
      }
      for (uint32_t k = cfg.k_min; k <= cfg.k_max; ++k) {
        double K = k_constant(pa, k, cfg.Q);
        const char* note = pa.value() == 2 ? "placeholder" : "";
        sink.stream() << "K," << pa.p << ',' << pa.alpha << ',' << k << ",,"
                      << format_double(K) << ",,,," << note << "\n";
      }
    }
    // Gamma factors appearing in the K values.
    for (const PrimePower& pa : pps) {
      if (pa.value() < 3) continue;
      double z = 1.0 - 1.0 / static_cast<double>(pa.phi());
      sink.stream() << "gamma," << pa.p << ',' << pa.alpha << ",,," << format_double(gamma_real(z))
                    << ",,,,z=" << format_double(z) << "\n";
    }
  } else {
    ordered_json doc;
    doc["meta"] = meta_block(cfg, "constants.v1");
    ordered_json deltas = ordered_json::array();
    ordered_json ks = ordered_json::array();
    ordered_json gammas = ordered_json::array();
    for (const PrimePower& pa : pps) {
      if (pa.value() >= 3) {
        ResidueSet B = residue_set_B(pa);
        DeltaResult d = delta(B, DeltaMethod::l_function, cfg.Q);
        deltas.push_back({{"modulus", B.d}, {"classes", B.classes}, {"tau", B.tau()},
                          {"delta", d.value}, {"method", to_string(d.method)},
                          {"Q", d.truncation_Q}, {"error_estimate", d.error_estimate}});
        double z = 1.0 - 1.0 / static_cast<double>(pa.phi());
        gammas.push_back({{"z", z}, {"gamma", gamma_real(z)}});
      }
      for (uint32_t k = cfg.k_min; k <= cfg.k_max; ++k) {
        ordered_json row = {{"p", pa.p}, {"alpha", pa.alpha}, {"k", k},
                            {"K", k_constant(pa, k, cfg.Q)}};
        if (pa.value() == 2) row["note"] = "placeholder";
        ks.push_back(row);
      }
    }
    doc["delta"] = deltas;
    doc["K"] = ks;
    doc["gamma"] = gammas;
    sink.stream() << doc.dump(2) << "\n";
  }
  return kExitOk;
}

int run_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  (void)err;
  auto time_pass = [&](int threads) {
    SieveOptions opt = cfg.sieve_options();
    opt.threads = threads;
    auto t0 = std::chrono::steady_clock::now();
    auto make_pred = []() -> std::function<bool(const FactorView&)> {
      return [](const FactorView& fv) { return fv.count == 1; };
    };
    uint64_t primes = count_over_grid({cfg.bench_x}, make_pred, opt)[0];
    auto t1 = std::chrono::steady_clock::now();
    return std::pair<double, uint64_t>(std::chrono::duration<double>(t1 - t0).count(), primes);
  };

  auto [t_one, primes] = time_pass(1);
  int threads = cfg.threads;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  auto [t_many, primes2] = time_pass(threads);

  ordered_json doc;
  doc["meta"] = meta_block(cfg, "bench.v1");
  doc["x"] = cfg.bench_x;
  doc["prime_count"] = primes;
  doc["deterministic_across_threads"] = primes == primes2;
  doc["single_thread_seconds"] = t_one;
  doc["threads"] = threads;
  doc["threaded_seconds"] = t_many;
  doc["throughput_per_second"] = static_cast<double>(cfg.bench_x) / t_many;
  doc["scaling"] = t_one / t_many;
  OutputSink sink(cfg, out);
  sink.stream() << doc.dump(2) << "\n";
  return kExitOk;
}

}  // namespace unitcensus
