#include "unitcensus/abelian.hpp"

#include <algorithm>
#include <cctype>

#include "unitcensus/nt.hpp"

namespace unitcensus {

uint64_t PrimePower::value() const { return checked_pow_u64(p, alpha); }

uint64_t PrimePower::phi() const {
  uint64_t v = checked_pow_u64(p, alpha - 1);
  return v * (p - 1);
}

PrimePower make_prime_power(uint64_t p, uint32_t alpha) {
  if (!is_prime_u64(p)) throw std::domain_error("not a prime: " + std::to_string(p));
  if (alpha < 1) throw std::domain_error("prime power exponent must be >= 1");
  PrimePower pp{p, alpha};
  pp.value();  // overflow check
  return pp;
}

bool PPartition::dominates(const PPartition& sub) const {
  if (sub.parts.size() > parts.size()) return false;
  for (size_t i = 0; i < sub.parts.size(); ++i) {
    if (sub.parts[i] > parts[i]) return false;
  }
  return true;
}

FiniteAbelianGroup FiniteAbelianGroup::from_prime_powers(const std::vector<PrimePower>& factors) {
  std::vector<PrimePower> sorted = factors;
  std::sort(sorted.begin(), sorted.end());
  FiniteAbelianGroup g;
  for (size_t i = 0; i < sorted.size();) {
    make_prime_power(sorted[i].p, sorted[i].alpha);  // validate
    size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    g.summands_.push_back({sorted[i].p, sorted[i].alpha, static_cast<uint32_t>(j - i)});
    i = j;
  }
  return g;
}

FiniteAbelianGroup FiniteAbelianGroup::from_cyclic_orders(const std::vector<uint64_t>& orders) {
  std::vector<PrimePower> pps;
  for (uint64_t n : orders) {
    if (n == 0) throw std::domain_error("cyclic order must be >= 1");
    for (const Factor& f : factorize_u64(n)) pps.push_back({f.p, f.e});
  }
  return from_prime_powers(pps);
}

std::vector<uint64_t> FiniteAbelianGroup::primes() const {
  std::vector<uint64_t> ps;
  for (const GatheredSummand& s : summands_) {
    if (ps.empty() || ps.back() != s.p) ps.push_back(s.p);
  }
  return ps;
}

PPartition FiniteAbelianGroup::p_partition(uint64_t ell) const {
  PPartition out;
  out.ell = ell;
  for (auto it = summands_.rbegin(); it != summands_.rend(); ++it) {
    if (it->p == ell) out.parts.insert(out.parts.end(), it->k, it->alpha);
  }
  return out;  // summands sorted by alpha ascending, so reversed is descending
}

std::optional<uint64_t> FiniteAbelianGroup::order() const {
  unsigned __int128 n = 1;
  for (const GatheredSummand& s : summands_) {
    for (uint32_t i = 0; i < s.k * s.alpha; ++i) {
      n *= s.p;
      if (n > UINT64_MAX) return std::nullopt;
    }
  }
  return static_cast<uint64_t>(n);
}

FiniteAbelianGroup FiniteAbelianGroup::times(const FiniteAbelianGroup& other) const {
  std::vector<PrimePower> pps;
  for (const GatheredSummand& s : summands_)
    pps.insert(pps.end(), s.k, PrimePower{s.p, s.alpha});
  for (const GatheredSummand& s : other.summands_)
    pps.insert(pps.end(), s.k, PrimePower{s.p, s.alpha});
  return from_prime_powers(pps);
}

std::string FiniteAbelianGroup::render() const {
  if (summands_.empty()) return "Z1";
  std::string out;
  for (const GatheredSummand& s : summands_) {
    if (!out.empty()) out += '*';
    out += 'Z';
    out += std::to_string(PrimePower{s.p, s.alpha}.value());
    if (s.k > 1) {
      out += '^';
      out += std::to_string(s.k);
    }
  }
  return out;
}

namespace {

class GroupParser {
 public:
  explicit GroupParser(const std::string& text) : text_(text) {}

  FiniteAbelianGroup parse() {
    skip_ws();
    FiniteAbelianGroup g;
    if (peek() == '[')
      g = parse_bracket_form();
    else
      g = parse_product_form();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("group spec parse error at position " +
                                std::to_string(pos_) + ": " + why);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool consume(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  uint64_t parse_integer() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer");
    unsigned __int128 v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<unsigned>(text_[pos_] - '0');
      if (v > UINT64_MAX) throw std::domain_error("integer in group spec exceeds 64 bits");
      ++pos_;
    }
    return static_cast<uint64_t>(v);
  }

  FiniteAbelianGroup parse_bracket_form() {
    consume('[');
    std::vector<uint64_t> orders;
    while (true) {
      uint64_t n = parse_integer();
      check_order(n);
      orders.push_back(n);
      if (consume(']')) break;
      if (!consume(',')) fail("expected ',' or ']'");
    }
    return FiniteAbelianGroup::from_cyclic_orders(orders);
  }

  FiniteAbelianGroup parse_product_form() {
    std::vector<uint64_t> orders;
    while (true) {
      skip_ws();
      if (peek() != 'Z') fail("expected 'Z'");
      ++pos_;
      uint64_t n = parse_integer();
      check_order(n);
      uint64_t k = 1;
      if (consume('^')) {
        k = parse_integer();
        if (k == 0) throw std::domain_error("zero multiplicity in group spec");
      }
      orders.insert(orders.end(), k, n);
      if (!consume('*')) break;
    }
    return FiniteAbelianGroup::from_cyclic_orders(orders);
  }

  static void check_order(uint64_t n) {
    if (n == 0) throw std::domain_error("cyclic order 0 in group spec");
    if (n == 1) throw std::domain_error("order-1 term in group spec (trivial factor)");
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

FiniteAbelianGroup parse_group(const std::string& spec) { return GroupParser(spec).parse(); }

std::vector<GatheredSummand> gathered_summands(const FiniteAbelianGroup& g) {
  if (g.is_trivial()) throw trivial_group_error();
  return g.summands();
}

SummandOrder preorder_cmp(const GatheredSummand& a, const GatheredSummand& b) {
  uint64_t fa = a.prime_power().phi();
  uint64_t fb = b.prime_power().phi();
  if (fa != fb) return fa < fb ? SummandOrder::Less : SummandOrder::Greater;
  if (a.k != b.k) return a.k < b.k ? SummandOrder::Less : SummandOrder::Greater;
  return SummandOrder::Equivalent;
}

std::vector<GatheredSummand> dominant_summands(const FiniteAbelianGroup& g) {
  std::vector<GatheredSummand> gs = gathered_summands(g);
  GatheredSummand best = gs.front();
  for (const GatheredSummand& s : gs) {
    if (preorder_cmp(best, s) == SummandOrder::Less) best = s;
  }
  std::vector<GatheredSummand> out;
  for (const GatheredSummand& s : gs) {
    if (preorder_cmp(s, best) == SummandOrder::Equivalent) out.push_back(s);
  }
  std::sort(out.begin(), out.end(),
            [](const GatheredSummand& a, const GatheredSummand& b) { return a.p < b.p; });
  return out;
}

std::optional<PrimePower> phi_collision_partner(const PrimePower& pp) {
  make_prime_power(pp.p, pp.alpha);
  const uint64_t v = pp.phi();
  std::vector<PrimePower> hits;
  // beta = 1: phi(q) = q - 1 = v.
  if (v + 1 >= 2 && is_prime_u64(v + 1)) hits.push_back({v + 1, 1});
  // beta >= 2: q divides phi(q^beta) = v, and v / q^(beta-1) = q - 1.
  for (const Factor& f : factorize_u64(v)) {
    uint64_t qpow = 1;
    for (uint32_t j = 1; j <= f.e; ++j) {
      qpow *= f.p;  // q^j
      if (v % qpow == 0 && v / qpow == f.p - 1) hits.push_back({f.p, j + 1});
    }
  }
  std::optional<PrimePower> partner;
  for (const PrimePower& h : hits) {
    if (h == pp) continue;
    // Lemma-level guarantee: at most one other prime power shares phi.
    if (partner && *partner != h) throw std::logic_error("phi collision search found two partners");
    partner = h;
  }
  return partner;
}

PPartition p_partition(const FiniteAbelianGroup& g, uint64_t ell) { return g.p_partition(ell); }

bool embeds(const FiniteAbelianGroup& g, const FiniteAbelianGroup& h) {
  for (uint64_t ell : g.primes()) {
    if (!h.p_partition(ell).dominates(g.p_partition(ell))) return false;
  }
  return true;
}

FiniteAbelianGroup unit_group_of_prime_power(uint64_t p, uint32_t beta) {
  make_prime_power(p, beta);
  std::vector<PrimePower> pps;
  if (p == 2) {
    if (beta == 2) pps.push_back({2, 1});
    if (beta >= 3) {
      pps.push_back({2, 1});
      pps.push_back({2, beta - 2});
    }
  } else {
    for (const Factor& f : factorize_u64(p - 1)) pps.push_back({f.p, f.e});
    if (beta >= 2) pps.push_back({p, beta - 1});
  }
  return FiniteAbelianGroup::from_prime_powers(pps);
}

FiniteAbelianGroup unit_group_of_integer(uint64_t n) {
  if (n == 0) throw std::domain_error("modulus must be >= 1");
  FiniteAbelianGroup g;
  for (const Factor& f : factorize_u64(n)) g = g.times(unit_group_of_prime_power(f.p, f.e));
  return g;
}

uint64_t euler_phi_pp(const PrimePower& pp) { return pp.phi(); }

}  // namespace unitcensus
