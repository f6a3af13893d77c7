#include "cbounds/response_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace cbounds {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int cell_row(const CausalGraph& g, Mask full) {
  const int a = g.a_count();
  return static_cast<int>(((full & low_bits(a)) << g.b_count()) | (full >> a));
}

}  // namespace

std::string ResponseCount::decimal() const {
  std::string digits = "1";  // little-endian decimal digits
  for (int k = 0; k < log2; ++k) {
    int carry = 0;
    for (char& d : digits) {
      const int v = (d - '0') * 2 + carry;
      d = static_cast<char>('0' + v % 10);
      carry = v / 10;
    }
    if (carry) digits.push_back(static_cast<char>('0' + carry));
  }
  return {digits.rbegin(), digits.rend()};
}

double ResponseCount::value() const { return std::ldexp(1.0, log2); }

std::string ResponseCount::scientific(int digits) const {
  const std::string dec = decimal();
  int exponent = static_cast<int>(dec.size()) - 1;
  std::string mant = dec.substr(0, std::min<std::size_t>(dec.size(), digits));
  mant.resize(digits, '0');
  if (dec.size() > static_cast<std::size_t>(digits) && dec[digits] >= '5') {
    int i = digits - 1;
    while (i >= 0 && mant[i] == '9') mant[i--] = '0';
    if (i >= 0) {
      ++mant[i];
    } else {
      mant.insert(mant.begin(), '1');
      mant.pop_back();
      ++exponent;
    }
  }
  std::string out(1, mant[0]);
  if (digits > 1) out += "." + mant.substr(1);
  return out + "e" + std::to_string(exponent);
}

bool ResponseCount::within(std::uint64_t cap) const {
  return log2 < 64 && (std::uint64_t{1} << log2) <= cap;
}

ResponseCount count_R(const CausalGraph& g) {
  int bits = 0;
  for (int j : indices_of(g.b_set())) bits += 1 << popcount(g.parents(j));
  return {bits};
}

ResponseSpace::ResponseSpace(const CausalGraph& g) : graph_(g) {
  for (int j : indices_of(g.b_set())) {
    const int k = popcount(g.parents(j));
    if (k > 6) {
      throw Error(ErrorCode::kCapExceeded,
                  "response functions of " + g.name(j) + " need 2^" + std::to_string(k) +
                      " table bits; evaluation supports at most 6 parents");
    }
    widths_.push_back(1 << k);
    total_bits_ += 1 << k;
  }
}

std::uint64_t ResponseSpace::encode(const ResponseIndex& r) const {
  if (total_bits_ >= 64) throw Error(ErrorCode::kCapExceeded, "|R| does not fit 64 bits");
  std::uint64_t out = 0;
  int shift = 0;
  for (int t = 0; t < b_count(); ++t) {
    out |= r[t] << shift;
    shift += widths_[t];
  }
  return out;
}

ResponseIndex ResponseSpace::decode(std::uint64_t index) const {
  if (total_bits_ >= 64) throw Error(ErrorCode::kCapExceeded, "|R| does not fit 64 bits");
  ResponseIndex r(b_count());
  for (int t = 0; t < b_count(); ++t) {
    r[t] = index & low_bits(widths_[t]);
    index = widths_[t] >= 64 ? 0 : index >> widths_[t];
  }
  return r;
}

bool ResponseSpace::next(ResponseIndex& r) const {
  for (int t = 0; t < b_count(); ++t) {
    ++r[t];
    r[t] &= low_bits(widths_[t]);
    if (r[t] != 0) return true;
  }
  return false;
}

Mask evaluate_intervened(const ResponseSpace& s, Mask v_a, const Assignment& clamp,
                         const ResponseIndex& r) {
  const CausalGraph& g = s.graph();
  const int a = g.a_count();
  Mask v = v_a & low_bits(a);
  for (int t = 0; t < s.b_count(); ++t) {
    const int j = a + t;
    Mask value;
    if (clamp.contains(j)) {
      value = static_cast<Mask>(clamp.value(j));
    } else {
      value = (r[t] >> gather(v, g.parent_list(j))) & 1U;
    }
    v |= value << j;
  }
  return v;
}

Mask evaluate_FB(const ResponseSpace& s, Mask v_a, const ResponseIndex& r) {
  return evaluate_intervened(s, v_a, Assignment{}, r);
}

std::uint64_t induced_hyperarc(const ResponseSpace& s, const ResponseIndex& r) {
  const CausalGraph& g = s.graph();
  const int a = g.a_count();
  const int b = g.b_count();
  std::uint64_t code = 0;
  for (std::uint32_t v = 0; v < (std::uint32_t{1} << a); ++v) {
    code = (code << b) | (evaluate_FB(s, v, r) >> a);
  }
  return code;
}

Membership membership(const ResponseSpace& s, const Query& q, const Observation* w,
                      const ResponseIndex& r) {
  Membership m;
  const Mask qa = q.context.values();
  m.in_rq = q.outcome.matched_by(evaluate_intervened(s, qa, q.intervention, r));
  if (w && !w->empty()) m.in_rw = w->observed.matched_by(evaluate_FB(s, qa, r));
  m.hyperarc = induced_hyperarc(s, r);
  return m;
}

void require_enumerable(const ResponseSpace& s, std::uint64_t cap) {
  if (!s.count().within(cap)) {
    throw Error(ErrorCode::kCapExceeded, "|R| = " + s.count().decimal() +
                                             " exceeds the enumeration cap " +
                                             std::to_string(cap));
  }
}

namespace {

/// One column's cell rows (one per v_A) for response index r.
void cells_of(const ResponseSpace& s, const ResponseIndex& r, std::vector<int>& rows) {
  const CausalGraph& g = s.graph();
  rows.clear();
  for (std::uint32_t v = 0; v < (std::uint32_t{1} << g.a_count()); ++v) {
    rows.push_back(cell_row(g, evaluate_FB(s, v, r)));
  }
}

}  // namespace

lp::LinearProgram<double> build_naive_lp(const ResponseSpace& s, const Query& q,
                                         const ProbabilityTable& p, lp::Sense sense,
                                         std::uint64_t cap) {
  require_enumerable(s, cap);
  const CausalGraph& g = s.graph();
  lp::LinearProgram<double> lp(sense);
  for (std::uint32_t va = 0; va < p.a_states(); ++va) {
    for (std::uint32_t vb = 0; vb < p.b_states(); ++vb) lp.add_row(lp::Relation::kEqual, p(va, vb));
  }
  (void)g;
  ResponseIndex r(s.b_count(), 0);
  std::vector<int> rows;
  std::vector<lp::LinearProgram<double>::Entry> entries;
  do {
    cells_of(s, r, rows);
    entries.clear();
    for (int row : rows) entries.emplace_back(row, 1.0);
    const Membership m = membership(s, q, nullptr, r);
    lp.add_variable(m.in_rq ? 1.0 : 0.0, entries);
  } while (s.next(r));
  return lp;
}

lp::LinearProgram<double> build_naive_fractional_lp(const ResponseSpace& s, const Query& q,
                                                    const Observation& w,
                                                    const ProbabilityTable& p, lp::Sense sense,
                                                    std::uint64_t cap) {
  require_enumerable(s, cap);
  lp::LinearProgram<double> lp(sense);
  const int cells = static_cast<int>(p.a_states() * p.b_states());
  for (int c = 0; c < cells; ++c) lp.add_row(lp::Relation::kEqual, 0.0);
  const int norm = lp.add_row(lp::Relation::kEqual, 1.0);
  ResponseIndex r(s.b_count(), 0);
  std::vector<int> rows;
  std::vector<lp::LinearProgram<double>::Entry> entries;
  bool witness = false;
  do {
    cells_of(s, r, rows);
    entries.clear();
    for (int row : rows) entries.emplace_back(row, 1.0);
    const Membership m = membership(s, q, &w, r);
    if (m.in_rw) entries.emplace_back(norm, 1.0);
    witness = witness || (m.in_rq && m.in_rw);
    lp.add_variable(m.in_rq && m.in_rw ? 1.0 : 0.0, entries);
  } while (s.next(r));
  if (!witness) {
    throw Error(ErrorCode::kObservationInvalidatesQuery,
                "no response function is consistent with both the query and the observation");
  }
  entries.clear();
  for (std::uint32_t va = 0; va < p.a_states(); ++va) {
    for (std::uint32_t vb = 0; vb < p.b_states(); ++vb) {
      entries.emplace_back(static_cast<int>(va * p.b_states() + vb), -p(va, vb));
    }
  }
  lp.add_variable(0.0, entries, 0.0, lp::LinearProgram<double>::kInfinity, "alpha");
  return lp;
}

lp::LinearProgram<double> build_naive_finite_lp(const ResponseSpace& s, const Query& q,
                                                const Observation* w,
                                                const ProbabilityTable& p_bar, double delta,
                                                lp::Sense sense, std::uint64_t cap) {
  require_enumerable(s, cap);
  if (!(delta >= 0)) throw Error(ErrorCode::kInvalidTable, "delta must be nonnegative");
  const bool obs = w != nullptr;
  lp::LinearProgram<double> lp(sense);
  const int cells = static_cast<int>(p_bar.a_states() * p_bar.b_states());
  for (std::uint32_t va = 0; va < p_bar.a_states(); ++va) {
    for (std::uint32_t vb = 0; vb < p_bar.b_states(); ++vb) {
      const double pv = p_bar(va, vb);
      lp.add_row(lp::Relation::kLessEqual, obs ? 0.0 : pv + delta);
      lp.add_row(lp::Relation::kGreaterEqual, obs ? 0.0 : pv - delta);
    }
  }
  const int mass = lp.add_row(lp::Relation::kEqual, obs ? 0.0 : 1.0);
  const int norm = obs ? lp.add_row(lp::Relation::kEqual, 1.0) : -1;

  ResponseIndex r(s.b_count(), 0);
  std::vector<int> rows;
  std::vector<lp::LinearProgram<double>::Entry> entries;
  do {
    cells_of(s, r, rows);
    entries.clear();
    for (int row : rows) {
      entries.emplace_back(2 * row, 1.0);
      entries.emplace_back(2 * row + 1, 1.0);
    }
    entries.emplace_back(mass, 1.0);
    const Membership m = membership(s, q, w, r);
    if (obs && m.in_rw) entries.emplace_back(norm, 1.0);
    lp.add_variable(m.in_rq && m.in_rw ? 1.0 : 0.0, entries);
  } while (s.next(r));

  if (obs) {
    entries.clear();
    for (int c = 0; c < cells; ++c) {
      const double pv = p_bar(static_cast<std::uint32_t>(c) / p_bar.b_states(),
                              static_cast<std::uint32_t>(c) % p_bar.b_states());
      entries.emplace_back(2 * c, -(pv + delta));
      entries.emplace_back(2 * c + 1, -(pv - delta));
    }
    entries.emplace_back(mass, -1.0);
    lp.add_variable(0.0, entries, 0.0, lp::LinearProgram<double>::kInfinity, "alpha");
  }
  return lp;
}

namespace {

BenchmarkRun run_benchmark(const ResponseSpace& s, const Query& q_in, const Observation* w,
                           const ProbabilityTable& p, double budget_s) {
  const CausalGraph& g = s.graph();
  require_valid(g);
  validate_query(g, q_in);
  if (w) validate_observation(g, q_in, *w);
  if (p.a_count() != g.a_count() || p.b_count() != g.b_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "probability table does not match the graph");
  }
  const Query q = reduce_query(g, q_in);
  const auto start = Clock::now();
  BenchmarkRun run;

  // Per-hyperarc state: c^L, c^U, and (with an observation) the running
  // d^L / d^U before the final multiplication.
  std::unordered_map<std::uint64_t, std::uint8_t> state;
  ResponseIndex r(s.b_count(), 0);
  bool more = true;
  while (more) {
    if ((run.visited & 0xfff) == 0 && seconds_since(start) > budget_s) {
      run.seconds = seconds_since(start);
      return run;
    }
    const Membership m = membership(s, q, w, r);
    auto [it, fresh] = state.try_emplace(m.hyperarc, std::uint8_t(kFlagCL | kFlagDL));
    std::uint8_t& f = it->second;
    if ((f & kFlagCL) && !m.in_rq) f &= ~kFlagCL;
    if (!(f & kFlagCU) && m.in_rq) f |= kFlagCU;
    if (w) {
      if ((f & kFlagDL) && !m.in_rw) f &= ~kFlagDL;
      if (!(f & kFlagDU) && m.in_rw) f |= kFlagDU;
    }
    ++run.visited;
    more = s.next(r);
  }

  PrunedProblem& out = run.problem;
  out.graph = g;
  out.query = q;
  out.has_observation = w != nullptr;
  if (w) out.observation = *w;
  std::vector<std::pair<std::uint64_t, std::uint8_t>> sorted(state.begin(), state.end());
  std::sort(sorted.begin(), sorted.end());
  for (auto [code, f] : sorted) {
    std::uint8_t flags = f & (kFlagCL | kFlagCU);
    if (w) {
      if (f & kFlagDL) flags |= kFlagInRW;
      if ((f & kFlagDL) && (f & kFlagCL)) flags |= kFlagDL;
      if ((f & kFlagDU) && (f & kFlagCU)) flags |= kFlagDU;
    }
    out.codes.push_back(code);
    out.flags.push_back(flags);
  }
  run.completed = true;
  run.seconds = seconds_since(start);
  return run;
}

}  // namespace

BenchmarkRun algorithm3_benchmark(const ResponseSpace& s, const Query& q,
                                  const ProbabilityTable& p, double budget_s) {
  return run_benchmark(s, q, nullptr, p, budget_s);
}

BenchmarkRun algorithm4_benchmark(const ResponseSpace& s, const Query& q, const Observation& w,
                                  const ProbabilityTable& p, double budget_s) {
  return run_benchmark(s, q, &w, p, budget_s);
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> class_sizes(const ResponseSpace& s,
                                                                 std::uint64_t cap) {
  require_enumerable(s, cap);
  std::unordered_map<std::uint64_t, std::uint64_t> sizes;
  ResponseIndex r(s.b_count(), 0);
  do {
    ++sizes[induced_hyperarc(s, r)];
  } while (s.next(r));
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out(sizes.begin(), sizes.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool partition_check(const ResponseSpace& s, std::uint64_t cap) {
  const auto sizes = class_sizes(s, cap);
  std::uint64_t total = 0;
  for (const auto& [code, n] : sizes) total += n;
  if (total != (std::uint64_t{1} << s.count().log2)) return false;
  const auto valid = enumerate_valid(s.graph());
  if (valid.size() != sizes.size()) return false;
  for (std::size_t k = 0; k < valid.size(); ++k) {
    if (valid[k] != sizes[k].first || sizes[k].second == 0) return false;
  }
  return true;
}

}  // namespace cbounds
