#include "cbounds/hyperarc.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <tuple>
#include <istream>
#include <ostream>

namespace cbounds {

namespace {

struct NodeMasks {
  int a = 0;
  int b = 0;
  std::vector<Mask> parents;  // pa(j) for the B-nodes, in B-local order
};

NodeMasks node_masks(const CausalGraph& g) {
  NodeMasks nm{g.a_count(), g.b_count(), {}};
  for (int t = 0; t < nm.b; ++t) nm.parents.push_back(g.parents(nm.a + t));
  return nm;
}

void check_dims(const Hyperarc& h, const CausalGraph& g) {
  if (h.a_count() != g.a_count() || h.b_count() != g.b_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "hyperarc dimensions do not match the graph");
  }
}

/// Depth-first search over rows v_A = 0, 1, ...; each row only offers entries
/// consistent with the rows already fixed, in ascending order.
class Enumerator {
 public:
  Enumerator(const CausalGraph& g, const std::function<void(std::uint64_t)>& visit)
      : nm_(node_masks(g)), rows_(std::uint32_t{1} << nm_.a), visit_(visit) {
    full_.resize(rows_);
    options_.resize(rows_);
  }

  void run() { descend(0, 0); }

 private:
  void collect(std::uint32_t r, int t, Mask partial, std::vector<std::uint32_t>& out) const {
    if (t == nm_.b) {
      out.push_back(static_cast<std::uint32_t>(partial >> nm_.a));
      return;
    }
    const int j = nm_.a + t;
    const Mask pa = nm_.parents[t];
    const Mask pattern = partial & pa;
    for (std::uint32_t u = 0; u < r; ++u) {
      if ((full_[u] & pa) == pattern) {
        collect(r, t + 1, partial | (full_[u] & bit(j)), out);
        return;
      }
    }
    collect(r, t + 1, partial, out);
    collect(r, t + 1, partial | bit(j), out);
  }

  void descend(std::uint32_t r, std::uint64_t code) {
    if (r == rows_) {
      visit_(code);
      return;
    }
    auto& opts = options_[r];
    opts.clear();
    collect(r, 0, r, opts);
    std::sort(opts.begin(), opts.end());
    for (std::uint32_t e : opts) {
      full_[r] = r | (Mask{e} << nm_.a);
      descend(r + 1, (code << nm_.b) | e);
    }
  }

  NodeMasks nm_;
  std::uint32_t rows_;
  const std::function<void(std::uint64_t)>& visit_;
  std::vector<Mask> full_;
  std::vector<std::vector<std::uint32_t>> options_;
};

std::uint64_t fnv(std::uint64_t h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::array<char, 4> kMagic = {'C', 'B', 'H', 'A'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) {
    throw Error(ErrorCode::kParse, "truncated hyperarc dump");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return v;
}

}  // namespace

Hyperarc Hyperarc::from_table(int a_count, int b_count, const std::vector<std::uint32_t>& table) {
  if (table.size() != (std::size_t{1} << a_count)) {
    throw Error(ErrorCode::kDimensionMismatch, "hyperarc table needs 2^|A| entries");
  }
  std::uint64_t code = 0;
  for (std::uint32_t e : table) {
    if (e >> b_count) throw Error(ErrorCode::kDimensionMismatch, "hyperarc entry exceeds 2^|B|");
    code = (code << b_count) | e;
  }
  return {a_count, b_count, code};
}

std::vector<std::uint32_t> Hyperarc::table() const {
  std::vector<std::uint32_t> out(rows());
  for (std::uint32_t v = 0; v < rows(); ++v) out[v] = (*this)(v);
  return out;
}

int hyperarc_bits(const CausalGraph& g) {
  const int a = g.a_count();
  if (a > 5 || g.b_count() * (1 << a) > kMaxHyperarcBits) {
    throw Error(ErrorCode::kCapacityExceeded,
                "hyperarc tables of |B|*2^|A| bits exceed the enumeration limit of " +
                    std::to_string(kMaxHyperarcBits));
  }
  return g.b_count() * (1 << a);
}

bool is_valid(const Hyperarc& h, const CausalGraph& g) {
  check_dims(h, g);
  const NodeMasks nm = node_masks(g);
  const std::uint32_t rows = h.rows();
  for (std::uint32_t v1 = 0; v1 < rows; ++v1) {
    const Mask f1 = h.row(v1);
    for (std::uint32_t v2 = v1 + 1; v2 < rows; ++v2) {
      const Mask diff = f1 ^ h.row(v2);
      for (int t = 0; t < nm.b; ++t) {
        if ((diff & nm.parents[t]) == 0 && (diff >> (nm.a + t)) & 1U) return false;
      }
    }
  }
  return true;
}

void enumerate_valid(const CausalGraph& g, const std::function<void(std::uint64_t)>& visit) {
  hyperarc_bits(g);
  Enumerator(g, visit).run();
}

std::vector<std::uint64_t> enumerate_valid(const CausalGraph& g) {
  std::vector<std::uint64_t> out;
  enumerate_valid(g, [&](std::uint64_t c) { out.push_back(c); });
  return out;
}

std::uint64_t count_valid(const CausalGraph& g) {
  std::uint64_t n = 0;
  enumerate_valid(g, [&](std::uint64_t) { ++n; });
  return n;
}

int coeff_cL(const Hyperarc& h, const CausalGraph& g, const Query& q, Mask c_of_q) {
  const Mask pinned = g.a_set() & c_of_q;
  for (std::uint32_t v = 0; v < h.rows(); ++v) {
    const Mask full = h.row(v);
    if (((full ^ q.context.values()) & pinned) == 0 && q.intervention.matched_by(full) &&
        q.outcome.matched_by(full)) {
      return 1;
    }
  }
  return 0;
}

int coeff_cU(const Hyperarc& h, const CausalGraph& g, const Query& q, Mask c_of_q) {
  const Mask pinned = g.a_set() & c_of_q;
  for (std::uint32_t v = 0; v < h.rows(); ++v) {
    const Mask full = h.row(v);
    if (((full ^ q.context.values()) & pinned) == 0 && q.intervention.matched_by(full) &&
        !q.outcome.matched_by(full)) {
      return 0;
    }
  }
  return 1;
}

namespace {

struct ExactSearch {
  const Hyperarc& h;
  const CausalGraph& g;
  const Query& q;
  Mask relevant;
  bool all = true;
  bool any = false;

  bool done() const { return !all && any; }

  void visit(int j, Mask v) {
    if (done()) return;
    if (j == g.size()) {
      if (q.outcome.matched_by(v)) any = true;
      else all = false;
      return;
    }
    if (!(relevant & bit(j))) return visit(j + 1, v);
    if (q.intervention.contains(j)) {
      return visit(j + 1, v | (static_cast<Mask>(q.intervention.value(j)) << j));
    }
    const Mask pa = g.parents(j);
    for (std::uint32_t u = 0; u < h.rows(); ++u) {
      const Mask row = h.row(u);
      if ((row & pa) == (v & pa)) return visit(j + 1, v | (row & bit(j)));
    }
    visit(j + 1, v);
    visit(j + 1, v | bit(j));
  }
};

}  // namespace

std::pair<int, int> coefficients_exact(const Hyperarc& h, const CausalGraph& g, const Query& q,
                                       Mask c_of_q) {
  ExactSearch s{h, g, q, c_of_q};
  s.visit(g.a_count(), q.context.values() & g.a_set());
  return {s.all ? 1 : 0, s.any ? 1 : 0};
}

ObservationMembership obs_membership(const Hyperarc& h, const CausalGraph& g, const Query& q,
                                     const Observation& w, Mask c_of_w) {
  (void)g;
  ObservationMembership m;
  for (std::uint32_t v = 0; v < h.rows(); ++v) {
    const Mask full = h.row(v);
    if (((full ^ q.context.values()) & c_of_w) != 0) continue;
    if (w.observed.matched_by(full)) m.in_rw = 1;
    else m.disjoint_rw = 1;
  }
  if (m.in_rw + m.disjoint_rw != 1) {
    throw Error(ErrorCode::kInternal, "observation dichotomy violated for hyperarc " +
                                          std::to_string(h.code()));
  }
  return m;
}

int coeff_dL(int c_l, const ObservationMembership& m) { return c_l * m.in_rw; }

int coeff_dU(int c_u, const ObservationMembership& m) { return c_u * (1 - m.disjoint_rw); }

PrunedProblem build_pruned(const CausalGraph& g, const Query& q, const Observation* w,
                           CoefficientRule rule) {
  require_valid(g);
  validate_query(g, q);
  if (w) validate_observation(g, q, *w);
  const Query rq = reduce_query(g, q);
  const Mask c_q = critical_for_query(g, rq);
  const Mask c_w = w ? critical_for_observation(g, *w) : 0;

  PrunedProblem out;
  out.graph = g;
  out.query = rq;
  out.has_observation = w != nullptr;
  if (w) out.observation = *w;
  const int a = g.a_count();
  const int b = g.b_count();
  enumerate_valid(g, [&](std::uint64_t code) {
    const Hyperarc h(a, b, code);
    int cl;
    int cu;
    if (rule == CoefficientRule::kExact) {
      std::tie(cl, cu) = coefficients_exact(h, g, rq, c_q);
    } else {
      cl = coeff_cL(h, g, rq, c_q);
      cu = coeff_cU(h, g, rq, c_q);
    }
    std::uint8_t f = static_cast<std::uint8_t>((cl ? kFlagCL : 0) | (cu ? kFlagCU : 0));
    if (w) {
      const auto m = obs_membership(h, g, rq, *w, c_w);
      if (m.in_rw) f |= kFlagInRW;
      if (coeff_dL(cl, m)) f |= kFlagDL;
      if (coeff_dU(cu, m)) f |= kFlagDU;
    }
    out.codes.push_back(code);
    out.flags.push_back(f);
  });
  return out;
}

namespace {

void check_table(const CausalGraph& g, const ProbabilityTable& p) {
  if (p.a_count() != g.a_count() || p.b_count() != g.b_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "probability table does not match the graph");
  }
}

}  // namespace

PrunedProblem algorithm1(const CausalGraph& g, const Query& q, const ProbabilityTable& p,
                         CoefficientRule rule) {
  check_table(g, p);
  return build_pruned(g, q, nullptr, rule);
}

PrunedProblem algorithm2(const CausalGraph& g, const Query& q, const Observation& w,
                         const ProbabilityTable& p, CoefficientRule rule) {
  check_table(g, p);
  return build_pruned(g, q, &w, rule);
}

std::uint64_t problem_hash(const CausalGraph& g, const Query& q, const Observation* w) {
  std::uint64_t h = fnv(0xcbf29ce484222325ULL, fingerprint(g));
  for (const Assignment* s : {&q.intervention, &q.outcome, &q.context}) {
    h = fnv(fnv(h, s->scope()), s->values());
  }
  if (w) h = fnv(fnv(fnv(h, 1), w->observed.scope()), w->observed.values());
  return h;
}

void write_pruned(std::ostream& os, const PrunedProblem& problem) {
  os.write(kMagic.data(), kMagic.size());
  put_u64(os, kVersion);
  put_u64(os, problem_hash(problem.graph, problem.query,
                           problem.has_observation ? &problem.observation : nullptr));
  put_u64(os, static_cast<std::uint64_t>(problem.graph.a_count()));
  put_u64(os, static_cast<std::uint64_t>(problem.graph.b_count()));
  put_u64(os, problem.size());
  for (std::size_t k = 0; k < problem.size(); ++k) {
    put_u64(os, problem.codes[k]);
    os.put(static_cast<char>(problem.flags[k]));
  }
}

PrunedProblem read_pruned(std::istream& is, const CausalGraph& g, const Query& q,
                          const Observation* w) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(ErrorCode::kParse, "not a hyperarc dump");
  }
  if (get_u64(is) != kVersion) throw Error(ErrorCode::kParse, "unsupported dump version");
  const Query rq = reduce_query(g, q);
  if (get_u64(is) != problem_hash(g, rq, w)) {
    throw Error(ErrorCode::kDimensionMismatch, "dump was built for a different problem");
  }
  const auto a = get_u64(is);
  const auto b = get_u64(is);
  if (a != static_cast<std::uint64_t>(g.a_count()) || b != static_cast<std::uint64_t>(g.b_count())) {
    throw Error(ErrorCode::kDimensionMismatch, "dump dimensions do not match the graph");
  }
  const auto n = get_u64(is);
  PrunedProblem out;
  out.graph = g;
  out.query = rq;
  out.has_observation = w != nullptr;
  if (w) out.observation = *w;
  out.codes.resize(n);
  out.flags.resize(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    out.codes[k] = get_u64(is);
    const int f = is.get();
    if (f == std::char_traits<char>::eof()) throw Error(ErrorCode::kParse, "truncated hyperarc dump");
    out.flags[k] = static_cast<std::uint8_t>(f);
  }
  return out;
}

}  // namespace cbounds
