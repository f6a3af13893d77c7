#include "cbounds/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace cbounds {

namespace {

using Json = nlohmann::ordered_json;

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("problem JSON: ") + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("problem JSON lacks \"") + key + "\"");
  }
  return j.at(key);
}

std::string as_name(const Json& j) {
  if (!j.is_string()) throw Error(ErrorCode::kParse, "node names must be strings");
  return j.get<std::string>();
}

int index_in(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  throw Error(ErrorCode::kParse, "unknown node '" + name + "'");
}

Assignment assignment(const CausalGraph& g, const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "assignments must be objects");
  std::vector<std::pair<std::string, int>> values;
  for (const auto& [name, v] : j.items()) {
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::kParse, "value of '" + name + "' must be 0 or 1");
    }
    values.emplace_back(name, v.get<int>());
  }
  return make_assignment(g, values);
}

Json assignment_json(const CausalGraph& g, const Assignment& a) {
  Json out = Json::object();
  for (int i : indices_of(a.scope())) out[g.name(i)] = a.value(i);
  return out;
}

Mask parse_bits(const std::string& s, int count, const char* what) {
  if (static_cast<int>(s.size()) != count) {
    throw Error(ErrorCode::kParse, std::string(what) + " '" + s + "' needs " +
                                       std::to_string(count) + " bits");
  }
  Mask m = 0;
  for (int i = 0; i < count; ++i) {
    if (s[i] == '1') m |= bit(i);
    else if (s[i] != '0') throw Error(ErrorCode::kParse, std::string(what) + " '" + s + "' is not binary");
  }
  return m;
}

std::string bits_text(Mask m, int count) {
  std::string s(count, '0');
  for (int i = 0; i < count; ++i) {
    if ((m >> i) & 1U) s[i] = '1';
  }
  return s;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  const auto last = s.find_last_not_of(" \t\r");
  return first == std::string::npos ? "" : s.substr(first, last - first + 1);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ProblemSpec parse_problem(const std::string& text) {
  const Json doc = parse_json(text);
  std::vector<std::string> names;
  for (const auto& n : field(doc, "nodes")) names.push_back(as_name(n));
  if (names.size() > static_cast<std::size_t>(kMaxNodes)) {
    throw Error(ErrorCode::kCapacityExceeded, "more than " + std::to_string(kMaxNodes) + " nodes");
  }
  Mask a_set = 0;
  for (const auto& n : field(doc, "a_set")) a_set |= bit(index_in(names, as_name(n)));
  std::vector<Mask> parents(names.size(), 0);
  const Json& pa = field(doc, "parents");
  if (!pa.is_object()) throw Error(ErrorCode::kParse, "\"parents\" must be an object");
  for (const auto& [child, list] : pa.items()) {
    const int c = index_in(names, child);
    for (const auto& p : list) parents[c] |= bit(index_in(names, as_name(p)));
  }
  std::vector<Mask> confounders;
  if (doc.contains("confounders")) {
    for (const auto& group : doc.at("confounders")) {
      Mask m = 0;
      for (const auto& n : group) m |= bit(index_in(names, as_name(n)));
      confounders.push_back(m);
    }
  }
  ProblemSpec spec;
  spec.graph = CausalGraph(names, a_set, parents, confounders);
  const Json& q = field(doc, "query");
  spec.query.intervention =
      q.contains("intervene") ? assignment(spec.graph, q.at("intervene")) : Assignment{};
  spec.query.outcome = assignment(spec.graph, field(q, "outcome"));
  spec.query.context = assignment(spec.graph, field(q, "context"));
  if (doc.contains("observe")) spec.observation = Observation{assignment(spec.graph, doc.at("observe"))};
  return spec;
}

ProblemSpec read_problem(const std::string& path) { return parse_problem(slurp(path)); }

std::string problem_json(const CausalGraph& g, const Query& q, const Observation* w) {
  Json doc;
  doc["nodes"] = g.names();
  Json a = Json::array();
  for (int i : indices_of(g.a_set())) a.push_back(g.name(i));
  doc["a_set"] = a;
  Json pa = Json::object();
  for (int j = 0; j < g.size(); ++j) {
    if (!g.parents(j)) continue;
    Json list = Json::array();
    for (int i : g.parent_list(j)) list.push_back(g.name(i));
    pa[g.name(j)] = list;
  }
  doc["parents"] = pa;
  doc["query"] = {{"intervene", assignment_json(g, q.intervention)},
                  {"outcome", assignment_json(g, q.outcome)},
                  {"context", assignment_json(g, q.context)}};
  if (w) doc["observe"] = assignment_json(g, w->observed);
  if (!g.declared_confounders().empty()) {
    Json groups = Json::array();
    for (Mask m : g.declared_confounders()) {
      Json group = Json::array();
      for (int i : indices_of(m)) group.push_back(g.name(i));
      groups.push_back(group);
    }
    doc["confounders"] = groups;
  }
  return doc.dump(2) + "\n";
}

ProbabilityTable parse_table(const CausalGraph& g, std::istream& in) {
  const int a = g.a_count();
  const int b = g.b_count();
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(Eigen::Index{1} << a, Eigen::Index{1} << b);
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(values.rows(), values.cols());
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    for (std::string part; std::getline(ss, part, ',');) parts.push_back(trim(part));
    const std::string where = "table line " + std::to_string(line_no);
    if (!header) {
      if (parts != std::vector<std::string>{"v_A", "v_B", "p"}) {
        throw Error(ErrorCode::kParse, where + ": expected header v_A,v_B,p");
      }
      header = true;
      continue;
    }
    if (parts.size() != 3) throw Error(ErrorCode::kParse, where + ": expected 3 fields");
    const Mask va = parse_bits(parts[0], a, "v_A");
    const Mask vb = parse_bits(parts[1], b, "v_B");
    double p = 0;
    const auto* end = parts[2].data() + parts[2].size();
    const auto res = std::from_chars(parts[2].data(), end, p);
    if (res.ec != std::errc() || res.ptr != end) {
      throw Error(ErrorCode::kParse, where + ": bad probability '" + parts[2] + "'");
    }
    if (seen(va, vb)++) throw Error(ErrorCode::kParse, where + ": duplicate cell");
    values(va, vb) = p;
  }
  if (!header) throw Error(ErrorCode::kParse, "table is empty");
  return ProbabilityTable(a, b, std::move(values));
}

ProbabilityTable read_table(const CausalGraph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return parse_table(g, in);
}

void write_table(std::ostream& out, const CausalGraph& g, const ProbabilityTable& p) {
  out << "v_A,v_B,p\n";
  for (std::uint32_t va = 0; va < p.a_states(); ++va) {
    for (std::uint32_t vb = 0; vb < p.b_states(); ++vb) {
      out << bits_text(va, g.a_count()) << ',' << bits_text(vb, g.b_count()) << ','
          << format_double(p(va, vb)) << '\n';
    }
  }
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string bounds_json(const Bounds& b) {
  Json j;
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  j["method"] = to_string(b.method);
  j["H_size"] = b.h_size;
  j["solve_ms"] = b.solve_ms;
  j["status"] = lp::to_string(b.status);
  return j.dump(2) + "\n";
}

}  // namespace cbounds
