#include "symsdp/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "symsdp/assemble.hpp"
#include "symsdp/detail/expr_parser.hpp"

namespace symsdp {

using nlohmann::json;

namespace {

const char* kKeys[] = {"scenario", "level", "group", "irreps", "mode", "tower", "denom_bound", "tolerances", "realization",
                       "keep_blocks", "certificate"};

template <class T>
T get(const json& j, const char* key, const char* what) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SpecError(std::string("'") + key + "' must be " + what);
  }
}

RelabelingSpec relabeling_from(const json& j) {
  if (!j.is_object()) throw SpecError("relabeling must be an object");
  RelabelingSpec r;
  r.parties = get<std::vector<int>>(j, "parties", "a list of integers");
  r.settings = get<std::vector<std::vector<int>>>(j, "settings", "a list of integer lists");
  r.outcomes = get<std::vector<std::vector<std::vector<int>>>>(j, "outcomes", "a nested list of integers");
  return r;
}

IrrepSpec irrep_from(const json& j) {
  if (!j.is_object()) throw SpecError("irrep must be an object");
  IrrepSpec r;
  r.label = get<std::string>(j, "label", "a string");
  r.generators = get<std::vector<std::vector<std::vector<std::string>>>>(j, "generators", "a list of matrices of scalar strings");
  return r;
}

}  // namespace

ProblemSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("malformed problem description: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("problem description must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : kKeys) known = known || k == key;
    if (!known) throw SpecError("unknown key '" + k + "'");
  }
  ProblemSpec s;
  if (!j.contains("scenario")) throw SpecError("missing 'scenario'");
  const auto& sc = j["scenario"];
  if (sc.is_string()) {
    s.scenario = sc.get<std::string>();
  } else if (sc.is_object()) {
    s.scenario = sc.value("name", "custom");
    s.outcomes = get<std::vector<std::vector<int>>>(sc, "outcomes", "a list of per-party outcome counts");
    s.objective = get<std::string>(sc, "objective", "a polynomial string");
  } else {
    throw SpecError("'scenario' must be a builtin name or an object");
  }
  if (j.contains("level")) s.level = get<std::string>(j, "level", "a string such as \"1\" or \"1+AB\"");
  if (j.contains("group")) {
    const auto& g = j["group"];
    if (g.is_string()) {
      s.group = g.get<std::string>();
    } else if (g.is_object() && g.contains("relabelings") && g["relabelings"].is_array()) {
      s.group = "explicit";
      for (const auto& r : g["relabelings"]) s.relabelings.push_back(relabeling_from(r));
      if (s.relabelings.empty()) throw SpecError("explicit group needs at least one relabeling");
    } else {
      throw SpecError("'group' must be a name or {\"relabelings\": [...]}");
    }
  }
  if (j.contains("irreps")) {
    const auto& r = j["irreps"];
    if (r.is_string()) {
      s.irreps = r.get<std::string>();
    } else if (r.is_array()) {
      s.irreps = "explicit";
      for (const auto& x : r) s.irrep_list.push_back(irrep_from(x));
    } else {
      throw SpecError("'irreps' must be a name or a list");
    }
  }
  if (j.contains("mode")) s.mode = get<std::string>(j, "mode", "\"numeric\" or \"exact\"");
  if (s.mode != "numeric" && s.mode != "exact") throw SpecError("'mode' must be \"numeric\" or \"exact\"");
  if (j.contains("tower")) {
    const auto& t = j["tower"];
    if (!t.is_object()) throw SpecError("'tower' must be {\"radicands\": [...], \"imaginary\": bool}");
    s.tower = get<std::vector<std::uint64_t>>(t, "radicands", "a list of positive integers");
    if (t.contains("imaginary")) s.tower_imaginary = get<bool>(t, "imaginary", "a boolean");
  }
  if (j.contains("denom_bound")) s.denom_bound = get<long>(j, "denom_bound", "an integer");
  if (s.denom_bound < 1) throw SpecError("'denom_bound' must be positive");
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw SpecError("'tolerances' must be an object");
    for (const auto& [k, v] : t.items())
      if (k != "solver" && k != "rank") throw SpecError("unknown tolerance '" + k + "'");
    if (t.contains("solver")) s.tol = get<double>(t, "solver", "a number");
    if (t.contains("rank")) s.tol_rank = get<double>(t, "rank", "a number");
    if (!(s.tol > 0) || !(s.tol_rank > 0)) throw SpecError("tolerances must be positive");
  }
  if (j.contains("realization")) s.realization = get<std::string>(j, "realization", "a string");
  if (j.contains("keep_blocks")) s.keep_blocks = get<std::vector<std::size_t>>(j, "keep_blocks", "a list of block indices");
  if (j.contains("certificate")) s.certificate = get<std::string>(j, "certificate", "a path");
  return s;
}

ProblemSpec read_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SpecError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_spec(ss.str());
}

std::string print_spec(const ProblemSpec& s) {
  json j = json::object();
  if (s.outcomes.empty())
    j["scenario"] = s.scenario;
  else
    j["scenario"] = {{"name", s.scenario}, {"outcomes", s.outcomes}, {"objective", s.objective}};
  j["level"] = s.level;
  if (s.group == "explicit") {
    json r = json::array();
    for (const auto& x : s.relabelings) r.push_back({{"parties", x.parties}, {"settings", x.settings}, {"outcomes", x.outcomes}});
    j["group"] = {{"relabelings", r}};
  } else {
    j["group"] = s.group;
  }
  if (s.irreps == "explicit") {
    json r = json::array();
    for (const auto& x : s.irrep_list) r.push_back({{"label", x.label}, {"generators", x.generators}});
    j["irreps"] = r;
  } else {
    j["irreps"] = s.irreps;
  }
  j["mode"] = s.mode;
  if (!s.tower.empty() || s.tower_imaginary) j["tower"] = {{"radicands", s.tower}, {"imaginary", s.tower_imaginary}};
  j["denom_bound"] = s.denom_bound;
  j["tolerances"] = {{"solver", s.tol}, {"rank", s.tol_rank}};
  if (!s.realization.empty()) j["realization"] = s.realization;
  if (!s.keep_blocks.empty()) j["keep_blocks"] = s.keep_blocks;
  if (!s.certificate.empty()) j["certificate"] = s.certificate;
  return j.dump(2) + "\n";
}

namespace {

using Clock = std::chrono::steady_clock;

bool invalid_input(const std::exception& e) {
  return dynamic_cast<const SpecError*>(&e) || dynamic_cast<const ExactUnsupported*>(&e) ||
         dynamic_cast<const ScenarioError*>(&e) || dynamic_cast<const detail::ParseError*>(&e) ||
         dynamic_cast<const RelaxationError*>(&e) || dynamic_cast<const SymmetryError*>(&e) ||
         dynamic_cast<const DecompositionError*>(&e) || dynamic_cast<const CertificateError*>(&e) ||
         dynamic_cast<const FieldError*>(&e);
}

// Runs f, relabelling any failure with the stage name.
template <class F>
auto stage(const std::string& name, const PipelineOptions& opt, F&& f) {
  auto t0 = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      if (opt.log) opt.log(name + " done in " + std::to_string(std::chrono::duration<double>(Clock::now() - t0).count()) + " s");
    } else {
      auto r = f();
      if (opt.log) opt.log(name + " done in " + std::to_string(std::chrono::duration<double>(Clock::now() - t0).count()) + " s");
      return r;
    }
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what(), invalid_input(e));
  }
}

struct Built {
  BellExpression e;
  GeneratingSequence q;
  MomentStructure ms;
  std::optional<FiniteGroup> g;
  std::string group_desc = "none";
  std::optional<SymmetrizedMoments> sm;
  std::optional<IsotypicDecomposition<Scalar>> dec;
  std::optional<IsotypicDecomposition<Complex>> cdec;
  BlockSdpProblem p;
  bool symmetrized() const { return dec || cdec; }
};

ExactMatrix parse_matrix(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty() || rows[0].empty()) throw SpecError("irrep matrix is empty");
  ExactMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw SpecError("irrep matrix rows have different lengths");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = Scalar::parse(rows[i][j]);
  }
  return m;
}

std::vector<int> parse_orders(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw SpecError("bad cyclic order '" + item + "'");
    }
  }
  if (out.empty()) throw SpecError("abelian irreps need orders, e.g. abelian:2,2");
  return out;
}

Built build(const ProblemSpec& spec, const PipelineOptions& opt, bool build_problem = true) {
  Built b;
  stage("scenario", opt, [&] {
    if (!spec.outcomes.empty()) {
      Scenario sc(spec.outcomes);
      b.e = {spec.scenario.empty() ? "custom" : spec.scenario, sc, Polynomial::parse(spec.objective, sc), std::nullopt};
      if (!b.e.poly.is_hermitian()) throw SpecError("objective is not self-adjoint");
    } else {
      b.e = builtin_expression(spec.scenario);
    }
  });
  stage("relaxation", opt, [&] {
    b.q = generating_sequence(b.e.scenario, spec.level);
    b.ms = build_moment_structure(b.e.scenario, b.e.poly, b.q);
  });
  int dihedral_d = 0;
  stage("symmetry", opt, [&] {
    std::vector<ExactMatrix> gens;
    if (spec.group == "none") return;
    if (spec.group == "explicit") {
      for (const auto& r : spec.relabelings) gens.push_back(relabeling_matrix(b.e.scenario, r.parties, r.settings, r.outcomes));
      b.group_desc = "explicit (" + std::to_string(gens.size()) + " generators)";
    } else if (spec.group.rfind("dihedral-", 0) == 0) {
      int order = 0;
      try {
        order = std::stoi(spec.group.substr(9));
      } catch (const std::logic_error&) {
      }
      if (order < 16 || order % 8 != 0) throw SpecError("dihedral group order must be 8d with d >= 2");
      dihedral_d = order / 8;
      if (!(b.e.scenario == Scenario::uniform(2, 2, dihedral_d)))
        throw SpecError(spec.group + " acts on the 2-party, 2-setting, " + std::to_string(dihedral_d) + "-outcome scenario");
      gens = cglmp_symmetry_generators(dihedral_d);
      b.group_desc = spec.group;
    } else {
      throw SpecError("unknown group '" + spec.group + "'");
    }
    b.g = FiniteGroup::closure(gens);
    if (!check_invariance(b.e.poly, b.e.scenario, *b.g)) throw SymmetryError("objective is not invariant under the group");
  });
  if (!b.g) {
    if (spec.irreps != "auto" && spec.irreps != "none") throw PipelineError("irreps", "irreps given without a group", true);
    if (!spec.keep_blocks.empty()) throw PipelineError("mask", "a block mask needs a symmetry group", true);
    if (build_problem) b.p = moment_problem(b.ms);
    return b;
  }
  stage("irreps", opt, [&] {
    auto rho = representation_on(b.ms.sequence.entries, b.e.scenario, *b.g);
    std::string kind = spec.irreps;
    if (kind == "auto") {
      if (dihedral_d) kind = "dihedral";
      else throw SpecError("no default irreps for an explicit group; give \"abelian:<orders>\" or a list");
    }
    bool exact_mode = spec.mode == "exact";
    if (kind == "dihedral") {
      if (!dihedral_d) throw SpecError("dihedral irreps need a dihedral group");
      if (dihedral_irreps_exact(dihedral_d)) {
        b.dec = decompose(*b.g, rho, dihedral_irreps(dihedral_d));
      } else {
        if (exact_mode) dihedral_irreps(dihedral_d);  // throws ExactUnsupported
        Representation<Complex> rc;
        for (const auto& m : rho.images) rc.images.push_back(convert<Complex>(m));
        b.cdec = decompose(*b.g, rc, dihedral_irreps_numeric(dihedral_d));
      }
    } else if (kind.rfind("abelian:", 0) == 0) {
      auto orders = parse_orders(kind.substr(8));
      if (abelian_irreps_exact(orders)) {
        b.dec = decompose(*b.g, rho, abelian_irreps(orders));
      } else {
        if (exact_mode) abelian_irreps(orders);
        Representation<Complex> rc;
        for (const auto& m : rho.images) rc.images.push_back(convert<Complex>(m));
        b.cdec = decompose(*b.g, rc, abelian_irreps_numeric(orders));
      }
    } else if (kind == "explicit") {
      std::vector<Irrep<Scalar>> irr;
      for (const auto& s : spec.irrep_list) {
        Irrep<Scalar> x;
        x.label = s.label;
        for (const auto& m : s.generators) x.gen_images.push_back(parse_matrix(m));
        if (x.gen_images.empty()) throw SpecError("irrep " + s.label + " has no generator images");
        irr.push_back(std::move(x));
      }
      b.dec = decompose(*b.g, rho, irr);
    } else {
      throw SpecError("unknown irreps '" + kind + "'");
    }
  });
  stage("symmetrize", opt, [&] {
    b.sm = symmetrize_moments(b.ms, *b.g);
    if (build_problem) b.p = b.dec ? symmetrized_problem(*b.sm, *b.dec) : symmetrized_problem(*b.sm, *b.cdec);
  });
  return b;
}

BlockSdpProblem masked(const BlockSdpProblem& p, const std::vector<std::size_t>& keep) {
  std::set<std::size_t> k;
  for (auto i : keep) {
    if (i < 1 || i > p.num_blocks())
      throw PipelineError("mask", "block " + std::to_string(i) + " out of range 1.." + std::to_string(p.num_blocks()), true);
    k.insert(i - 1);
  }
  std::set<std::size_t> zero;
  for (std::size_t i = 0; i < p.num_blocks(); ++i)
    if (!k.count(i)) zero.insert(i);
  return restrict_blocks(p, zero);
}

FieldTower auto_tower(const ProblemSpec& spec, const Built& b) {
  if (!spec.tower.empty() || spec.tower_imaginary) return FieldTower(spec.tower, spec.tower_imaginary);
  std::vector<Scalar> xs;
  if (b.e.quantum_bound) xs.push_back(*b.e.quantum_bound);
  if (b.p.b_exact) xs.insert(xs.end(), b.p.b_exact->begin(), b.p.b_exact->end());
  if (b.p.A_exact)
    for (const auto& l : *b.p.A_exact)
      for (const auto& m : l) xs.insert(xs.end(), m.data().begin(), m.data().end());
  return FieldTower::of_range(xs.begin(), xs.end());
}

std::string fixed(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}
std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

}  // namespace

BlockSdpProblem pipeline_problem(const ProblemSpec& spec) {
  PipelineOptions opt;
  auto b = build(spec, opt, false);
  if (!b.symmetrized()) {
    auto cr = conjugation_reduction(b.ms);
    return moment_problem(cr.applied ? cr.reduced : b.ms);
  }
  auto p = b.dec ? symmetrized_problem(*b.sm, *b.dec) : symmetrized_problem(*b.sm, *b.cdec);
  return spec.keep_blocks.empty() ? p : masked(p, spec.keep_blocks);
}

Report run_pipeline(const ProblemSpec& spec, const PipelineOptions& opt) {
  auto b = build(spec, opt);
  Report r;
  r.name = b.e.name;
  r.level = b.q.tag;
  r.group_desc = b.group_desc;
  r.group_order = b.g ? b.g->order() : 1;
  r.mode = spec.mode;
  r.q_size = b.ms.n();
  r.m_size = b.ms.m();
  r.m_tilde = b.sm ? b.sm->size() : b.ms.m();
  if (b.dec) {
    for (const auto& c : b.dec->components) r.blocks.push_back({c.label, c.dim, c.multiplicity});
  } else if (b.cdec) {
    for (const auto& c : b.cdec->components) r.blocks.push_back({c.label, c.dim, c.multiplicity});
  } else {
    r.blocks.push_back({"trivial", 1, b.ms.n()});
  }
  r.keep_blocks = spec.keep_blocks;
  if (!opt.solve) return r;

  SdpOptions so;
  so.tol = spec.tol;
  SdpSolution s, sm;
  BlockSdpProblem pm;
  stage("solve", opt, [&] {
    s = solve(b.p, so);
    r.solved = true;
    r.status = to_string(s.status);
    r.converged = converged(s.status);
    r.message = s.message;
    r.primal = s.primal_value;
    r.dual = s.dual_value;
    r.gap = s.gap;
    r.primal_residual = s.primal_residual;
    r.dual_residual = s.dual_residual;
    r.iterations = s.iterations;
    r.lp_exact = s.exact;
    if (s.exact) r.dual_exact = s.value_exact;
    if (!converged(s.status)) return;
    auto rz = complementarity_ranks(b.p, s, spec.tol_rank);
    for (std::size_t i = 0; i < r.blocks.size(); ++i) r.blocks[i].rank_z = rz.blocks[i].z;
    r.rank_warning = rz.warning;
    if (spec.keep_blocks.empty()) {
      for (std::size_t i = 0; i < r.blocks.size(); ++i) r.blocks[i].rank_x = rz.blocks[i].x;
      pm = b.p;
      sm = s;
      return;
    }
    pm = masked(b.p, spec.keep_blocks);
    sm = solve(pm, so);
    if (!converged(sm.status))
      throw PipelineError("mask", "masked problem is " + to_string(sm.status) + ": " + sm.message, true);
    r.masked_value = sm.primal_value;
    auto rx = complementarity_ranks(pm, sm, spec.tol_rank);
    for (std::size_t i = 0; i < r.blocks.size(); ++i) r.blocks[i].rank_x = rx.blocks[i].x;
  });
  if (spec.mode != "exact") return r;
  if (!converged(s.status)) throw PipelineError("certificate", "no optimal solution to round (" + r.status + ")", true);
  if (b.cdec) throw PipelineError("certificate", "exact mode needs exact irreps", true);

  stage("certificate", opt, [&] {
    ExactBlockSolution ex;
    if (!spec.realization.empty()) {
      if (spec.realization != "cglmp-optimal") throw SpecError("unknown realization '" + spec.realization + "'");
      if (b.e.scenario.parties() != 2 || b.e.scenario.settings(0) != 2) throw SpecError("cglmp-optimal realization needs a CGLMP scenario");
      int d = b.e.scenario.outcomes(0, 0);
      const auto& basis = b.sm ? b.sm->tilde_basis : b.ms.basis;
      auto y = realization_moments(cglmp_optimal_realization(d), basis);
      Scalar norm = y[0];
      for (auto& v : y) v = v / norm;
      ex = complementary_solution(pm, y, &sm, spec.denom_bound);
    } else {
      RoundingOptions ro;
      ro.denom_bound = spec.denom_bound;
      ex = round_to_exact(pm, sm, auto_tower(spec, b), ro);
    }
    Scalar mu = check_block_solution(pm, ex);
    auto sos = b.dec ? extract_sos(ex, *b.dec, b.q) : extract_sos(ex.X[0], mu, b.q);
    auto check = verify_sos(sos, b.e.poly);
    r.mu = mu;
    r.certificate_terms = sos.terms.size();
    r.verified = check.valid;
    r.verify_detail = check.difference;
    std::string path = opt.certificate_path.empty() ? spec.certificate : opt.certificate_path;
    if (!path.empty()) {
      Certificate c{b.e.name, b.e.scenario, b.e.poly, b.q.entries, sos};
      std::ofstream f(path);
      if (!f) throw CertificateError("cannot write " + path);
      f << write_certificate(c);
      r.certificate_path = path;
    }
  });
  return r;
}

namespace {

std::string rank_cell(int v) { return v < 0 ? "-" : std::to_string(v); }

std::string block_table(const Report& r, bool ranks) {
  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  std::vector<std::string> idx, lab, dim, mult, rz, rx;
  for (std::size_t i = 0; i < r.blocks.size(); ++i) {
    const auto& b = r.blocks[i];
    idx.push_back(std::to_string(i + 1));
    lab.push_back(b.label);
    dim.push_back(std::to_string(b.dim));
    mult.push_back(std::to_string(b.multiplicity));
    rz.push_back(rank_cell(b.multiplicity ? b.rank_z : -1));
    rx.push_back(rank_cell(b.multiplicity ? b.rank_x : -1));
  }
  rows.push_back({"i", idx});
  rows.push_back({"irrep", lab});
  rows.push_back({"d_i", dim});
  rows.push_back({"m_i", mult});
  if (ranks) {
    rows.push_back({"rank Z~", rz});
    rows.push_back({"rank X~", rx});
  }
  std::vector<std::size_t> w(r.blocks.size(), 1);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.second.size(); ++i) w[i] = std::max(w[i], row.second[i].size());
  std::ostringstream os;
  for (const auto& row : rows) {
    std::string line = row.first;
    line.resize(10, ' ');
    for (std::size_t i = 0; i < row.second.size(); ++i) {
      std::string cell = row.second[i];
      line += std::string(w[i] - cell.size() + 2, ' ') + cell;
    }
    os << line << "\n";
  }
  return os.str();
}

void field(std::ostringstream& os, const std::string& key, const std::string& value) {
  std::string k = key;
  k.resize(13, ' ');
  os << k << value << "\n";
}

}  // namespace

std::string Report::tables() const {
  std::ostringstream os;
  field(os, "problem", name);
  field(os, "relaxation", level);
  field(os, "group", group_desc + (group_order > 1 ? " (order " + std::to_string(group_order) + ")" : ""));
  field(os, "|Q|", std::to_string(q_size));
  field(os, "|M|", std::to_string(m_size) + " (counting M_0)");
  field(os, "|M~|", std::to_string(m_tilde));
  os << "\n" << block_table(*this, false);
  return os.str();
}

std::string Report::render() const {
  std::ostringstream os;
  field(os, "problem", name);
  field(os, "relaxation", level);
  field(os, "group", group_desc + (group_order > 1 ? " (order " + std::to_string(group_order) + ")" : ""));
  field(os, "mode", mode);
  field(os, "|Q|", std::to_string(q_size));
  field(os, "|M|", std::to_string(m_size) + " (counting M_0)");
  field(os, "|M~|", std::to_string(m_tilde));
  os << "\n" << block_table(*this, solved) << "\n";
  if (!solved) return os.str();
  field(os, "status", status + " (" + (lp_exact ? std::string("exact LP") : std::to_string(iterations) + " iterations") + ")");
  if (!message.empty()) field(os, "message", message);
  if (dual_exact) field(os, "d*", dual_exact->str() + " = " + fixed(dual));
  else field(os, "d*", fixed(dual));
  field(os, "p*", fixed(primal));
  field(os, "gap", sci(gap));
  field(os, "residuals", "primal " + sci(primal_residual) + ", dual " + sci(dual_residual));
  if (!rank_warning.empty()) field(os, "warning", rank_warning);
  if (!keep_blocks.empty()) {
    std::string k;
    for (auto i : keep_blocks) k += (k.empty() ? "" : ", ") + std::to_string(i);
    field(os, "mask", "keep {" + k + "}" + (masked_value ? ", value " + fixed(*masked_value) : ""));
  }
  if (mu) {
    field(os, "mu", mu->str() + " = " + fixed(mu->to_double()));
    field(os, "sos terms", std::to_string(certificate_terms));
    field(os, "certificate", certificate_path.empty() ? "(not written)" : certificate_path);
    field(os, "verdict", *verified ? "VALID" : "INVALID: " + verify_detail);
  }
  return os.str();
}

}  // namespace symsdp
