#include "ppopt/artifact_io.hpp"

#include <fstream>

#include <json.hpp>

#include "ppopt/errors.hpp"
#include "ppopt/mpc.hpp"
#include "ppopt/poly_io.hpp"

namespace ppopt {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ArtifactError("malformed JSON in " + what);
  return j;
}

std::vector<std::string> string_list(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ArtifactError("missing or non-array key '" + key + "'");
  }
  std::vector<std::string> out;
  for (const auto& e : j[key]) {
    if (!e.is_string()) throw ArtifactError("key '" + key + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

json mpc_to_json(const MpcMetadata& m) {
  json j;
  j["state_vars"] = m.state_vars;
  j["input_vars"] = m.input_vars;
  j["horizon"] = m.horizon;
  j["dynamics"] = m.dynamics;
  if (m.state_bound) j["state_bound"] = *m.state_bound;
  j["dropped_constraints"] = m.dropped_constraints;
  return j;
}

MpcMetadata mpc_from_json(const json& j) {
  MpcMetadata m;
  m.state_vars = string_list(j, "state_vars");
  m.input_vars = string_list(j, "input_vars");
  m.horizon = j.at("horizon").get<int>();
  m.dynamics = string_list(j, "dynamics");
  if (j.contains("state_bound")) m.state_bound = j["state_bound"].get<double>();
  if (j.contains("dropped_constraints")) m.dropped_constraints = string_list(j, "dropped_constraints");
  return m;
}

}  // namespace

std::string monomial_to_string(const Monomial& m, const Ring& ring) {
  if (m.is_one()) return "1";
  std::string out;
  for (std::size_t v = 0; v < m.nvars(); ++v) {
    if (m.exp(v) == 0) continue;
    if (!out.empty()) out += "*";
    out += ring.name(v);
    if (m.exp(v) > 1) out += "^" + std::to_string(m.exp(v));
  }
  return out;
}

std::string program_hash(const ParametricProgram& p) {
  std::string canon;
  auto add = [&canon](const std::string& s) {
    canon += s;
    canon += '\x1f';
  };
  for (const auto& v : p.space().decision_names()) add(v);
  canon += '\x1e';
  for (const auto& v : p.space().multiplier_names()) add(v);
  canon += '\x1e';
  for (const auto& v : p.space().parameter_names()) add(v);
  canon += '\x1e';
  add(to_string(p.objective()));
  for (const auto& g : p.constraints()) add(to_string(g));
  std::uint64_t h = fnv1a(canon);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

ProblemFile parse_problem_text(const std::string& text) {
  json j = parse_json(text, "problem file");
  MonomialOrder order = MonomialOrder::grevlex();
  if (j.contains("order")) order = MonomialOrder::from_name(j["order"].get<std::string>());

  if (j.contains("mpc")) {
    const json& mj = j["mpc"];
    std::vector<std::string> states = string_list(mj, "state_vars");
    std::vector<std::string> inputs = string_list(mj, "input_vars");
    std::vector<std::string> names = states;
    names.insert(names.end(), inputs.begin(), inputs.end());
    RingPtr ring = Ring::make(names);

    std::vector<QPolynomial> dynamics;
    for (const auto& s : string_list(mj, "dynamics")) dynamics.push_back(parse_polynomial(s, ring));
    QPolynomial stage = parse_polynomial(mj.at("stage_cost").get<std::string>(), ring);
    QPolynomial terminal =
        mj.contains("terminal_cost") ? parse_polynomial(mj["terminal_cost"].get<std::string>(), ring)
                                     : QPolynomial::zero(ring);
    std::vector<StageConstraint> constraints;
    if (mj.contains("constraints")) {
      for (const auto& cj : mj["constraints"]) {
        StageConstraint sc{parse_polynomial(cj.at("poly").get<std::string>(), ring), {}};
        for (const auto& s : cj.at("steps")) sc.steps.push_back(s.get<int>());
        constraints.push_back(std::move(sc));
      }
    }
    std::optional<double> bound;
    if (mj.contains("state_bound")) bound = mj["state_bound"].get<double>();
    ControlProblem cp(states, inputs, std::move(dynamics), std::move(stage), std::move(terminal),
                      std::move(constraints), mj.at("horizon").get<int>(), bound);
    ExpansionResult exp = expand_horizon(cp);
    return ProblemFile{std::move(exp.program), order, std::move(exp.metadata)};
  }

  std::vector<std::string> decision = string_list(j, "decision_vars");
  std::vector<std::string> parameters = string_list(j, "parameters");
  if (!j.contains("objective") || !j["objective"].is_string()) {
    throw ArtifactError("missing 'objective'");
  }
  std::vector<std::string> constraints;
  if (j.contains("constraints")) constraints = string_list(j, "constraints");
  ParametricProgram program =
      make_program(decision, parameters, j["objective"].get<std::string>(), constraints);
  return ProblemFile{std::move(program), order, std::nullopt};
}

ProblemFile load_problem_file(const std::string& path) {
  return parse_problem_text(read_file(path));
}

std::string artifact_to_string(const CompiledProblem& artifact) {
  const auto& program = artifact.program();
  const auto& space = program.space();
  json j;
  j["format_version"] = CompiledProblem::kFormatVersion;
  j["problem_hash"] = artifact.problem_hash;
  j["order"] = artifact.order().name();
  j["enumerated"] = artifact.enumerated;
  j["infeasible_count"] = artifact.infeasible_count;

  json pj;
  pj["decision_vars"] = space.decision_names();
  pj["multipliers"] = space.multiplier_names();
  pj["parameters"] = space.parameter_names();
  pj["objective"] = to_string(program.objective());
  json cs = json::array();
  for (const auto& g : program.constraints()) cs.push_back(to_string(g));
  pj["constraints"] = cs;
  j["problem"] = pj;

  json records = json::array();
  for (const auto& rec : artifact.records()) {
    json rj;
    rj["mask"] = rec.active_set.mask;
    rj["kind"] = to_string(rec.kind);
    rj["solutions"] = rec.solutions;
    rj["unknowns"] = rec.unknowns;
    if (!rec.note.empty()) rj["note"] = rec.note;

    RingPtr unknown_ring = space.unknown_ring(rec.active_set.mask);
    if (!rec.closed_form.empty()) {
      json cf = json::array();
      for (const auto& [name, value] : rec.closed_form) {
        cf.push_back(json::array({name, to_fraction_string(value)}));
      }
      rj["closed_form"] = cf;
    }
    if (!rec.basis_monomials.empty()) {
      json basis = json::array();
      for (const auto& b : rec.basis_monomials) basis.push_back(monomial_to_string(b, *unknown_ring));
      rj["basis"] = basis;
    }
    if (!rec.matrices.empty()) {
      json ms = json::array();
      for (const auto& cm : rec.matrices) {
        json mj;
        mj["for"] = cm.for_variable;
        json rows = json::array();
        for (const auto& row : cm.entries) {
          json r = json::array();
          for (const auto& e : row) r.push_back(to_fraction_string(e));
          rows.push_back(std::move(r));
        }
        mj["entries"] = rows;
        ms.push_back(std::move(mj));
      }
      rj["matrices"] = ms;
    }
    json certs = json::array();
    for (const auto& c : rec.certificates) certs.push_back(to_string(c));
    rj["certificates"] = certs;
    json gens = json::array();
    for (const auto& g : rec.generators) gens.push_back(to_string(g));
    rj["generators"] = gens;
    records.push_back(std::move(rj));
  }
  j["records"] = records;
  if (artifact.mpc) j["mpc"] = mpc_to_json(*artifact.mpc);
  return j.dump(2) + "\n";
}

void save_artifact(const CompiledProblem& artifact, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArtifactError("cannot write '" + path + "'");
  out << artifact_to_string(artifact);
}

CompiledProblem artifact_from_string(const std::string& text) {
  json j = parse_json(text, "artifact");
  if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
    throw ArtifactError("artifact has no format_version");
  }
  int version = j["format_version"].get<int>();
  if (version != CompiledProblem::kFormatVersion) {
    throw ArtifactError("unsupported artifact format version " + std::to_string(version));
  }

  const json& pj = j.at("problem");
  std::vector<std::string> decision = string_list(pj, "decision_vars");
  std::vector<std::string> multipliers = string_list(pj, "multipliers");
  std::vector<std::string> parameters = string_list(pj, "parameters");
  VariableSpace space(decision, multipliers, parameters);
  QPolynomial objective = parse_polynomial(pj.at("objective").get<std::string>(), space.full_ring());
  std::vector<QPolynomial> constraints;
  for (const auto& s : string_list(pj, "constraints")) {
    constraints.push_back(parse_polynomial(s, space.full_ring()));
  }
  ParametricProgram program(space, std::move(objective), std::move(constraints));

  MonomialOrder order = MonomialOrder::from_name(j.at("order").get<std::string>());
  CompiledProblem artifact(std::move(program), order);
  artifact.enumerated = j.at("enumerated").get<std::size_t>();
  artifact.infeasible_count = j.at("infeasible_count").get<std::size_t>();
  artifact.problem_hash = j.at("problem_hash").get<std::string>();

  const auto& sp = artifact.program().space();
  for (const auto& rj : j.at("records")) {
    SubVarietyRecord rec;
    rec.active_set.mask = rj.at("mask").get<std::uint32_t>();
    rec.kind = record_kind_from_string(rj.at("kind").get<std::string>());
    rec.solutions = rj.at("solutions").get<std::size_t>();
    rec.unknowns = string_list(rj, "unknowns");
    if (rj.contains("note")) rec.note = rj["note"].get<std::string>();

    RingPtr unknown_ring = sp.unknown_ring(rec.active_set.mask);
    if (rj.contains("closed_form")) {
      for (const auto& e : rj["closed_form"]) {
        rec.closed_form.emplace_back(
            e.at(0).get<std::string>(),
            parse_rational_function(e.at(1).get<std::string>(), sp.parameter_ring()));
      }
    }
    if (rj.contains("basis")) {
      for (const auto& b : rj["basis"]) {
        QPolynomial p = parse_polynomial(b.get<std::string>(), unknown_ring);
        if (p.term_count() != 1 || !is_one(p.terms().front().coeff)) {
          throw ArtifactError("malformed basis monomial");
        }
        rec.basis_monomials.push_back(p.terms().front().mono);
      }
    }
    if (rj.contains("matrices")) {
      for (const auto& mj : rj["matrices"]) {
        CompanionMatrix cm;
        cm.for_variable = mj.at("for").get<std::string>();
        for (const auto& row : mj.at("entries")) {
          std::vector<RationalFunction> r;
          for (const auto& e : row) {
            r.push_back(parse_rational_function(e.get<std::string>(), sp.parameter_ring()));
          }
          cm.entries.push_back(std::move(r));
        }
        rec.matrices.push_back(std::move(cm));
      }
    }
    for (const auto& c : string_list(rj, "certificates")) {
      rec.certificates.push_back(parse_polynomial(c, sp.parameter_ring()));
    }
    for (const auto& g : string_list(rj, "generators")) {
      rec.generators.push_back(parse_polynomial(g, sp.full_ring()));
    }
    artifact.records().push_back(std::move(rec));
  }
  if (j.contains("mpc")) artifact.mpc = mpc_from_json(j["mpc"]);
  return artifact;
}

CompiledProblem load_artifact(const std::string& path) {
  return artifact_from_string(read_file(path));
}

}  // namespace ppopt
