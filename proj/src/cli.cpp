#include "falsilab/cli.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "falsilab/canonical.hpp"
#include "falsilab/class_spec.hpp"
#include "falsilab/corpus.hpp"
#include "falsilab/eval.hpp"
#include "falsilab/falsify.hpp"
#include "falsilab/fitness.hpp"
#include "falsilab/fraisse.hpp"
#include "falsilab/parser.hpp"
#include "falsilab/stochastic.hpp"
#include "falsilab/syntax.hpp"
#include "falsilab/text_format.hpp"
#include "falsilab/theory.hpp"
#include "falsilab/vc.hpp"

namespace falsilab {

using Json = nlohmann::ordered_json;

std::string default_corpus_dir() {
#ifdef FALSILAB_SOURCE_DIR
  return std::string(FALSILAB_SOURCE_DIR) + "/corpus";
#else
  return "corpus";
#endif
}

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;  // 0 keeps the defaults
  bool json = false;
  bool fail_on_refuted = false;

  [[nodiscard]] Budget limits() const {
    Budget b;
    if (budget) {
      b.enumeration = budget;
      b.search_nodes = budget;
    }
    return b;
  }
  [[nodiscard]] AmalgamOptions amalgam(bool strong) const {
    AmalgamOptions o;
    o.strong = strong;
    if (budget) o.node_budget = budget;
    return o;
  }
};

// A command fills the report and says whether its verdict is negative.
struct Outcome {
  Json report;
  bool negative = false;
};

std::string structure_text(const Structure& m, std::string_view name = "M") { return to_text(m, name); }

Json names_of(const Structure& m, const std::vector<int>& elements) {
  Json a = Json::array();
  for (int e : elements) a.push_back(m.element_name(e));
  return a;
}

Structure load_structure(const std::string& path) {
  auto doc = parse_document(read_file(path));
  if (doc.structures.empty()) throw Error(ErrorKind::Syntax, "no structure in '" + path + "'");
  return doc.structures.front().structure;
}

ClassSpec load_class(const std::string& path, const std::string& name, const Globals& g) {
  ClassSpec k = load_class_spec(path, name);
  if (g.budget) k = k.with_budget(g.limits());
  return k;
}

Assignment parse_assignment(const std::string& text, const Structure& m) {
  Assignment env;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Syntax, "assignment items look like x=a");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    std::string var = trim(item.substr(0, eq));
    std::string value = trim(item.substr(eq + 1));
    auto e = m.find_element(value);
    if (!e) throw Error(ErrorKind::UnknownSymbol, "no element '" + value + "'");
    env[var] = *e;
  }
  return env;
}

Json syntax_json(const SyntaxClass& c) {
  Json j;
  j["quantifier_free"] = c.quantifier_free;
  j["universal"] = c.universal;
  j["existential"] = c.existential;
  j["uncaf"] = c.uncaf;
  j["pi_level"] = c.pi_level;
  j["sigma_level"] = c.sigma_level;
  j["prenex_class"] = c.prenex_class();
  return j;
}

// ---- commands ----

Outcome cmd_classify(const std::string& phi, const std::vector<std::string>& defines) {
  Signature sig;
  std::map<std::string, DerivedRelation> defs;
  for (const auto& d : defines) {
    auto [name, def] = parse_definition(d, sig);
    defs.insert_or_assign(name, std::move(def));
  }
  ParseOptions options;
  options.infer_signature = true;
  Formula f = parse_formula_into(phi, sig, options);
  Json r;
  r["command"] = "classify";
  r["formula"] = to_string(f);
  if (!defs.empty()) {
    // Reparsing restores canonical variable names.
    f = parse_formula_into(to_string(rewrite_derived_relation(f, defs)), sig, options);
    r["rewritten"] = to_string(f);
  }
  const bool closed = free_variables(f).empty();
  r["closed"] = closed;
  const Json syntax = syntax_json(closed ? classify_syntax(f) : classify_formula(f));
  for (const auto& [key, value] : syntax.items()) r[key] = value;
  r["prenex"] = to_string(to_prenex(strip_vacuous(f)));
  return {r, false};
}

Outcome cmd_eval(const std::string& path, const std::string& phi, const std::string& assign) {
  Structure m = load_structure(path);
  Formula f = parse_formula(phi, m.signature());
  Assignment env = assign.empty() ? Assignment{} : parse_assignment(assign, m);
  for (const auto& v : free_variables(f)) {
    if (!env.count(v)) throw Error(ErrorKind::UnboundVariable, "free variable '" + v + "' needs --assign");
  }
  Json r;
  r["command"] = "eval";
  r["formula"] = to_string(f);
  r["value"] = evaluate(m, f, env);
  return {r, false};
}

Json diagrams_json(const ForbiddenSet& fs) {
  Json a = Json::array();
  for (const auto& d : fs.diagrams) {
    Json j;
    j["vars"] = d.vars;
    j["literals"] = d.literals.size();
    j["diagram"] = d.to_string(*fs.signature);
    j["sentence"] = to_string(d.as_sentence(*fs.signature));
    a.push_back(j);
  }
  return a;
}

Outcome cmd_forbid(const std::string& path, const std::string& name, int n, std::optional<int> bound,
                   const std::string& kp_path, const std::string& kp_name, const Globals& g) {
  ClassSpec k = load_class(path, name, g);
  ForbidOptions options;
  options.enumeration_bound = bound;
  ForbiddenSet fs = forbidden_configurations(k, n, options);
  Json r;
  r["command"] = "forbid";
  r["class"] = k.name();
  r["n"] = n;
  r["enumeration_bound"] = fs.enumeration_bound;
  r["exact"] = fs.exact;
  r["verdict"] = fs.diagrams.empty() ? "not-falsifiable-at-scale" : "falsifiable";
  r["diagrams"] = diagrams_json(fs);
  if (!kp_path.empty()) {
    ClassSpec kp = load_class(kp_path, kp_name, g);
    RelativeReport rel = relative_falsifiability_at(k, kp, n, options);
    Json j;
    j["class"] = kp.name();
    j["relatively_falsifiable"] = rel.relatively_falsifiable;
    j["forbidden_in_k"] = rel.forbidden_in_k;
    j["forbidden_in_kp"] = rel.forbidden_in_kp;
    j["witness"] = rel.witness ? Json(rel.witness->to_string(k.signature())) : Json(nullptr);
    r["relative"] = j;
  }
  return {r, false};
}

Outcome cmd_refute(const std::string& theory_path, const std::string& obs_path) {
  Theory t = load_theory(theory_path);
  ObservationSet obs = load_observations(obs_path);
  RefutationReport rep = refute(t, obs);
  Json r;
  r["command"] = "refute";
  r["verdict"] = rep.refuted ? "refuted" : "consistent-so-far";
  r["sentence_index"] = rep.sentence_index ? Json(*rep.sentence_index) : Json(nullptr);
  r["witness_sentence"] = rep.refuted ? Json(rep.witness_sentence) : Json(nullptr);
  r["instance"] = rep.refuted ? Json(rep.instance) : Json(nullptr);
  Json sub = Json::object();
  for (const auto& [var, c] : rep.substitution) sub[var] = c;
  r["substitution"] = sub;
  r["skipped"] = rep.skipped;
  return {r, rep.refuted};
}

Outcome cmd_fit(const std::string& path, const std::string& name, int bound, bool fg, const Globals& g) {
  ClassSpec k = load_class(path, name, g);
  FitReport rep = fg ? check_fg_fit(k, bound) : check_fit(k, bound);
  Json r;
  r["command"] = "fit";
  r["class"] = k.name();
  r["bound"] = bound;
  r["finitely_generated"] = fg;
  r["nontrivial"] = rep.nontrivial();
  r["finitely_testable"] = rep.finitely_testable();
  r["irrevocably_testable"] = rep.irrevocably_testable();
  r["verdict"] = rep.fit() ? "fit_up_to_bound" : "not_fit_up_to_bound";
  r["nontrivial_witness"] = rep.nontrivial_witness ? Json(structure_text(*rep.nontrivial_witness, "W")) : Json(nullptr);
  if (rep.irrevocability_counterexample) {
    const auto& c = *rep.irrevocability_counterexample;
    Json j;
    j["member"] = structure_text(c.member, "M");
    j["substructure"] = structure_text(c.substructure, "S");
    j["elements"] = names_of(c.member, c.elements);
    r["irrevocability_counterexample"] = j;
  } else {
    r["irrevocability_counterexample"] = nullptr;
  }
  // The warning list can be long; the report keeps the count and the first few.
  Json warn = Json::array();
  for (const auto& m : rep.vacuous_substructure_warning) {
    if (warn.size() == 5) break;
    warn.push_back(structure_text(m, "V"));
  }
  r["vacuous_substructure_count"] = rep.vacuous_substructure_warning.size();
  r["vacuous_substructure_warning"] = warn;
  return {r, !rep.fit()};
}

Outcome cmd_synth_psi(const std::string& path, const std::string& name, int n, const std::string& output,
                      const Globals& g) {
  ClassSpec k = load_class(path, name, g);
  std::vector<Formula> psi = synthesize_psi_theory(k, n);
  Json r;
  r["command"] = "synth-psi";
  r["class"] = k.name();
  r["n"] = n;
  Json a = Json::array();
  for (const auto& f : psi) a.push_back(to_string(f));
  r["sentences"] = a;
  if (!output.empty()) {
    write_file(output, to_text(Theory::make("psi", k.signature_ptr(), psi)));
    r["output"] = output;
  }
  return {r, false};
}

Outcome cmd_synth_chi(const std::string& sig_text, int n) {
  Signature sig = parse_signature(sig_text);
  Json r;
  r["command"] = "synth-chi";
  r["n"] = n;
  r["formula"] = to_string(synthesize_chi(sig, n));
  return {r, false};
}

Json witness_json(const Structure& m, const ShatterWitness& w) {
  auto tuples = [&](const std::vector<ElementTuple>& ts) {
    Json a = Json::array();
    for (const auto& t : ts) a.push_back(names_of(m, t));
    return a;
  };
  Json j;
  j["set"] = tuples(w.set);
  j["params"] = tuples(w.params);
  return j;
}

Outcome cmd_vc(const std::string& path, const std::string& phi, int cap) {
  Structure m = load_structure(path);
  PartitionedFormula pf = parse_partitioned(phi, m.signature());
  VcResult res = vc_dimension(m, pf, cap);
  Json r;
  r["command"] = "vc";
  r["formula"] = to_string(pf.formula);
  r["objects"] = pf.objects;
  r["params"] = pf.params;
  r["dimension"] = res.dimension;
  r["exact"] = res.exact;
  r["witness"] = witness_json(m, res.witness);
  return {r, false};
}

Outcome cmd_vc_sentence(const std::string& phi, int n, const std::string& model, const std::string& output) {
  std::optional<Structure> m;
  if (!model.empty()) m = load_structure(model);
  Signature sig = m ? m->signature() : Signature{};
  PartitionedFormula pf = m ? parse_partitioned(phi, sig) : parse_partitioned_into(phi, sig);
  Formula s = vc_sentence(pf, n);
  Json r;
  r["command"] = "vc-sentence";
  r["n"] = n;
  r["sentence"] = to_string(s);
  r["holds"] = m ? Json(evaluate(*m, miniscope(s))) : Json(nullptr);
  if (!output.empty()) {
    write_file(output, to_text(Theory::make("vc", make_signature(sig), {s})));
    r["output"] = output;
  }
  return {r, false};
}

Outcome cmd_vc_param(const std::string& family, const std::string& points_path, const std::string& grid_path) {
  ParametricFamily fam = family_by_name(family);
  std::vector<RationalPoint> points;
  for (auto& row : parse_rational_csv(read_file(points_path))) points.push_back(std::move(row));
  auto grid = parse_rational_csv(read_file(grid_path));
  ParametricReport rep = parametric_vc_report(fam, points, grid);
  Json r;
  r["command"] = "vc-param";
  r["family"] = fam.name;
  r["points"] = points.size();
  r["grid_rows"] = grid.size();
  r["lower_bound"] = rep.lower_bound;
  r["shattered"] = rep.shattered;
  r["parameter_for_subset"] = rep.parameter_for_subset;
  return {r, false};
}

Outcome cmd_fraisse(const std::string& path, const std::string& name, int bound, bool strong, const Globals& g) {
  ClassSpec k = load_class(path, name, g);
  FraisseReport rep = check_fraisse(k, bound, g.amalgam(strong));
  Json r;
  r["command"] = "fraisse";
  r["class"] = k.name();
  r["bound"] = bound;
  r["strong"] = strong;
  Json hp;
  hp["holds"] = rep.hp.holds;
  if (rep.hp.counterexample) {
    const auto& c = *rep.hp.counterexample;
    hp["counterexample"] = Json{{"member", structure_text(c.member, "M")},
                                {"substructure", structure_text(c.substructure, "S")},
                                {"elements", names_of(c.member, c.elements)}};
  } else {
    hp["counterexample"] = nullptr;
  }
  Json jep;
  jep["holds"] = rep.jep.holds;
  jep["pairs_checked"] = rep.jep.pairs_checked;
  if (rep.jep.counterexample) {
    jep["counterexample"] = Json{{"first", structure_text(rep.jep.counterexample->first, "A")},
                                 {"second", structure_text(rep.jep.counterexample->second, "B")}};
  } else {
    jep["counterexample"] = nullptr;
  }
  Json ap;
  ap["holds"] = rep.ap.holds;
  ap["problems_checked"] = rep.ap.problems_checked;
  if (rep.ap.counterexample) {
    const auto& c = *rep.ap.counterexample;
    ap["counterexample"] = Json{{"base", structure_text(c.base, "A")},
                                {"n", structure_text(c.n, "N")},
                                {"q", structure_text(c.q, "Q")},
                                {"f_n", names_of(c.n, c.f_n)},
                                {"f_q", names_of(c.q, c.f_q)}};
  } else {
    ap["counterexample"] = nullptr;
  }
  r["hp"] = hp;
  r["jep"] = jep;
  r["ap"] = ap;
  r["verdict"] = rep.fraisse() ? "fraisse_up_to_bound" : "not_fraisse_up_to_bound";
  return {r, !rep.fraisse()};
}

Outcome cmd_generic(const std::string& path, const std::string& name, int level, const ChainOptions& options,
                    const std::string& output, const Globals& g) {
  ClassSpec k = load_class(path, name, g);
  ChainState st = generic_chain(k, level, g.seed, options);
  Json r;
  r["command"] = "generic";
  r["class"] = k.name();
  r["level"] = st.level;
  r["level_achieved"] = st.level_achieved;
  r["closed"] = st.closed;
  r["rounds"] = st.rounds;
  r["seed"] = st.seed;
  Json sizes = Json::array();
  for (const auto& s : st.stages) sizes.push_back(s.size());
  r["stage_sizes"] = sizes;
  r["size"] = st.current().size();
  r["structure"] = structure_text(st.current(), "G");
  if (!output.empty()) {
    write_file(output, to_text(k.signature()) + "\n" + structure_text(st.current(), "G") + "\n");
    r["output"] = output;
  }
  return {r, false};
}

Json dist_json(const Dist& d) {
  Json a = Json::array();
  for (const auto& q : d) a.push_back(to_string(q));
  return a;
}

Outcome cmd_markov_stationary(const std::string& chain) {
  ChainSpec spec = load_chain(chain);
  Json r;
  r["command"] = "markov stationary";
  r["states"] = spec.space.size();
  r["irreducible"] = is_irreducible(spec.rho);
  r["stationary"] = dist_json(stationary(spec.rho));
  return {r, false};
}

Outcome cmd_markov_simulate(const std::string& chain, int horizon, const std::string& output, const Globals& g) {
  ChainSpec spec = load_chain(chain);
  Trajectory t = simulate(spec.mu, spec.rho, horizon, g.seed);
  Json r;
  r["command"] = "markov simulate";
  r["seed"] = t.seed;
  r["horizon"] = t.horizon;
  r["generator"] = t.generator;
  r["states"] = t.states;
  if (!output.empty()) {
    Structure s = render_trajectory(spec.space, t);
    write_file(output, to_text(s.signature()) + "\n" + structure_text(s, "run") + "\n");
    r["output"] = output;
  }
  return {r, false};
}

Outcome cmd_markov_realize(const std::string& chain, const std::string& config_path, int horizon,
                           const std::string& mode, int trials, const Globals& g) {
  ChainSpec spec = load_chain(chain);
  Configuration config = load_config(config_path, spec.space);
  std::optional<MonteCarlo> mc;
  if (mode == "montecarlo") mc = MonteCarlo{trials, g.seed};
  RealizationResult res = realization_probability(spec.space, config, spec.mu, spec.rho, horizon, mc);
  Json r;
  r["command"] = "markov realize";
  r["mode"] = mode;
  r["horizon"] = horizon;
  r["probability"] = res.exact ? Json(to_string(res.probability)) : Json(nullptr);
  r["estimate"] = res.estimate;
  r["standard_error"] = res.standard_error;
  r["trials"] = res.trials;
  r["seed"] = res.seed;
  return {r, false};
}

Outcome cmd_gn(int n, const std::string& output) {
  Structure g = make_gn(n);
  std::size_t edges = g.tuples(0).size();
  Json r;
  r["command"] = "gn";
  r["n"] = n;
  r["vertices"] = g.size();
  r["edges"] = edges;
  const std::string text = to_text(g.signature()) + "\n" + structure_text(g, "G" + std::to_string(n)) + "\n";
  r["structure"] = structure_text(g, "G" + std::to_string(n));
  if (!output.empty()) {
    write_file(output, text);
    r["output"] = output;
  }
  return {r, false};
}

Outcome cmd_particle(const std::string& path) {
  ParticleReport rep = free_particle_refute(parse_particle_csv(read_file(path)));
  Json r;
  r["command"] = "particle";
  r["observations"] = rep.ordered.size();
  r["verdict"] = rep.refuted ? "refuted" : "consistent-so-far";
  r["witness"] = rep.witness ? Json(*rep.witness) : Json(nullptr);
  r["witness_time"] = rep.witness ? Json(rep.ordered[*rep.witness].time.get_str()) : Json(nullptr);
  r["line"] = rep.line ? Json(*rep.line) : Json(nullptr);
  return {r, rep.refuted};
}

// Manifest entries: {"name", "basis", "args": [...], "exit": 0, "expect": {pointer: value}}.
// Arguments starting with '@' are paths relative to the corpus directory.
Outcome cmd_corpus_verify(const std::string& dir, const Globals& g);

// ---- rendering ----

void render(const Json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, value] : j.items()) {
    if (value.is_object() && !value.empty()) {
      out << pad << key << ":\n";
      render(value, out, indent + 2);
    } else if (value.is_array() && !value.empty() && (value.front().is_object() || value.front().is_string())) {
      out << pad << key << ":\n";
      for (const auto& item : value) {
        if (item.is_object()) {
          out << pad << "  -\n";
          render(item, out, indent + 4);
        } else if (item.is_string()) {
          out << pad << "  - " << item.get<std::string>() << "\n";
        } else {
          out << pad << "  - " << item.dump() << "\n";
        }
      }
    } else if (value.is_string()) {
      out << pad << key << ": " << value.get<std::string>() << "\n";
    } else {
      out << pad << key << ": " << value.dump() << "\n";
    }
  }
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BudgetExceeded:
    case ErrorKind::CapExceeded:
    case ErrorKind::SizeOverflow:
      return kExitBudget;
    default:
      return kExitUsage;
  }
}

// CLI11 reads "-phi" as three short flags; long names written with one dash
// are rewritten to two.
std::vector<std::string> normalize(const std::vector<std::string>& args) {
  static const std::vector<std::string> longs = {
      "phi",   "assign", "class", "bound",  "define", "family", "points",     "grid",       "strong",
      "seed",  "budget", "json",  "level",  "trials", "horizon", "mode",      "config",     "dir",
      "cap",   "kp",     "fg",    "sig",    "kp-class", "max-size", "max-rounds", "fail-on-refuted"};
  std::vector<std::string> out;
  for (const auto& a : args) {
    if (a.size() > 2 && a[0] == '-' && a[1] != '-') {
      const std::string name = a.substr(1, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 1);
      if (std::find(longs.begin(), longs.end(), name) != longs.end()) {
        out.push_back("-" + a);
        continue;
      }
    }
    out.push_back(a);
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Globals g;
  CLI::App app{"Finite-scale checks of falsifiability for classes of first-order structures", "falsilab"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", g.seed, "Seed for every random choice")->default_val(0);
  app.add_option("--budget", g.budget, "Enumeration and search node limit (0 keeps defaults)")->default_val(0);
  app.add_flag("--json", g.json, "Print the report as JSON");
  app.add_flag("--fail-on-refuted", g.fail_on_refuted, "Exit 1 on a negative verdict");

  std::function<Outcome()> action;

  std::string phi, path, name, theory_path, obs_path, assign, output, sig_text, family, points, grid, dir, chain,
      config, mode = "exact", kp_path, kp_name;
  std::vector<std::string> defines;
  int n = 1, bound = 4, cap = kShatterCap, level = 2, horizon = 10, trials = 1000;
  std::optional<int> enum_bound;
  bool fg = false, strong = false;
  ChainOptions chain_options;

  auto* classify = app.add_subcommand("classify", "Syntactic class and prenex form of a formula");
  classify->add_option("--phi", phi, "Formula")->required();
  classify->add_option("--define", defines, "Existential definition R(x,y) := body, applied before classifying");
  classify->callback([&] { action = [&] { return cmd_classify(phi, defines); }; });

  auto* ev = app.add_subcommand("eval", "Evaluate a formula in a structure");
  ev->add_option("-M", path, "Structure file")->required();
  ev->add_option("--phi", phi, "Formula")->required();
  ev->add_option("--assign", assign, "Free variable values, x=a,y=b");
  ev->callback([&] { action = [&] { return cmd_eval(path, phi, assign); }; });

  auto* forbid = app.add_subcommand("forbid", "Minimal forbidden diagrams of a class");
  forbid->add_option("-K", path, "Class spec file")->required();
  forbid->add_option("--class", name, "Class name (default: first in file)");
  forbid->add_option("-n", n, "Maximum number of variables")->default_val(3);
  forbid->add_option("--bound", enum_bound, "Largest member size searched");
  forbid->add_option("--kp", kp_path, "Class spec file of a superclass K'");
  forbid->add_option("--kp-class", kp_name, "Name of K' in its file");
  forbid->callback([&] { action = [&] { return cmd_forbid(path, name, n, enum_bound, kp_path, kp_name, g); }; });

  auto* ref = app.add_subcommand("refute", "Ground a universal theory on observations");
  ref->add_option("-T", theory_path, "Theory file")->required();
  ref->add_option("-O", obs_path, "Observation file")->required();
  ref->callback([&] { action = [&] { return cmd_refute(theory_path, obs_path); }; });

  auto* fit = app.add_subcommand("fit", "Bounded FIT check");
  fit->add_option("-K", path, "Class spec file")->required();
  fit->add_option("--class", name, "Class name");
  fit->add_option("-B", bound, "Size bound")->default_val(4);
  fit->add_flag("--fg", fg, "Use finitely generated substructures");
  fit->callback([&] { action = [&] { return cmd_fit(path, name, bound, fg, g); }; });

  auto* psi = app.add_subcommand("synth-psi", "Synthesize psi_1..psi_n for a class");
  psi->add_option("-K", path, "Class spec file")->required();
  psi->add_option("--class", name, "Class name");
  psi->add_option("-n", n, "Largest index")->default_val(2);
  psi->add_option("-o", output, "Write the sentences as a theory file");
  psi->callback([&] { action = [&] { return cmd_synth_psi(path, name, n, output, g); }; });

  auto* chi = app.add_subcommand("synth-chi", "Synthesize chi_n for a signature");
  chi->add_option("--sig", sig_text, "Signature text")->required();
  chi->add_option("-n", n, "Number of variables")->default_val(2);
  chi->callback([&] { action = [&] { return cmd_synth_chi(sig_text, n); }; });

  auto* vc = app.add_subcommand("vc", "VC dimension of a partitioned formula in a structure");
  vc->add_option("-M", path, "Structure file")->required();
  vc->add_option("--phi", phi, "Partitioned formula, R(x;y) or x;y: body")->required();
  vc->add_option("--cap", cap, "Largest set size searched")->default_val(kShatterCap);
  vc->callback([&] { action = [&] { return cmd_vc(path, phi, cap); }; });

  auto* vcs = app.add_subcommand("vc-sentence", "The sentence VC_n(phi)");
  vcs->add_option("--phi", phi, "Partitioned formula")->required();
  vcs->add_option("-n", n, "Set size")->default_val(2);
  vcs->add_option("-M", path, "Structure to evaluate the sentence in");
  vcs->add_option("-o", output, "Write the sentence as a theory file");
  vcs->callback([&] { action = [&] { return cmd_vc_sentence(phi, n, path, output); }; });

  auto* vcp = app.add_subcommand("vc-param", "Shattering lower bound for a rational parametric family");
  vcp->add_option("--family", family, "fatline or line")->required();
  vcp->add_option("--points", points, "CSV of points")->required();
  vcp->add_option("--grid", grid, "CSV of parameter rows")->required();
  vcp->callback([&] { action = [&] { return cmd_vc_param(family, points, grid); }; });

  auto* fr = app.add_subcommand("fraisse", "Bounded HP, JEP and AP check");
  fr->add_option("-K", path, "Class spec file")->required();
  fr->add_option("--class", name, "Class name");
  fr->add_option("-B", bound, "Size bound")->default_val(4);
  fr->add_flag("--strong", strong, "Require strong amalgamation");
  fr->callback([&] { action = [&] { return cmd_fraisse(path, name, bound, strong, g); }; });

  auto* gen = app.add_subcommand("generic", "Build a generic chain approximating the Fraisse limit");
  gen->add_option("-K", path, "Class spec file")->required();
  gen->add_option("--class", name, "Class name");
  gen->add_option("--level", level, "Saturation level")->default_val(2);
  gen->add_option("--max-size", chain_options.max_size, "Largest stage size")->default_val(200);
  gen->add_option("--max-rounds", chain_options.max_rounds, "Largest number of rounds")->default_val(64);
  gen->add_option("-o", output, "Write the final stage");
  gen->callback([&] { action = [&] { return cmd_generic(path, name, level, chain_options, output, g); }; });

  auto* markov = app.add_subcommand("markov", "Exact Markov chains over structures");
  markov->require_subcommand(1);
  auto* stat = markov->add_subcommand("stationary", "Stationary distribution");
  stat->add_option("-c", chain, "Chain file")->required();
  stat->callback([&] { action = [&] { return cmd_markov_stationary(chain); }; });
  auto* sim = markov->add_subcommand("simulate", "Sample a run");
  sim->add_option("-c", chain, "Chain file")->required();
  sim->add_option("--horizon", horizon, "Number of steps")->default_val(10);
  sim->add_option("-o", output, "Write the run as a time-indexed structure");
  sim->callback([&] { action = [&] { return cmd_markov_simulate(chain, horizon, output, g); }; });
  auto* real = markov->add_subcommand("realize", "Probability that a configuration is realized");
  real->add_option("-c", chain, "Chain file")->required();
  real->add_option("--config", config, "Configuration file")->required();
  real->add_option("--horizon", horizon, "Number of steps")->default_val(10);
  real->add_option("--mode", mode, "exact or montecarlo")->check(CLI::IsMember({"exact", "montecarlo"}));
  real->add_option("--trials", trials, "Monte Carlo trials")->default_val(1000);
  real->callback([&] { action = [&] { return cmd_markov_realize(chain, config, horizon, mode, trials, g); }; });

  auto* corpus = app.add_subcommand("corpus", "Corpus of worked examples");
  corpus->require_subcommand(1);
  auto* verify = corpus->add_subcommand("verify", "Re-run every corpus entry and compare");
  dir = default_corpus_dir();
  verify->add_option("--dir", dir, "Corpus directory");
  verify->callback([&] { action = [&] { return cmd_corpus_verify(dir, g); }; });

  auto* gn = app.add_subcommand("gn", "The bipartite membership graph G_n");
  gn->add_option("-n", n, "n <= 5")->default_val(2);
  gn->add_option("-o", output, "Write the structure");
  gn->callback([&] { action = [&] { return cmd_gn(n, output); }; });

  auto* particle = app.add_subcommand("particle", "Free particle observations against a straight line");
  particle->add_option("-O", obs_path, "CSV of t,x,y,z")->required();
  particle->callback([&] { action = [&] { return cmd_particle(obs_path); }; });

  std::vector<std::string> args = normalize(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Outcome o = action();
    if (g.json) {
      out << o.report.dump(2) << "\n";
    } else {
      render(o.report, out, 0);
    }
    return (o.negative && g.fail_on_refuted) ? kExitNegative : kExitOk;
  } catch (const Error& e) {
    if (g.json) {
      Json j;
      j["error"] = std::string(to_string(e.kind()));
      j["message"] = e.what();
      out << j.dump(2) << "\n";
    }
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

namespace {

Outcome cmd_corpus_verify(const std::string& dir, const Globals& g) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  Json manifest = Json::parse(read_file((base / "manifest.json").string()));
  Json entries = Json::array();
  int passed = 0, failed = 0;
  for (const auto& entry : manifest.at("entries")) {
    std::vector<std::string> args = {"--json", "--seed", std::to_string(g.seed)};
    for (const auto& a : entry.at("args")) {
      std::string s = a.get<std::string>();
      if (!s.empty() && s[0] == '@') s = (base / s.substr(1)).string();
      args.push_back(s);
    }
    std::ostringstream sout, serr;
    const int code = run(args, sout, serr);
    Json result;
    result["name"] = entry.at("name");
    result["basis"] = entry.at("basis");
    Json mismatches = Json::array();
    const int want_exit = entry.value("exit", 0);
    if (code != want_exit) {
      mismatches.push_back("exit " + std::to_string(code) + " != " + std::to_string(want_exit));
    }
    Json report;
    try {
      report = Json::parse(sout.str());
    } catch (const std::exception&) {
      mismatches.push_back("output is not JSON");
    }
    if (report.is_object()) {
      for (const auto& [pointer, expected] : entry.at("expect").items()) {
        const Json::json_pointer ptr(pointer);
        if (!report.contains(ptr)) {
          mismatches.push_back(pointer + " missing");
        } else if (report.at(ptr) != expected) {
          mismatches.push_back(pointer + " = " + report.at(ptr).dump() + ", expected " + expected.dump());
        }
      }
    }
    const bool ok = mismatches.empty();
    (ok ? passed : failed)++;
    result["passed"] = ok;
    result["mismatches"] = mismatches;
    entries.push_back(result);
  }
  Json r;
  r["command"] = "corpus verify";
  r["dir"] = dir;
  r["passed"] = passed;
  r["failed"] = failed;
  r["entries"] = entries;
  return {r, failed > 0};
}

}  // namespace

}  // namespace falsilab
