#include "falsilab/theory.hpp"

#include <sstream>

#include "falsilab/error.hpp"
#include "falsilab/eval.hpp"
#include "falsilab/parser.hpp"
#include "falsilab/syntax.hpp"
#include "falsilab/text_format.hpp"
#include "text_internal.hpp"

namespace falsilab {

Theory Theory::make(std::string name, SignaturePtr sig, std::vector<Formula> sentences) {
  Theory t;
  t.name = std::move(name);
  t.signature = std::move(sig);
  auto compiled = std::make_shared<std::vector<CompiledFormula>>();
  for (const auto& s : sentences) {
    auto free = free_variables(s);
    if (!free.empty()) throw Error(ErrorKind::OpenFormula, "theory sentence has free variable '" + free.front() + "'");
    compiled->emplace_back(s, *t.signature);
    t.sources.push_back(to_string(s));
  }
  t.sentences = std::move(sentences);
  t.compiled = std::move(compiled);
  return t;
}

bool Theory::holds_in(const Structure& m) const {
  if (compiled && compiled->size() == sentences.size()) {
    require_same_signature(*signature, m.signature());
    for (const auto& c : *compiled) {
      if (!c.holds(m)) return false;
    }
    return true;
  }
  for (const auto& s : sentences) {
    if (!evaluate(m, s)) return false;
  }
  return true;
}

bool Theory::is_universal() const {
  for (const auto& s : sentences) {
    if (!classify_syntax(s).universal) return false;
  }
  return true;
}

namespace {

std::string strip_comment(std::string_view line) {
  auto hash = line.find('#');
  std::string out(line.substr(0, hash));
  auto first = out.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  auto last = out.find_last_not_of(" \t\r");
  return out.substr(first, last - first + 1);
}

}  // namespace

Theory parse_theory(std::string_view text, std::string name, SignaturePtr sig) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      std::string s = strip_comment(line);
      if (!s.empty()) lines.emplace_back(number, s);
    }
  }
  std::size_t start = 0;
  if (!lines.empty() && lines.front().second.rfind("sig", 0) == 0 &&
      (lines.front().second.size() == 3 || !std::isalnum(static_cast<unsigned char>(lines.front().second[3])))) {
    // A signature may span several lines up to its closing brace.
    std::string block;
    while (start < lines.size()) {
      block += lines[start].second + "\n";
      ++start;
      if (block.find('}') != std::string::npos) break;
    }
    sig = make_signature(parse_signature(block));
  }
  Signature working = sig ? *sig : Signature(name);
  const bool infer = !sig;
  std::vector<Formula> sentences;
  std::vector<std::string> sources;
  for (std::size_t i = start; i < lines.size(); ++i) {
    const auto& [number, src] = lines[i];
    Formula f = Formula::top();
    try {
      ParseOptions options;
      options.infer_signature = infer;
      options.free_names_as_constants = infer;
      f = parse_formula_into(src, working, options);
    } catch (const ParseError& e) {
      throw ParseError(std::string("theory line ") + std::to_string(number) + ": " + e.what(), number, e.column());
    }
    auto free = free_variables(f);
    if (!free.empty()) {
      throw Error(ErrorKind::OpenFormula, "theory line " + std::to_string(number) + " has free variable '" + free.front() + "'");
    }
    sentences.push_back(std::move(f));
    sources.push_back(src);
  }
  if (infer && working.name().empty()) working.set_name(name);
  Theory t = Theory::make(std::move(name), sig ? sig : make_signature(std::move(working)), std::move(sentences));
  t.sources = std::move(sources);
  return t;
}

Theory load_theory(const std::string& path, SignaturePtr sig) {
  std::string stem = path;
  auto slash = stem.find_last_of('/');
  if (slash != std::string::npos) stem = stem.substr(slash + 1);
  auto dot = stem.find_last_of('.');
  if (dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_theory(read_file(path), stem, std::move(sig));
}

std::string to_text(const Theory& t) {
  std::ostringstream out;
  out << to_text(*t.signature) << "\n";
  for (const auto& s : t.sentences) out << to_string(s) << "\n";
  return out.str();
}

Formula acyclicity_axiom(const std::string& relation, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "acyclicity axiom needs n >= 1");
  std::vector<std::string> vars;
  for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
  std::vector<Formula> atoms;
  for (int i = 0; i + 1 < n; ++i) atoms.push_back(Formula::atom(relation, {Term::var(vars[i]), Term::var(vars[i + 1])}));
  atoms.push_back(Formula::atom(relation, {Term::var(vars[n - 1]), Term::var(vars[0])}));
  return Formula::forall(vars, Formula::negate(Formula::conj(std::move(atoms))));
}

}  // namespace falsilab
