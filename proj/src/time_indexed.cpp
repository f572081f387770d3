#include "falsilab/time_indexed.hpp"

#include "falsilab/parser.hpp"

namespace falsilab {

SignaturePtr time_indexed_signature(const Signature& base, bool discrete) {
  if (!base.is_relational()) {
    throw Error(ErrorKind::InvalidArgument, "time-indexed languages are built over relational signatures");
  }
  Signature sig;
  sig.set_name(base.name().empty() ? "tau_lang" : base.name() + (discrete ? "_tau_d" : "_tau"));
  for (const auto& r : base.relations()) sig.add_relation(r.name, r.arity + 1);
  sig.add_relation(kObjectPredicate, 1);
  sig.add_relation(kTimePredicate, 1);
  sig.add_relation(kTimeOrder, 2);
  if (discrete) sig.add_relation(kSuccessor, 2);
  return make_signature(std::move(sig));
}

Theory time_indexed_theory(const Signature& base, bool discrete) {
  SignaturePtr sig = time_indexed_signature(base, discrete);
  std::vector<std::string> lines = {
      "forall x. (O(x) | tau(x)) & !(O(x) & tau(x))",
  };
  for (const auto& r : base.relations()) {
    std::string vars, args, objects;
    for (int i = 1; i <= r.arity; ++i) {
      std::string v = "x" + std::to_string(i);
      vars += v + ",";
      args += v + ",";
      objects += "O(" + v + ") & ";
    }
    lines.push_back("forall " + vars + "t. " + r.name + "(" + args + "t) -> " + objects + "tau(t)");
  }
  lines.push_back("forall x, y. lt(x,y) -> tau(x) & tau(y)");
  lines.push_back("forall x. !lt(x,x)");
  lines.push_back("forall x, y, z. lt(x,y) & lt(y,z) -> lt(x,z)");
  lines.push_back("forall x, y. tau(x) & tau(y) -> lt(x,y) | x = y | lt(y,x)");
  if (discrete) {
    lines.push_back("forall x, y. succ(x,y) -> lt(x,y)");
    lines.push_back("forall x, y, z. !(succ(x,y) & lt(x,z) & lt(z,y))");
  }
  std::vector<Formula> sentences;
  for (const auto& l : lines) sentences.push_back(parse_sentence(l, *sig));
  return Theory::make(discrete ? "T_tau_d" : "T_tau", sig, std::move(sentences));
}

Structure time_indexed_structure(const SignaturePtr& indexed, const std::vector<Structure>& worlds) {
  if (worlds.empty()) throw Error(ErrorKind::InvalidArgument, "no worlds to render");
  const int n = worlds.front().size();
  const int h = static_cast<int>(worlds.size());
  const Signature& base = worlds.front().signature();
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("o" + std::to_string(i));
  for (int t = 0; t < h; ++t) names.push_back("t" + std::to_string(t));
  Structure m(indexed, std::move(names));
  const Signature& sig = m.signature();
  const int o = *sig.relation_index(kObjectPredicate);
  const int tau = *sig.relation_index(kTimePredicate);
  const int lt = *sig.relation_index(kTimeOrder);
  const auto succ = sig.relation_index(kSuccessor);
  for (int i = 0; i < n; ++i) m.set_relation(o, std::vector<int>{i}, true);
  for (int t = 0; t < h; ++t) {
    m.set_relation(tau, std::vector<int>{n + t}, true);
    for (int u = t + 1; u < h; ++u) m.set_relation(lt, std::vector<int>{n + t, n + u}, true);
    if (succ && t + 1 < h) m.set_relation(*succ, std::vector<int>{n + t, n + t + 1}, true);
  }
  for (int t = 0; t < h; ++t) {
    const Structure& w = worlds[t];
    if (w.size() != n || !(w.signature() == base)) {
      throw Error(ErrorKind::SignatureMismatch, "worlds must share the signature and object count");
    }
    for (std::size_t r = 0; r < base.relations().size(); ++r) {
      const int ri = *sig.relation_index(base.relations()[r].name);
      for (auto tuple : w.tuples(static_cast<int>(r))) {
        tuple.push_back(n + t);
        m.set_relation(ri, tuple, true);
      }
    }
  }
  return m;
}

bool restricts_to_order_embedding(const Structure& source, const Structure& target, std::span<const int> map) {
  const auto tau_s = source.signature().relation_index(kTimePredicate);
  const auto lt_s = source.signature().relation_index(kTimeOrder);
  const auto tau_t = target.signature().relation_index(kTimePredicate);
  const auto lt_t = target.signature().relation_index(kTimeOrder);
  if (!tau_s || !lt_s || !tau_t || !lt_t) return false;
  for (int a = 0; a < source.size(); ++a) {
    const int sa = a;
    const bool is_time = source.holds(*tau_s, std::span<const int>(&sa, 1));
    if (is_time != target.holds(*tau_t, std::span<const int>(&map[a], 1))) return false;
    if (!is_time) continue;
    for (int b = 0; b < source.size(); ++b) {
      if (!source.holds(*tau_s, std::span<const int>(&b, 1))) continue;
      const int s[2] = {a, b};
      const int t[2] = {map[a], map[b]};
      if (source.holds(*lt_s, s) != target.holds(*lt_t, t)) return false;
    }
  }
  return true;
}

}  // namespace falsilab
