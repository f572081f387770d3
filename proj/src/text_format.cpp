#include "falsilab/text_format.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "text_internal.hpp"

namespace falsilab {

namespace detail {

SignaturePtr parse_signature_block(Lexer& lex) {
  if (!lex.is_ident("sig")) lex.fail("expected 'sig'");
  lex.next();
  Signature sig(lex.expect_ident("signature name"));
  lex.expect("{");
  while (!lex.is("}")) {
    const Token kw = lex.peek();
    std::string kind = lex.expect_ident("'rel', 'fun' or 'const'");
    if (kind != "rel" && kind != "fun" && kind != "const") {
      lex.fail_at(kw, "expected 'rel', 'fun' or 'const'");
    }
    do {
      const Token at = lex.peek();
      std::string name = lex.expect_ident("symbol name");
      try {
        if (kind == "const") {
          sig.add_constant(name);
        } else {
          lex.expect("/");
          const Token num = lex.peek();
          std::string digits = lex.expect_ident("arity");
          int arity = 0;
          try {
            arity = std::stoi(digits);
          } catch (const std::exception&) {
            lex.fail_at(num, "expected a numeric arity");
          }
          if (kind == "rel") sig.add_relation(name, arity);
          else sig.add_function(name, arity);
        }
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(e.what(), at.line, at.column);
      }
    } while (lex.accept(","));
    if (!lex.accept(";") && !lex.is("}")) lex.fail("expected ';' or '}'");
  }
  lex.expect("}");
  return make_signature(std::move(sig));
}

namespace {

struct RawEntry {
  enum class Kind { Set, Map, Value } kind;
  std::string symbol;
  Token at;
  std::vector<std::vector<std::string>> tuples;           // Set
  std::vector<std::pair<std::vector<std::string>, std::string>> mapping;  // Map
  std::string value;                                      // Value
};

std::vector<std::string> parse_tuple_or_element(Lexer& lex) {
  std::vector<std::string> out;
  if (lex.accept("(")) {
    do {
      out.push_back(lex.expect_ident("element"));
    } while (lex.accept(","));
    lex.expect(")");
  } else {
    out.push_back(lex.expect_ident("element"));
  }
  return out;
}

}  // namespace

NamedStructure parse_structure_block(Lexer& lex, const std::vector<SignaturePtr>& known) {
  if (!lex.is_ident("structure")) lex.fail("expected 'structure'");
  lex.next();
  std::string name = lex.expect_ident("structure name");
  if (!lex.is_ident("over")) lex.fail("expected 'over'");
  lex.next();
  const Token sig_tok = lex.peek();
  std::string sig_name = lex.expect_ident("signature name");
  lex.expect("{");
  std::vector<std::string> domain;
  bool have_domain = false;
  std::vector<RawEntry> entries;
  while (!lex.is("}")) {
    const Token at = lex.peek();
    std::string symbol = lex.expect_ident("symbol");
    lex.expect("=");
    if (symbol == "dom") {
      if (have_domain) lex.fail_at(at, "duplicate 'dom'");
      have_domain = true;
      lex.expect("{");
      if (!lex.is("}")) {
        do {
          domain.push_back(lex.expect_ident("element"));
        } while (lex.accept(","));
      }
      lex.expect("}");
    } else if (lex.accept("{")) {
      RawEntry entry{RawEntry::Kind::Set, symbol, at, {}, {}, {}};
      bool first = true;
      if (!lex.is("}")) {
        do {
          auto lhs = parse_tuple_or_element(lex);
          bool is_map = lex.accept("->");
          if (first) entry.kind = is_map ? RawEntry::Kind::Map : RawEntry::Kind::Set;
          else if (is_map != (entry.kind == RawEntry::Kind::Map)) lex.fail("mixed relation and function entries");
          first = false;
          if (is_map) entry.mapping.emplace_back(std::move(lhs), lex.expect_ident("element"));
          else entry.tuples.push_back(std::move(lhs));
        } while (lex.accept(","));
      }
      lex.expect("}");
      entries.push_back(std::move(entry));
    } else {
      RawEntry entry{RawEntry::Kind::Value, symbol, at, {}, {}, lex.expect_ident("element")};
      entries.push_back(std::move(entry));
    }
    if (!lex.accept(";") && !lex.is("}")) lex.fail("expected ';' or '}'");
  }
  lex.expect("}");
  if (!have_domain) lex.fail_at(sig_tok, "structure '" + name + "' lacks 'dom'");
  if (domain.empty()) throw Error(ErrorKind::EmptyDomain, "structure '" + name + "' has an empty domain");

  SignaturePtr sig;
  for (const auto& s : known) {
    if (s->name() == sig_name) sig = s;
  }
  if (!sig) {
    Signature inferred(sig_name);
    for (const auto& e : entries) {
      try {
        if (e.kind == RawEntry::Kind::Value) {
          inferred.add_constant(e.symbol);
        } else if (e.kind == RawEntry::Kind::Map) {
          inferred.add_function(e.symbol, static_cast<int>(e.mapping.front().first.size()));
        } else {
          if (e.tuples.empty()) {
            throw ParseError("cannot infer the arity of empty relation '" + e.symbol + "'", e.at.line, e.at.column);
          }
          inferred.add_relation(e.symbol, static_cast<int>(e.tuples.front().size()));
        }
      } catch (const ParseError&) {
        throw;
      } catch (const Error& err) {
        throw ParseError(err.what(), e.at.line, e.at.column);
      }
    }
    sig = make_signature(std::move(inferred));
  }
  Structure m(sig, domain);
  auto element = [&](const std::string& id, const Token& at) {
    auto e = m.find_element(id);
    if (!e) throw ParseError("unknown element '" + id + "'", at.line, at.column);
    return *e;
  };
  std::vector<char> seen_function(sig->functions().size(), 0);
  std::vector<char> seen_constant(sig->constants().size(), 0);
  for (const auto& e : entries) {
    if (auto r = sig->relation_index(e.symbol); r && e.kind != RawEntry::Kind::Value) {
      if (e.kind == RawEntry::Kind::Map) throw ParseError("'" + e.symbol + "' is a relation", e.at.line, e.at.column);
      const int arity = sig->relations()[*r].arity;
      for (const auto& tuple : e.tuples) {
        if (static_cast<int>(tuple.size()) != arity) {
          throw Error(ErrorKind::Arity, "tuple of wrong length for '" + e.symbol + "' at line " + std::to_string(e.at.line));
        }
        std::vector<int> args;
        for (const auto& id : tuple) args.push_back(element(id, e.at));
        m.set_relation(*r, args, true);
      }
    } else if (auto f = sig->function_index(e.symbol); f && e.kind != RawEntry::Kind::Value) {
      if (e.kind == RawEntry::Kind::Set && !e.tuples.empty()) {
        throw ParseError("'" + e.symbol + "' is a function", e.at.line, e.at.column);
      }
      const int arity = sig->functions()[*f].arity;
      std::vector<char> defined(tuple_count(m.size(), arity), 0);
      for (const auto& [lhs, rhs] : e.mapping) {
        if (static_cast<int>(lhs.size()) != arity) {
          throw Error(ErrorKind::Arity, "argument list of wrong length for '" + e.symbol + "' at line " + std::to_string(e.at.line));
        }
        std::vector<int> args;
        for (const auto& id : lhs) args.push_back(element(id, e.at));
        std::size_t idx = encode_tuple(args, m.size());
        if (defined[idx]) throw ParseError("duplicate entry for '" + e.symbol + "'", e.at.line, e.at.column);
        defined[idx] = 1;
        m.set_function(*f, args, element(rhs, e.at));
      }
      for (char d : defined) {
        if (!d) throw ParseError("function '" + e.symbol + "' is not total", e.at.line, e.at.column);
      }
      seen_function[*f] = 1;
    } else if (auto c = sig->constant_index(e.symbol); c && e.kind == RawEntry::Kind::Value) {
      m.set_constant(*c, element(e.value, e.at));
      seen_constant[*c] = 1;
    } else {
      throw Error(ErrorKind::UnknownSymbol, "symbol '" + e.symbol + "' at line " + std::to_string(e.at.line) +
                                                " does not fit signature '" + sig->name() + "'");
    }
  }
  for (std::size_t f = 0; f < seen_function.size(); ++f) {
    if (!seen_function[f]) throw Error(ErrorKind::InvalidArgument, "function '" + sig->functions()[f].name + "' is missing in structure '" + name + "'");
  }
  for (std::size_t c = 0; c < seen_constant.size(); ++c) {
    if (!seen_constant[c]) throw Error(ErrorKind::InvalidArgument, "constant '" + sig->constants()[c] + "' is missing in structure '" + name + "'");
  }
  return {name, std::move(m)};
}

}  // namespace detail

Signature parse_signature(std::string_view text) {
  detail::Lexer lex(text);
  auto sig = detail::parse_signature_block(lex);
  if (!lex.at_end()) lex.fail("unexpected trailing input");
  return *sig;
}

Document parse_document(std::string_view text, const std::vector<SignaturePtr>& known) {
  detail::Lexer lex(text);
  Document doc;
  std::vector<SignaturePtr> scope = known;
  while (!lex.at_end()) {
    if (lex.is_ident("sig")) {
      auto sig = detail::parse_signature_block(lex);
      doc.signatures.push_back(sig);
      scope.push_back(sig);
    } else if (lex.is_ident("structure")) {
      doc.structures.push_back(detail::parse_structure_block(lex, scope));
    } else {
      lex.fail("expected 'sig' or 'structure'");
    }
  }
  return doc;
}

Structure parse_structure(std::string_view text, const std::vector<SignaturePtr>& known) {
  Document doc = parse_document(text, known);
  if (doc.structures.size() != 1) {
    throw Error(ErrorKind::InvalidArgument,
                "expected exactly one structure, found " + std::to_string(doc.structures.size()));
  }
  return std::move(doc.structures.front().structure);
}

std::string to_text(const Signature& sig) {
  std::ostringstream out;
  out << "sig " << (sig.name().empty() ? "L" : sig.name()) << " {";
  bool first = true;
  auto sep = [&] {
    out << (first ? " " : "; ");
    first = false;
  };
  for (const auto& r : sig.relations()) {
    sep();
    out << "rel " << r.name << "/" << r.arity;
  }
  for (const auto& f : sig.functions()) {
    sep();
    out << "fun " << f.name << "/" << f.arity;
  }
  for (const auto& c : sig.constants()) {
    sep();
    out << "const " << c;
  }
  out << (first ? "}" : " }");
  return out.str();
}

std::string to_text(const Structure& m, std::string_view name) {
  const Signature& sig = m.signature();
  std::ostringstream out;
  out << "structure " << name << " over " << (sig.name().empty() ? "L" : sig.name()) << " { dom = {";
  for (int e = 0; e < m.size(); ++e) out << (e ? ", " : "") << m.element_name(e);
  out << "}";
  for (std::size_t r = 0; r < sig.relations().size(); ++r) {
    out << "; " << sig.relations()[r].name << " = {";
    bool first = true;
    for (const auto& tuple : m.tuples(static_cast<int>(r))) {
      out << (first ? "" : ", ");
      first = false;
      if (tuple.size() == 1) {
        out << m.element_name(tuple[0]);
      } else {
        out << "(";
        for (std::size_t i = 0; i < tuple.size(); ++i) out << (i ? "," : "") << m.element_name(tuple[i]);
        out << ")";
      }
    }
    out << "}";
  }
  std::vector<int> tuple;
  for (std::size_t f = 0; f < sig.functions().size(); ++f) {
    const int arity = sig.functions()[f].arity;
    tuple.resize(static_cast<std::size_t>(arity));
    out << "; " << sig.functions()[f].name << " = {";
    const auto& table = m.function_table(static_cast<int>(f));
    for (std::size_t t = 0; t < table.size(); ++t) {
      decode_tuple(t, m.size(), arity, tuple);
      out << (t ? ", " : "");
      if (arity == 1) {
        out << m.element_name(tuple[0]);
      } else {
        out << "(";
        for (int i = 0; i < arity; ++i) out << (i ? "," : "") << m.element_name(tuple[i]);
        out << ")";
      }
      out << "->" << m.element_name(table[t]);
    }
    out << "}";
  }
  for (std::size_t c = 0; c < sig.constants().size(); ++c) {
    out << "; " << sig.constants()[c] << " = " << m.element_name(m.constant(static_cast<int>(c)));
  }
  out << " }";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << contents;
}

}  // namespace falsilab
