#include "cyclop/proofio.hpp"

#include <array>
#include <charconv>
#include <map>

#include "cyclop/error.hpp"

namespace cyclop {

namespace {

// Terms and formulas nest at most this deep; deeper input is rejected
// rather than risking the stack.
constexpr std::size_t kMaxDepth = 256;

struct Token {
  enum class Kind { Ident, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

[[noreturn]] void fail(ErrorCode code, const Token& t, const std::string& msg) {
  throw ParseError(code, t.line, t.col, msg);
}

[[noreturn]] void syntax(const Token& t, const std::string& msg) {
  fail(ErrorCode::SyntaxError, t, msg);
}

bool ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '\'';
}

enum class Mode { File, Formula };

constexpr std::array<std::string_view, 11> kFilePunct = {"->", "<-", ":=", ";", ":", "/",
                                                         ",",  "(",  ")",  "[", "]"};
constexpr std::array<std::string_view, 13> kFormulaPunct = {
    "/\\", "\\/", "->", "|-", ":=", "(", ")", ",", ".", "=", "~", "[", "]"};

std::vector<Token> lex(std::string_view text, Mode mode, std::size_t line, std::size_t col) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    i += n;
    col += n;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (mode == Mode::File && c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok{Token::Kind::Ident, {}, line, col};
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (mode == Mode::File && c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') syntax(tok, "unterminated string");
      tok.kind = Token::Kind::String;
      tok.text = std::string(text.substr(i + 1, j - i - 1));
      tok.col = col + 1;
      advance(j - i + 1);
      out.push_back(std::move(tok));
      continue;
    }
    bool matched = false;
    auto try_punct = [&](const auto& table) {
      for (std::string_view p : table) {
        if (text.substr(i, p.size()) == p) {
          tok.kind = Token::Kind::Punct;
          tok.text = std::string(p);
          advance(p.size());
          out.push_back(tok);
          matched = true;
          return;
        }
      }
    };
    if (mode == Mode::File)
      try_punct(kFilePunct);
    else
      try_punct(kFormulaPunct);
    if (!matched) {
      const auto byte = static_cast<unsigned char>(c);
      syntax(tok, byte >= 0x20 && byte < 0x7f ? std::string("unexpected character '") + c + "'"
                                              : "unexpected byte " + std::to_string(byte));
    }
  }
  out.push_back(Token{Token::Kind::End, {}, line, col});
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool at_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Punct && peek(k).text == p;
  }
  bool at_ident(std::string_view s) const {
    return peek().kind == Token::Kind::Ident && peek().text == s;
  }
  bool at_ident() const { return peek().kind == Token::Kind::Ident; }

  const Token& expect_punct(std::string_view p) {
    if (!at_punct(p)) syntax(peek(), "expected '" + std::string(p) + "'" + found());
    return next();
  }
  const Token& expect_ident(const std::string& what) {
    if (!at_ident()) syntax(peek(), "expected " + what + found());
    return next();
  }
  const Token& expect_string(const std::string& what) {
    if (peek().kind != Token::Kind::String) syntax(peek(), "expected quoted " + what + found());
    return next();
  }

  std::string found() const {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::End: return ", found end of input";
      case Token::Kind::String: return ", found a string";
      default: return ", found '" + t.text + "'";
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

bool is_keyword(const std::string& s) { return s == "all" || s == "ex"; }

std::size_t parse_number(const Token& t) {
  std::size_t v = 0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (t.kind != Token::Kind::Ident || ec != std::errc() || p != e)
    syntax(t, "expected a number, found '" + t.text + "'");
  return v;
}

// Shared by the file parser and the fragment parsers.
class SyntaxParser {
 public:
  SyntaxParser(Cursor& c, const Signature& sig) : c_(c), sig_(sig) {}

  Term term(std::size_t depth = 0) {
    const Token& tok = c_.expect_ident("a term");
    if (depth > kMaxDepth) syntax(tok, "term nested too deeply");
    const std::string& name = tok.text;
    if (sig_.is_predicate(name)) syntax(tok, "predicate " + name + " used as a term");
    auto f = sig_.functions.find(name);
    if (f == sig_.functions.end()) {
      if (c_.at_punct("(")) fail(ErrorCode::ArityError, tok, "undeclared symbol " + name);
      if (is_keyword(name)) syntax(tok, "keyword " + name + " used as a variable");
      return Term::var(name);
    }
    Term out = Term::app(name);
    if (f->second == 0) {
      if (c_.at_punct("(")) fail(ErrorCode::ArityError, tok, "constant " + name + " takes no arguments");
      return out;
    }
    if (!c_.at_punct("("))
      fail(ErrorCode::ArityError, tok, name + " expects " + std::to_string(f->second) + " argument(s)");
    c_.next();
    out.args.push_back(term(depth + 1));
    while (c_.at_punct(",")) {
      c_.next();
      out.args.push_back(term(depth + 1));
    }
    c_.expect_punct(")");
    if (out.args.size() != f->second)
      fail(ErrorCode::ArityError, tok, name + " expects " + std::to_string(f->second) + " argument(s)");
    return out;
  }

  Formula predicate_atom(std::size_t depth = 0) {
    const Token& tok = c_.expect_ident("a predicate");
    auto it = sig_.predicates.find(tok.text);
    if (it == sig_.predicates.end()) {
      if (c_.at_punct("(")) fail(ErrorCode::ArityError, tok, "undeclared symbol " + tok.text);
      syntax(tok, "expected a predicate, found '" + tok.text + "'");
    }
    std::vector<Term> args;
    if (c_.at_punct("(")) {
      c_.next();
      args.push_back(term(depth + 1));
      while (c_.at_punct(",")) {
        c_.next();
        args.push_back(term(depth + 1));
      }
      c_.expect_punct(")");
    }
    if (args.size() != it->second.arity)
      fail(ErrorCode::ArityError, tok,
           tok.text + " expects " + std::to_string(it->second.arity) + " argument(s)");
    return it->second.inductive ? Formula::inductive(tok.text, std::move(args))
                                : Formula::ordinary(tok.text, std::move(args));
  }

  Formula formula(std::size_t depth = 0) {
    if (depth > kMaxDepth) syntax(c_.peek(), "formula nested too deeply");
    Formula lhs = disjunction(depth);
    if (c_.at_punct("->")) {
      c_.next();
      return Formula::implication(std::move(lhs), formula(depth + 1));
    }
    return lhs;
  }

  Sequent sequent() {
    auto side = [&](bool left) {
      std::vector<Formula> fs;
      const bool empty = left ? c_.at_punct("|-") : c_.at_end();
      if (empty) return fs;
      fs.push_back(formula());
      while (c_.at_punct(",")) {
        c_.next();
        fs.push_back(formula());
      }
      return fs;
    };
    auto ante = side(true);
    c_.expect_punct("|-");
    auto succ = side(false);
    return Sequent(std::move(ante), std::move(succ));
  }

  std::string variable(const std::string& what) {
    const Token& tok = c_.expect_ident(what);
    if (sig_.is_function(tok.text) || sig_.is_predicate(tok.text) || is_keyword(tok.text))
      syntax(tok, "'" + tok.text + "' is not a variable");
    return tok.text;
  }

  Substitution substitution() {
    c_.expect_punct("[");
    std::map<std::string, Term> m;
    if (!c_.at_punct("]")) {
      for (;;) {
        const Token& at = c_.peek();
        std::string x = variable("a variable");
        c_.expect_punct(":=");
        Term t = term();
        if (!m.emplace(x, std::move(t)).second) syntax(at, "variable " + x + " bound twice");
        if (!c_.at_punct(",")) break;
        c_.next();
      }
    }
    c_.expect_punct("]");
    return Substitution(std::move(m));
  }

 private:
  Formula disjunction(std::size_t depth) {
    Formula lhs = conjunction(depth);
    while (c_.at_punct("\\/")) {
      c_.next();
      lhs = Formula::disjunction(std::move(lhs), conjunction(depth));
    }
    return lhs;
  }

  Formula conjunction(std::size_t depth) {
    Formula lhs = unary(depth);
    while (c_.at_punct("/\\")) {
      c_.next();
      lhs = Formula::conjunction(std::move(lhs), unary(depth));
    }
    return lhs;
  }

  Formula unary(std::size_t depth) {
    if (depth > kMaxDepth) syntax(c_.peek(), "formula nested too deeply");
    if (c_.at_punct("~")) {
      c_.next();
      return Formula::negation(unary(depth + 1));
    }
    if (c_.at_punct("(")) {
      c_.next();
      Formula f = formula(depth + 1);
      c_.expect_punct(")");
      return f;
    }
    if (c_.at_ident("all") || c_.at_ident("ex")) {
      const bool universal = c_.next().text == "all";
      std::string x = variable("a bound variable");
      c_.expect_punct(".");
      Formula body = formula(depth + 1);
      return universal ? Formula::forall(std::move(x), std::move(body))
                       : Formula::exists(std::move(x), std::move(body));
    }
    if (c_.at_ident() && sig_.is_predicate(c_.peek().text)) return predicate_atom(depth);
    if (!c_.at_ident()) syntax(c_.peek(), "expected a formula" + c_.found());
    Term lhs = term(depth);
    c_.expect_punct("=");
    Term rhs = term(depth);
    return Formula::equal(std::move(lhs), std::move(rhs));
  }

  Cursor& c_;
  const Signature& sig_;
};

template <class F>
auto parse_fragment(const Signature& sig, std::string_view text, std::size_t line,
                    std::size_t col, F&& body) {
  Cursor c(lex(text, Mode::Formula, line, col));
  SyntaxParser p(c, sig);
  auto result = body(p);
  if (!c.at_end()) syntax(c.peek(), "unexpected trailing input" + c.found());
  return result;
}

class FileParser {
 public:
  explicit FileParser(std::string_view text) : c_(lex(text, Mode::File, 1, 1)) {}

  ProofFile run() {
    while (!c_.at_end()) statement();
    if (out_.proof.nodes.empty()) syntax(c_.peek(), "a proof needs at least one node");
    resolve();
    return std::move(out_);
  }

 private:
  Signature& sig() { return out_.defs.signature(); }

  void statement() {
    const Token& t = c_.peek();
    if (t.kind != Token::Kind::Ident) syntax(t, "expected a statement" + c_.found());
    if (t.text == "sig") return signature_decl(false);
    if (t.text == "pred") return signature_decl(true);
    if (t.text == "prod") {
      c_.next();
      std::optional<Token> label;
      if (c_.at_ident() && c_.at_punct(":", 1)) {
        label = c_.next();
        c_.next();
      }
      return clause(label);
    }
    if (t.text == "rules") return rules_stmt();
    if (t.text == "node") return node_stmt();
    if (t.text == "bud") return bud_stmt();
    if (sig().is_predicate(t.text)) return clause(std::nullopt);
    syntax(t, "expected a statement, found '" + t.text + "'");
  }

  void signature_decl(bool predicates) {
    c_.next();
    do {
      const Token& name = c_.expect_ident("a symbol name");
      if (is_keyword(name.text)) syntax(name, "keyword " + name.text + " cannot be declared");
      c_.expect_punct("/");
      const std::size_t arity = parse_number(c_.next());
      if (arity > 64) fail(ErrorCode::ArityError, name, "arity above 64");
      bool inductive = false;
      if (predicates && c_.at_ident("ind") && !c_.at_punct("/", 1)) {
        c_.next();
        inductive = true;
      }
      declare(name, arity, predicates, inductive);
    } while (!c_.at_punct(";"));
    c_.next();
  }

  void declare(const Token& name, std::size_t arity, bool predicate, bool inductive) {
    auto& s = sig();
    const bool other = predicate ? s.is_function(name.text) : s.is_predicate(name.text);
    if (other) syntax(name, name.text + " is already declared with a different kind");
    if (predicate) {
      auto [it, fresh] = s.predicates.emplace(name.text, PredicateInfo{arity, inductive});
      if (!fresh && (it->second.arity != arity || it->second.inductive != inductive))
        fail(ErrorCode::ArityError, name, "conflicting declaration of " + name.text);
    } else {
      auto [it, fresh] = s.functions.emplace(name.text, arity);
      if (!fresh && it->second != arity)
        fail(ErrorCode::ArityError, name, "conflicting declaration of " + name.text);
    }
  }

  void clause(const std::optional<Token>& label) {
    SyntaxParser p(c_, sig());
    const Token head_tok = c_.peek();
    Formula head = p.predicate_atom();
    if (!head.is_inductive_atom()) syntax(head_tok, "production head " + head.symbol + " is not inductive");
    if (label && label->text != head.symbol)
      syntax(*label, "label " + label->text + " does not match head " + head.symbol);
    c_.expect_punct("<-");
    std::vector<Formula> body;
    if (!c_.at_punct(";")) {
      body.push_back(p.predicate_atom());
      while (c_.at_punct(",")) {
        c_.next();
        body.push_back(p.predicate_atom());
      }
    }
    c_.expect_punct(";");
    try {
      out_.defs.add(Production{head.symbol, {}, head.args, std::move(body)});
    } catch (const Error& e) {
      syntax(head_tok, e.what());
    }
  }

  void rules_stmt() {
    c_.next();
    const Token& name = c_.expect_ident("a rule-set name");
    if (!RuleSet::preset(name.text)) syntax(name, "unknown rule set " + name.text);
    if (out_.rules) syntax(name, "duplicate rules statement");
    out_.rules = name.text;
    c_.expect_punct(";");
  }

  Sequent sequent_of(const Token& t) {
    return parse_fragment(sig(), t.text, t.line, t.col, [](SyntaxParser& p) { return p.sequent(); });
  }
  Formula formula_of(const Token& t) {
    return parse_fragment(sig(), t.text, t.line, t.col, [](SyntaxParser& p) { return p.formula(); });
  }
  Term term_of(const Token& t) {
    return parse_fragment(sig(), t.text, t.line, t.col, [](SyntaxParser& p) { return p.term(); });
  }

  void node_stmt() {
    c_.next();
    const Token name = c_.expect_ident("a node name");
    if (names_.count(name.text)) syntax(name, "duplicate node " + name.text);
    ProofNode node;
    node.name = name.text;
    node.sequent = sequent_of(c_.expect_string("sequent"));
    std::vector<Token> from;
    if (c_.at_ident("bud")) {
      c_.next();
      node.kind = ProofNode::Kind::Bud;
    } else if (c_.at_ident("open")) {
      c_.next();
      node.kind = ProofNode::Kind::Open;
    } else {
      if (!c_.at_ident("rule")) syntax(c_.peek(), "expected 'rule', 'bud' or 'open'" + c_.found());
      c_.next();
      const Token& rt = c_.expect_ident("a rule name");
      auto rule = rule_from_name(rt.text);
      if (!rule) syntax(rt, "unknown rule " + rt.text);
      node.rule = *rule;
      annotations(node);
      if (c_.at_ident("from")) {
        c_.next();
        do from.push_back(c_.expect_ident("a node name"));
        while (c_.at_ident());
      }
    }
    c_.expect_punct(";");
    names_.emplace(node.name, out_.proof.nodes.size());
    from_.push_back(std::move(from));
    out_.proof.add(std::move(node));
  }

  void annotations(ProofNode& node) {
    Annotation& a = node.ann;
    std::map<std::string, bool> seen;
    while (c_.at_ident() && !c_.at_ident("from")) {
      const Token key = c_.next();
      if (seen[key.text]) syntax(key, "duplicate annotation " + key.text);
      seen[key.text] = true;
      SyntaxParser p(c_, sig());
      if (key.text == "target") {
        if (c_.peek().kind == Token::Kind::String) {
          a.target = formula_of(c_.next());
        } else {
          const Token& it = c_.next();
          const std::size_t idx = parse_number(it);
          const auto& side = is_left_rule(node.rule) ? node.sequent.antecedent()
                                                     : node.sequent.succedent();
          if (idx >= side.size()) syntax(it, "target index out of range");
          a.target = side[idx];
        }
      } else if (key.text == "cut") {
        a.cut = formula_of(c_.expect_string("formula"));
      } else if (key.text == "subst") {
        a.subst = p.substitution();
      } else if (key.text == "term") {
        a.term = term_of(c_.expect_string("term"));
      } else if (key.text == "eigen") {
        a.eigen = p.variable("an eigenvariable");
      } else if (key.text == "holes") {
        a.hole_l = p.variable("a hole variable");
        a.hole_r = p.variable("a hole variable");
      } else if (key.text == "template") {
        a.tmpl = sequent_of(c_.expect_string("template sequent"));
      } else if (key.text == "fresh") {
        if (!c_.at_punct("[")) syntax(c_.peek(), "expected '['" + c_.found());
        while (c_.at_punct("[")) {
          c_.next();
          a.fresh.emplace_back();
          while (!c_.at_punct("]")) {
            a.fresh.back().push_back(p.variable("a fresh variable"));
            if (c_.at_punct(",")) c_.next();
          }
          c_.next();
        }
      } else if (key.text == "prod") {
        a.production = parse_number(c_.next());
      } else if (key.text == "with") {
        do a.with.push_back(term_of(c_.expect_string("term")));
        while (c_.peek().kind == Token::Kind::String);
      } else {
        syntax(key, "unknown annotation " + key.text);
      }
    }
  }

  void bud_stmt() {
    c_.next();
    Token bud = c_.expect_ident("a bud name");
    c_.expect_punct("->");
    Token comp = c_.expect_ident("a companion name");
    c_.expect_punct(";");
    links_.emplace_back(std::move(bud), std::move(comp));
  }

  NodeId lookup(const Token& t) const {
    auto it = names_.find(t.text);
    if (it == names_.end()) fail(ErrorCode::UnresolvedReference, t, "unknown node " + t.text);
    return it->second;
  }

  void resolve() {
    auto& pre = out_.proof;
    for (NodeId i = 0; i < pre.nodes.size(); ++i)
      for (const Token& t : from_[i]) pre.nodes[i].premises.push_back(lookup(t));
    for (const auto& [bud, comp] : links_) {
      const NodeId b = lookup(bud);
      if (!pre.companions.emplace(b, lookup(comp)).second)
        syntax(bud, "bud " + bud.text + " linked twice");
    }
    pre.root = 0;
  }

  Cursor c_;
  ProofFile out_;
  std::map<std::string, NodeId> names_;
  std::vector<std::vector<Token>> from_;
  std::vector<std::pair<Token, Token>> links_;
};

std::string annotation_text(const ProofNode& n) {
  const Annotation& a = n.ann;
  std::string out;
  if (a.target) {
    const std::size_t idx = is_left_rule(n.rule) ? n.sequent.find_antecedent(*a.target)
                                                 : n.sequent.find_succedent(*a.target);
    out += idx == Sequent::npos ? " target \"" + to_string(*a.target) + "\""
                                : " target " + std::to_string(idx);
  }
  if (a.cut) out += " cut \"" + to_string(*a.cut) + "\"";
  if (n.rule == RuleId::Subst) out += " subst " + to_string(a.subst);
  if (a.term) out += " term \"" + to_string(*a.term) + "\"";
  if (a.eigen) out += " eigen " + *a.eigen;
  if (!a.hole_l.empty() || !a.hole_r.empty()) out += " holes " + a.hole_l + " " + a.hole_r;
  if (a.tmpl) out += " template \"" + to_string(*a.tmpl) + "\"";
  if (!a.fresh.empty()) {
    out += " fresh ";
    for (const auto& v : a.fresh) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
      out += "]";
    }
  }
  if (n.rule == RuleId::UR) out += " prod " + std::to_string(a.production);
  if (!a.with.empty()) {
    out += " with";
    for (const auto& t : a.with) out += " \"" + to_string(t) + "\"";
  }
  return out;
}

}  // namespace

ProofFile parse_proof_file(std::string_view text) { return FileParser(text).run(); }

Term parse_term(const Signature& sig, std::string_view text) {
  return parse_fragment(sig, text, 1, 1, [](SyntaxParser& p) { return p.term(); });
}

Formula parse_formula(const Signature& sig, std::string_view text) {
  return parse_fragment(sig, text, 1, 1, [](SyntaxParser& p) { return p.formula(); });
}

Sequent parse_sequent(const Signature& sig, std::string_view text) {
  return parse_fragment(sig, text, 1, 1, [](SyntaxParser& p) { return p.sequent(); });
}

Substitution parse_substitution(const Signature& sig, std::string_view text) {
  return parse_fragment(sig, text, 1, 1, [](SyntaxParser& p) { return p.substitution(); });
}

std::string print_proof_file(const ProofFile& file) {
  const PreProof& pre = file.proof;
  if (pre.nodes.empty()) throw Error(ErrorCode::InvalidInput, "cannot print an empty proof");
  const Signature& sig = file.defs.signature();
  std::string out;
  if (!sig.functions.empty()) {
    out += "sig";
    for (const auto& [f, n] : sig.functions) out += " " + f + "/" + std::to_string(n);
    out += ";\n";
  }
  if (!sig.predicates.empty()) {
    out += "pred";
    for (const auto& [p, info] : sig.predicates)
      out += " " + p + "/" + std::to_string(info.arity) + (info.inductive ? " ind" : "");
    out += ";\n";
  }
  for (const auto& prod : file.defs.productions()) {
    out += "prod " + to_string(prod.head()) + " <-";
    for (std::size_t i = 0; i < prod.body.size(); ++i)
      out += (i ? ", " : " ") + to_string(prod.body[i]);
    out += prod.body.empty() ? " ;\n" : ";\n";
  }
  if (file.rules) out += "rules " + *file.rules + ";\n";
  out += "\n";

  std::vector<NodeId> order;
  std::vector<bool> placed(pre.nodes.size(), false);
  std::vector<NodeId> stack{pre.root};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    if (id >= pre.nodes.size() || placed[id]) continue;
    placed[id] = true;
    order.push_back(id);
    const auto& ps = pre.nodes[id].premises;
    stack.insert(stack.end(), ps.rbegin(), ps.rend());
  }
  for (NodeId i = 0; i < pre.nodes.size(); ++i)
    if (!placed[i]) order.push_back(i);

  for (NodeId id : order) {
    const ProofNode& n = pre.nodes[id];
    out += "node " + n.name + " \"" + to_string(n.sequent) + "\"";
    switch (n.kind) {
      case ProofNode::Kind::Bud: out += " bud"; break;
      case ProofNode::Kind::Open: out += " open"; break;
      case ProofNode::Kind::Rule:
        out += " rule " + std::string(rule_name(n.rule)) + annotation_text(n);
        if (!n.premises.empty()) {
          out += " from";
          for (NodeId p : n.premises) out += " " + pre.nodes[p].name;
        }
        break;
    }
    out += ";\n";
  }
  bool first = true;
  for (NodeId id : order) {
    auto it = pre.companions.find(id);
    if (it == pre.companions.end()) continue;
    if (first) out += "\n";
    first = false;
    out += "bud " + pre.nodes[id].name + " -> " + pre.nodes[it->second].name + ";\n";
  }
  return out;
}

}  // namespace cyclop
