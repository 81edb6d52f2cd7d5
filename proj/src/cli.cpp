#include "cyclop/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cyclop/eliminator.hpp"
#include "cyclop/error.hpp"
#include "cyclop/gtc.hpp"
#include "cyclop/proofio.hpp"
#include "cyclop/psc.hpp"

namespace cyclop::cli {

namespace {

namespace fs = std::filesystem;

// Usage and IO failures; always exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  std::string rules;
  std::string strategy = "eager";
  std::string format = "human";
  std::size_t depth = 0;
  std::size_t depth_cap = 0;
  bool certificate = false;
  bool verify = false;
  bool stats = false;
  std::string vars;
  std::string consts;
  std::string funs;
  std::vector<std::string> base;
};

// Sink for one invocation's report. Human mode prints prose lines, the
// structured mode prints one key=value record per line.
class Report {
 public:
  Report(std::ostream& os, bool structured) : os_(os), structured_(structured) {}
  bool structured() const { return structured_; }
  void say(const std::string& line) {
    if (!structured_) os_ << line << '\n';
  }
  template <class T>
  void put(const std::string& key, const T& value) {
    if (structured_) os_ << key << '=' << value << '\n';
  }

 private:
  std::ostream& os_;
  bool structured_;
};

fs::path locate(const std::string& input) {
  const fs::path p(input);
  if (fs::exists(p) || p.is_absolute()) return p;
  if (const char* dir = std::getenv("CYCLOP_CORPUS")) {
    const fs::path q = fs::path(dir) / p;
    if (fs::exists(q)) return q;
  }
  return p;
}

std::string read_file(const std::string& input) {
  const fs::path p = locate(input);
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read " + input);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes next to the target and renames, so a failed run never leaves a
// truncated file behind.
void write_atomic(const std::string& path, const std::string& text) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw UsageError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw UsageError("cannot rename onto " + path);
  }
}

std::string rules_name(const Options& o, const ProofFile& f) {
  if (!o.rules.empty()) return o.rules;
  return f.rules.value_or("full");
}

std::string join_path(const PreProof& p, const std::vector<NodeId>& path) {
  std::string s;
  for (NodeId n : path) s += (s.empty() ? "" : " ") + p.nodes[n].name;
  return s;
}

std::string relation(const TraceRel& r) {
  std::string s = "{";
  for (const auto& p : r.pairs()) {
    if (s.size() > 1) s += ", ";
    s += std::to_string(p.from) + "->" + std::to_string(p.to) + (p.progress ? "!" : "");
  }
  return s + "}";
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct Loaded {
  ProofFile file;
  RuleSet rules;
  std::string rules_name;
};

Loaded load(const Options& o) {
  Loaded l{parse_proof_file(read_file(o.input)), {}, {}};
  l.rules_name = rules_name(o, l.file);
  const auto preset = RuleSet::preset(l.rules_name);
  if (!preset) throw UsageError("unknown rule set " + l.rules_name);
  l.rules = *preset;
  return l;
}

void report_lasso(Report& r, const PreProof& p, const Lasso& lasso) {
  r.say("stem: " + join_path(p, lasso.stem));
  r.say("loop: " + join_path(p, lasso.loop));
  r.say("loop relation: " + relation(lasso.loop_rel));
  r.put("lasso.stem", join_path(p, lasso.stem));
  r.put("lasso.loop", join_path(p, lasso.loop));
  r.put("lasso.relation", relation(lasso.loop_rel));
}

int cmd_check(const Options& o, Report& r, std::ostream& err) {
  const Loaded l = load(o);
  const PreProof& p = l.file.proof;
  r.put("command", "check");
  r.put("nodes", p.nodes.size());
  r.put("buds", p.companions.size());
  EdgeTable edges;
  try {
    edges = validate(p, l.file.defs, l.rules);
  } catch (const Error& e) {
    err << o.input << ": invalid pre-proof: " << e.what() << '\n';
    r.put("valid", "false");
    return kNegative;
  }
  r.put("valid", "true");
  const GtcVerdict v = check_gtc(p, edges);
  r.put("gtc", v.holds ? "holds" : "fails");
  r.say(std::string("valid cyclic pre-proof; GTC ") + (v.holds ? "holds" : "fails"));
  if (v.counterexample) report_lasso(r, p, *v.counterexample);
  return v.holds ? kOk : kNegative;
}

int cmd_gtc(const Options& o, Report& r, std::ostream& err) {
  const Loaded l = load(o);
  const PreProof& p = l.file.proof;
  EdgeTable edges;
  try {
    edges = validate(p, l.file.defs, l.rules);
  } catch (const Error& e) {
    err << o.input << ": invalid pre-proof: " << e.what() << '\n';
    return kNegative;
  }
  const GtcVerdict v = check_gtc(p, edges);
  r.put("command", "gtc");
  r.put("gtc", v.holds ? "holds" : "fails");
  r.put("summaries", v.summaries);
  r.say(std::string("GTC ") + (v.holds ? "holds" : "fails") + " (" + std::to_string(v.summaries) +
        (v.summaries == 1 ? " summary)" : " summaries)"));
  if (v.counterexample) report_lasso(r, p, *v.counterexample);
  if (v.holds && o.certificate) {
    r.put("certificate.entries", v.certificate.size());
    for (const auto& e : v.certificate) {
      r.say("certificate: " + join_path(p, e.loop) + " : " + relation(e.rel));
      r.put("certificate", join_path(p, e.loop) + " : " + relation(e.rel));
    }
  }
  return v.holds ? kOk : kNegative;
}

int cmd_elim(const Options& o, std::ostream& out, std::ostream& err) {
  const Loaded l = load(o);
  ElimConfig cfg;
  cfg.strategy = o.strategy == "bound" ? Strategy::WorstCaseBound : Strategy::Eager;
  cfg.rules = l.rules;
  cfg.verify = o.verify;
  if (o.depth_cap != 0) cfg.depth_cap = o.depth_cap;

  const ElimReport rep = eliminate_subst(l.file.proof, l.file.defs, cfg);
  ProofFile result{l.file.defs, rep.output, std::nullopt};
  if (l.rules_name != "full") result.rules = l.rules_name;
  const std::string text = print_proof_file(result);

  bool ok = true;
  if (o.verify) {
    ok = rep.verification && rep.verification->holds &&
         check_trace_transport(rep, l.file.defs, l.rules);
  }

  // Proof text on stdout only when no output file was named; the report
  // then moves to the error stream.
  std::ostream& report_os = o.output.empty() ? err : out;
  Report r(report_os, o.format == "lines");
  if (ok) {
    if (o.output.empty())
      out << text;
    else
      write_atomic(o.output, text);
  }
  r.put("command", "elim-subst");
  r.put("subst_nodes", count_rule(rep.output, RuleId::Subst));
  if (o.verify) {
    r.put("verified", ok ? "true" : "false");
    r.say(ok ? "verified: output validates, GTC holds, traces transported"
             : "verification failed; no output written");
  }
  if (o.stats) {
    const ElimStats& s = rep.stats;
    r.put("composite_rewrites", s.composite_rewrites);
    r.put("closure_size", s.closure_size);
    r.put("depth_bound", s.depth_bound);
    r.put("depth_reached", s.depth_reached);
    r.put("nodes_generated", s.nodes_generated);
    r.put("output_nodes", rep.output.nodes.size());
    r.put("buds", s.buds);
    r.put("namespace_extended", s.namespace_extended ? "true" : "false");
    r.say("composite rewrites: " + std::to_string(s.composite_rewrites));
    r.say("closure size: " + std::to_string(s.closure_size));
    r.say("depth bound: " + std::to_string(s.depth_bound));
    r.say("depth reached: " + std::to_string(s.depth_reached));
    r.say("nodes generated: " + std::to_string(s.nodes_generated));
    r.say("output nodes: " + std::to_string(rep.output.nodes.size()));
    r.say("buds: " + std::to_string(s.buds));
    r.say(std::string("namespace extended: ") + (s.namespace_extended ? "yes" : "no"));
  }
  return ok ? kOk : kNegative;
}

int cmd_unfold(const Options& o, Report& r) {
  const Loaded l = load(o);
  validate(l.file.proof, l.file.defs, l.rules);
  const UnfoldedProof u(l.file.proof);
  const Materialized m = materialize(u, o.depth);
  const PreProof& src = l.file.proof;
  r.put("command", "unfold");
  r.put("depth", o.depth);
  r.put("nodes", m.tree.nodes.size());
  std::vector<std::pair<NodeId, std::size_t>> stack{{m.tree.root, 0}};
  while (!stack.empty()) {
    const auto [id, d] = stack.back();
    stack.pop_back();
    const ProofNode& n = m.tree.nodes[id];
    const std::string rule =
        n.kind == ProofNode::Kind::Open ? "open" : std::string(rule_name(n.rule));
    const std::string& source = src.nodes[m.fmap[id]].name;
    r.say(std::string(2 * d, ' ') + source + "  " + to_string(n.sequent) + "  [" + rule + "]");
    r.put("node", std::to_string(d) + " " + source + " " + rule);
    for (auto it = n.premises.rbegin(); it != n.premises.rend(); ++it) stack.push_back({*it, d + 1});
  }
  return kOk;
}

int cmd_psc(const Options& o, Report& r) {
  Signature sig;
  for (const auto& c : split_list(o.consts)) sig.functions.emplace(c, 0);
  for (const auto& f : split_list(o.funs)) {
    const auto slash = f.find('/');
    std::size_t arity = 0;
    if (slash == std::string::npos || slash == 0 ||
        !CLI::detail::lexical_cast(f.substr(slash + 1), arity))
      throw UsageError("function symbols are name/arity, got " + f);
    sig.functions.emplace(f.substr(0, slash), arity);
  }
  ClosureInput in;
  for (const auto& v : split_list(o.vars)) in.vars.insert(v);
  for (const auto& b : o.base) in.base.push_back(parse_substitution(sig, b));
  const Closure c = psc(in);
  const std::uint64_t bound = psc_bound(in);
  r.put("command", "psc");
  r.put("size", c.size());
  r.put("bound", bound);
  for (const auto& e : c.elements) {
    r.say(to_string(e));
    r.put("element", to_string(e));
  }
  r.say(std::to_string(c.size()) + " element(s), bound " + std::to_string(bound));
  return kOk;
}

bool is_parse_code(ErrorCode c) {
  return c == ErrorCode::SyntaxError || c == ErrorCode::ArityError ||
         c == ErrorCode::UnresolvedReference;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cyclic proof kernel: validation, trace condition, substitution elimination",
               "cyclop"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"human", "lines"}));

  const std::vector<std::string> presets{"full", "cutfree", "freshl", "section4"};
  auto with_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "Proof file (.cpf)")->required();
    sub->add_option("--rules", o.rules, "Rule set; overrides the file's rules statement")
        ->check(CLI::IsMember(presets));
    return sub;
  };

  auto* check = with_input(app.add_subcommand("check", "Validate a pre-proof and decide the GTC"));
  auto* gtc = with_input(app.add_subcommand("gtc", "Decide the GTC, with lasso or certificate"));
  gtc->add_flag("--certificate", o.certificate, "Print every idempotent loop summary");
  auto* elim = with_input(app.add_subcommand("elim-subst", "Eliminate the substitution rule"));
  elim->add_option("-o,--output", o.output, "Output file; stdout when absent");
  elim->add_option("--strategy", o.strategy, "eager or bound")
      ->check(CLI::IsMember({"eager", "bound"}));
  elim->add_option("--depth-cap", o.depth_cap, "Eager depth cap")->check(CLI::PositiveNumber);
  elim->add_flag("--verify", o.verify, "Re-check the output and its trace transport");
  elim->add_flag("--stats", o.stats, "Report elimination statistics");
  auto* unfold = with_input(app.add_subcommand("unfold", "Print the tree unfolding to a depth"));
  unfold->add_option("--depth", o.depth, "Depth to materialize")->required();
  auto* closure = app.add_subcommand("psc", "Partial-substitution closure of atomic substitutions");
  closure->add_option("--vars", o.vars, "Comma-separated variable set")->required();
  closure->add_option("--consts", o.consts, "Comma-separated constant symbols");
  closure->add_option("--funs", o.funs, "Comma-separated function symbols as name/arity");
  closure->add_option("--base", o.base, "Base substitution, e.g. \"[y := x]\"; repeatable")
      ->allow_extra_args(false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Report r(out, o.format == "lines");
  try {
    if (*check) return cmd_check(o, r, err);
    if (*gtc) return cmd_gtc(o, r, err);
    if (*elim) return cmd_elim(o, out, err);
    if (*unfold) return cmd_unfold(o, r);
    if (*closure) return cmd_psc(o, r);
  } catch (const ParseError& e) {
    err << (o.input.empty() ? "argument" : o.input) << ":" << e.line() << ":" << e.column() << ": "
        << to_string(e.code()) << ": " << e.message() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_parse_code(e.code()) ? kUsage : kNegative;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace cyclop::cli
