// clonesmith: exact computation with ternary operations on small finite sets.
//
// Subcommands cover closure and minimality of clones generated by majority
// operations, invariant binary relations, term evaluation and cyclic shifts,
// the one-point star extension, canonical forms, exhaustive searches with
// checkpoint/resume, and a one-shot verification of the bundled fixtures.

#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clonesmith/acceptance.hpp"
#include "clonesmith/canonical.hpp"
#include "clonesmith/fixtures.hpp"
#include "clonesmith/io.hpp"
#include "clonesmith/menger.hpp"
#include "clonesmith/minimality.hpp"
#include "clonesmith/relations.hpp"
#include "clonesmith/search.hpp"
#include "clonesmith/star.hpp"
#include "clonesmith/term.hpp"
#include "clonesmith/verify.hpp"

namespace {

using namespace clonesmith;

constexpr int kExitOk = 0;
constexpr int kExitNonMinimal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct OpSource {
  std::string fixture;
  std::string file;

  TernaryOp load() const {
    if (!fixture.empty() && !file.empty())
      throw Error("--fixture and --op are mutually exclusive");
    if (!fixture.empty()) return fixtures::fixture(fixture);
    if (!file.empty()) return read_op_file(file);
    throw Error("one of --fixture or --op is required");
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--fixture", fixture, "bundled operation name (see `fixtures export`)");
    cmd->add_option("--op", file, "operation file (JSON)");
  }
};

std::size_t default_closure_bound() {
  if (const char* env = std::getenv("CLONESMITH_CLOSURE_BOUND")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw Error("CLONESMITH_CLOSURE_BOUND must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  return kDefaultClosureBound;
}

void emit_op(const TernaryOp& op, const std::string& out_path) {
  if (out_path.empty())
    std::cout << op_to_string(op);
  else
    write_op_file(out_path, op);
}

std::vector<int> parse_label_list(const Universe& u, const std::string& csv) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    auto idx = u.index_of(item);
    if (!idx) throw Error("unknown element label: \"" + item + "\"");
    out.push_back(*idx);
  }
  if (out.empty()) throw Error("empty element list");
  return out;
}

std::pair<BigIndex, BigIndex> parse_range(const std::string& text) {
  const auto sep = text.find("..");
  if (sep == std::string::npos)
    throw Error("range must have the form LO..HI (decimal candidate indices)");
  return {index_from_string(text.substr(0, sep)), index_from_string(text.substr(sep + 2))};
}

std::string self_path() {
  char buf[4096];
  const ssize_t len = readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (len <= 0) return "";
  buf[len] = '\0';
  return std::string(buf);
}

int cmd_closure(const OpSource& source, std::size_t bound, const std::string& format, bool dump) {
  TernaryOp op = source.load();
  OpSet closure = ternary_closure(op, bound);
  OpSet majority = majority_members(closure);
  if (format == "json") {
    OrderedJson j;
    j["members"] = closure.size();
    j["majority"] = majority.size();
    if (dump) j["opset"] = opset_to_json(closure);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "members: " << closure.size() << ", majority: " << majority.size() << "\n";
    if (dump)
      for (std::size_t i = 0; i < closure.size(); ++i) {
        std::cout << i << ":";
        for (std::uint8_t v : closure[i].table()) std::cout << " " << static_cast<int>(v);
        std::cout << "\n";
      }
  }
  return kExitOk;
}

int cmd_minimal(const OpSource& source, std::size_t bound, const std::string& format,
                bool witnesses) {
  TernaryOp op = source.load();
  if (!is_majority(op)) throw Error("minimal: input operation is not a majority operation");
  MinimalityReport report = minimality_check(op, bound, witnesses);
  if (format == "json") {
    std::cout << minimality_report_to_json(report).dump(2) << "\n";
  } else if (report.minimal) {
    std::cout << "minimal: yes (closure " << report.closure_size << ", majority "
              << report.majority_count << ")\n";
    if (report.regeneration_witnesses) {
      for (const auto& [rep, term] : *report.regeneration_witnesses)
        std::cout << "witness: " << format_term(term) << "\n";
    }
  } else {
    std::cout << "minimal: no\n";
    std::cout << "counterexample:\n" << op_to_string(*report.counterexample);
  }
  return report.minimal ? kExitOk : kExitNonMinimal;
}

int cmd_search(int n, bool cyclic, const std::string& range, int jobs,
               const std::string& checkpoint, const std::string& catalog, std::size_t bound,
               bool skip_conservative, bool canonical_first, const std::string& format) {
  SearchConfig cfg;
  cfg.n = n;
  cfg.mode = cyclic ? SymmetryMode::Cyclic : SymmetryMode::All;
  if (!range.empty()) {
    auto [lo, hi] = parse_range(range);
    cfg.lo = lo;
    cfg.hi = hi;
  }
  cfg.jobs = jobs;
  cfg.checkpoint_path = checkpoint;
  cfg.closure_bound = bound;
  cfg.skip_conservative = skip_conservative;
  cfg.canonical_first = canonical_first;
  SearchResult res = run_search(cfg);

  if (!catalog.empty()) {
    std::string lines;
    for (const auto& r : res.records) lines += search_record_to_json(r).dump() + "\n";
    atomic_write_file(catalog, lines);
  }
  if (format == "json") {
    OrderedJson j;
    j["n"] = res.n;
    j["mode"] = to_string(res.mode);
    j["scanned"] = index_to_string(res.scanned);
    j["next_index"] = index_to_string(res.next_index);
    j["classes"] = res.records.size();
    OrderedJson undecided = OrderedJson::array();
    for (const auto& u : res.undecided) undecided.push_back(index_to_string(u));
    j["undecided"] = std::move(undecided);
    OrderedJson hits = OrderedJson::array();
    for (const auto& r : res.records) hits.push_back(search_record_to_json(r));
    j["hits"] = std::move(hits);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "scanned: " << index_to_string(res.scanned)
              << ", classes: " << res.records.size() << ", undecided: " << res.undecided.size()
              << "\n";
    for (const auto& r : res.records)
      std::cout << "hit " << index_to_string(r.index) << ": majority " << r.majority_count
                << ", closure " << r.closure_size << (r.conservative ? ", conservative" : "")
                << (r.cyclic ? ", cyclic" : "") << "\n";
    if (!res.undecided.empty()) {
      std::cout << "undecided indices:";
      for (const auto& u : res.undecided) std::cout << " " << index_to_string(u);
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int cmd_canon(const OpSource& source, const std::string& mode, const std::string& format) {
  TernaryOp op = source.load();
  CanonMode m;
  if (mode == "relabel-only")
    m = CanonMode::RelabelOnly;
  else if (mode == "relabel-and-varperm")
    m = CanonMode::RelabelAndVars;
  else
    throw Error("canon mode must be relabel-only or relabel-and-varperm");
  CanonicalForm canon = canonical_form(op, m);
  if (format == "json") {
    OrderedJson j;
    j["canonical"] = op_to_json(canon.op);
    j["sigma"] = canon.sigma;
    j["varperm"] = std::vector<int>(canon.pi.begin(), canon.pi.end());
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "canonical:";
    for (std::uint8_t v : canon.op.table()) std::cout << " " << static_cast<int>(v);
    std::cout << "\nsigma:";
    for (int v : canon.sigma) std::cout << " " << v;
    std::cout << "\nvarperm:";
    for (int v : canon.pi) std::cout << " " << v + 1;
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_relpairs(const OpSource& source, const std::vector<std::string>& seeds,
                 const std::string& format) {
  TernaryOp op = source.load();
  if (seeds.empty()) throw Error("relpairs: at least one --seed A,B pair is required");
  std::vector<std::pair<int, int>> seed_pairs;
  for (const auto& s : seeds) {
    auto elems = parse_label_list(op.universe(), s);
    if (elems.size() != 2) throw Error("relpairs: --seed takes exactly two labels: \"" + s + "\"");
    seed_pairs.emplace_back(elems[0], elems[1]);
  }
  BinaryRelation rel = generate_invariant_pairs(op, seed_pairs);
  if (format == "json") {
    std::cout << relation_to_json(rel).dump(2) << "\n";
  } else {
    std::cout << "pairs:";
    for (const auto& [a, b] : rel.pairs())
      std::cout << " (" << op.universe().label(a) << "," << op.universe().label(b) << ")";
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_term_eval(const OpSource& source, const std::string& term_text,
                  const std::string& out_path) {
  TernaryOp op = source.load();
  Term t = parse_term(term_text);
  emit_op(eval_term(t, op), out_path);
  return kExitOk;
}

int cmd_term_shift(const std::string& term_text, const std::string& format) {
  Term t = parse_term(term_text);
  auto triple = constructive_shift_triple(t);
  if (format == "json") {
    OrderedJson j;
    for (int i = 0; i < 3; ++i)
      j["s" + std::to_string(i + 1)] = format_term(triple[static_cast<std::size_t>(i)]);
    std::cout << j.dump(2) << "\n";
  } else {
    for (int i = 0; i < 3; ++i)
      std::cout << "s" << i + 1 << " = " << format_term(triple[static_cast<std::size_t>(i)])
                << "  [d" << i + 1 << "]\n";
  }
  return kExitOk;
}

int cmd_verify_paper(int jobs, const std::string& fixtures_dir, const std::string& scratch_dir) {
  verify::FixtureLookup lookup = fixtures_dir.empty()
                                     ? verify::embedded_fixtures()
                                     : verify::directory_fixtures(fixtures_dir);
  std::vector<verify::CheckResult> all = verify::verify_fixture_suite(lookup);
  verify::AcceptanceOptions options;
  options.jobs = jobs;
  options.cli_path = self_path();
  options.scratch_dir = scratch_dir;
  for (auto& r : verify::run_acceptance(options)) all.push_back(std::move(r));

  bool ok = true;
  for (const auto& r : all) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
    std::printf(" (%.2fs)", r.seconds);
    if (!r.detail.empty()) std::cout << ": " << r.detail;
    std::cout << "\n";
    ok = ok && r.passed;
  }
  std::cout << (ok ? "verify-paper: all checks passed" : "verify-paper: FAILURES above") << "\n";
  return ok ? kExitOk : kExitNonMinimal;
}

int cmd_fixtures_export(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& name : fixtures::fixture_names())
    write_op_file(dir + "/" + name + ".json", fixtures::fixture(name));
  std::cout << "exported " << fixtures::fixture_names().size() << " fixtures to " << dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact clone computations for ternary operations on small finite sets"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string format = "text";

  // closure
  {
    auto* cmd = app.add_subcommand("closure", "ternary closure size and majority count");
    auto source = std::make_shared<OpSource>();
    source->attach(cmd);
    auto bound = std::make_shared<std::size_t>(0);
    auto dump = std::make_shared<bool>(false);
    cmd->add_option("--closure-bound", *bound, "closure member bound");
    cmd->add_flag("--dump", *dump, "also print every member table");
    cmd->add_option("--format", format, "text|json");
    cmd->callback([&, source, bound, dump] {
      action = [&, source, bound, dump] {
        return cmd_closure(*source, *bound ? *bound : default_closure_bound(), format, *dump);
      };
    });
  }
  // minimal
  {
    auto* cmd = app.add_subcommand("minimal", "decide the majority minimality criterion");
    auto source = std::make_shared<OpSource>();
    source->attach(cmd);
    auto bound = std::make_shared<std::size_t>(0);
    auto witnesses = std::make_shared<bool>(false);
    cmd->add_option("--closure-bound", *bound, "closure member bound");
    cmd->add_flag("--witnesses", *witnesses, "emit one regeneration term per class");
    cmd->add_option("--format", format, "text|json");
    cmd->callback([&, source, bound, witnesses] {
      action = [&, source, bound, witnesses] {
        return cmd_minimal(*source, *bound ? *bound : default_closure_bound(), format,
                           *witnesses);
      };
    });
  }
  // search
  {
    auto* cmd = app.add_subcommand("search", "exhaustive majority-operation search");
    auto n = std::make_shared<int>(0);
    auto cyclic = std::make_shared<bool>(false);
    auto range = std::make_shared<std::string>();
    auto jobs = std::make_shared<int>(1);
    auto checkpoint = std::make_shared<std::string>();
    auto catalog = std::make_shared<std::string>();
    auto bound = std::make_shared<std::size_t>(0);
    auto skip_cons = std::make_shared<bool>(false);
    auto canon_first = std::make_shared<bool>(false);
    cmd->add_option("--n", *n, "universe size")->required();
    cmd->add_flag("--cyclic", *cyclic, "cyclically symmetric candidates only");
    cmd->add_option("--range", *range, "candidate index range LO..HI (decimal)");
    cmd->add_option("--jobs", *jobs, "worker threads");
    cmd->add_option("--checkpoint", *checkpoint, "checkpoint file (resumes when present)");
    cmd->add_option("--catalog", *catalog, "write hits as JSON lines");
    cmd->add_option("--closure-bound", *bound, "closure member bound");
    cmd->add_flag("--skip-conservative", *skip_cons, "skip conservative candidates");
    cmd->add_flag("--canonical-first", *canon_first,
                  "process only canonical orbit representatives");
    cmd->add_option("--format", format, "text|json");
    cmd->callback([&, n, cyclic, range, jobs, checkpoint, catalog, bound, skip_cons, canon_first] {
      action = [&, n, cyclic, range, jobs, checkpoint, catalog, bound, skip_cons, canon_first] {
        return cmd_search(*n, *cyclic, *range, *jobs, *checkpoint, *catalog,
                          *bound ? *bound : default_closure_bound(), *skip_cons, *canon_first,
                          format);
      };
    });
  }
  // star
  {
    auto* cmd = app.add_subcommand("star", "one-point extension h * d_i");
    auto source = std::make_shared<OpSource>();
    source->attach(cmd);
    auto i = std::make_shared<int>(1);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--i", *i, "projection index 1..3")->required();
    cmd->add_option("--out", *out, "output operation file (default: stdout)");
    cmd->callback([&, source, i, out] {
      action = [&, source, i, out] {
        emit_op(star_extend(source->load(), *i), *out);
        return kExitOk;
      };
    });
  }
  // restrict
  {
    auto* cmd = app.add_subcommand("restrict", "restrict to a preserved subset");
    auto source = std::make_shared<OpSource>();
    source->attach(cmd);
    auto subset = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--subset", *subset, "ordered element labels, comma separated")->required();
    cmd->add_option("--out", *out, "output operation file (default: stdout)");
    cmd->callback([&, source, subset, out] {
      action = [&, source, subset, out] {
        TernaryOp op = source->load();
        emit_op(restrict_op(op, parse_label_list(op.universe(), *subset)), *out);
        return kExitOk;
      };
    });
  }
  // canon
  {
    auto* cmd = app.add_subcommand("canon", "canonical form under relabeling (and variable permutation)");
    auto source = std::make_shared<OpSource>();
    source->attach(cmd);
    auto mode = std::make_shared<std::string>("relabel-and-varperm");
    cmd->add_option("--mode", *mode, "relabel-only|relabel-and-varperm");
    cmd->add_option("--format", format, "text|json");
    cmd->callback([&, source, mode] {
      action = [&, source, mode] { return cmd_canon(*source, *mode, format); };
    });
  }
  // relpairs
  {
    auto* cmd = app.add_subcommand("relpairs", "generate an invariant binary relation from seeds");
    auto source = std::make_shared<OpSource>();
    source->attach(cmd);
    auto seeds = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--seed", *seeds, "seed pair A,B (labels); repeatable")->required();
    cmd->add_option("--format", format, "text|json");
    cmd->callback([&, source, seeds] {
      action = [&, source, seeds] { return cmd_relpairs(*source, *seeds, format); };
    });
  }
  // term-eval
  {
    auto* cmd = app.add_subcommand("term-eval", "evaluate a term over an operation");
    auto source = std::make_shared<OpSource>();
    source->attach(cmd);
    auto term = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--term", *term, "term such as d(x1,d(x2,x1,x3),x3)")->required();
    cmd->add_option("--out", *out, "output operation file (default: stdout)");
    cmd->callback([&, source, term, out] {
      action = [&, source, term, out] { return cmd_term_eval(*source, *term, *out); };
    });
  }
  // term-shift
  {
    auto* cmd = app.add_subcommand("term-shift", "constructive cyclic-shift triple of a term");
    auto term = std::make_shared<std::string>();
    cmd->add_option("--term", *term, "term over d and x1,x2,x3")->required();
    cmd->add_option("--format", format, "text|json");
    cmd->callback([&, term] {
      action = [&, term] { return cmd_term_shift(*term, format); };
    });
  }
  // verify-paper
  {
    auto* cmd = app.add_subcommand("verify-paper",
                                   "re-derive every bundled construction and count");
    auto jobs = std::make_shared<int>(4);
    auto fixtures_dir = std::make_shared<std::string>();
    auto scratch = std::make_shared<std::string>();
    cmd->add_option("--jobs", *jobs, "worker threads for the sweeps");
    cmd->add_option("--fixtures-dir", *fixtures_dir,
                    "load fixtures from this directory instead of the embedded catalog");
    cmd->add_option("--scratch-dir", *scratch, "directory for checkpoints written by the run");
    cmd->callback([&, jobs, fixtures_dir, scratch] {
      action = [&, jobs, fixtures_dir, scratch] {
        return cmd_verify_paper(*jobs, *fixtures_dir, *scratch);
      };
    });
  }
  // fixtures export
  {
    auto* cmd = app.add_subcommand("fixtures", "bundled operation tables");
    cmd->require_subcommand(1);
    auto* exp = cmd->add_subcommand("export", "write every fixture as an operation file");
    auto dir = std::make_shared<std::string>();
    exp->add_option("--dir", *dir, "output directory")->required();
    exp->callback([&, dir] {
      action = [&, dir] { return cmd_fixtures_export(*dir); };
    });
  }

  try {
    app.parse(argc, argv);
    return action ? action() : kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const InternalError& e) {
    std::cerr << "internal consistency violation: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
