#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "equichain/equichain.hpp"

namespace fs = std::filesystem;
using namespace equichain;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kSpec = 2, kHorizon = 3, kAssertion = 4, kOracleCap = 5 };

const std::vector<std::string> kAllTasks = {"materialize", "invariants", "hilbert", "betti", "groebner", "asymptotics", "report"};

struct RunConfig {
  std::string chain;
  std::vector<std::string> tasks;
  std::string order = "grevlex";
  std::optional<std::uint32_t> characteristic;
  std::optional<std::uint32_t> upto;
  std::string out = "out";
  std::string format = "table";
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  bool verbose = false;
  bool oracle_check = false;

  [[nodiscard]] bool wants(const std::string& t) const { return std::find(tasks.begin(), tasks.end(), t) != tasks.end(); }
};

std::vector<std::string> split_tasks(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (std::find(kAllTasks.begin(), kAllTasks.end(), item) == kAllTasks.end()) throw SpecError("unknown task '" + item + "'");
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  if (out.empty()) throw SpecError("no tasks selected");
  std::vector<std::string> ordered;
  for (const auto& t : kAllTasks)
    if (std::find(out.begin(), out.end(), t) != out.end()) ordered.push_back(t);
  return ordered;
}

ChainSpec load_spec(const fs::path& path, std::optional<std::uint32_t> ch) {
  if (!ch) return load_chain_spec(path);
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read chain spec " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("chain spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("chain spec must be an object");
  doc["field"]["char"] = *ch;
  return parse_chain_spec(doc.dump());
}

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const fs::path& rel, const std::string& content) const {
    auto p = dir_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
  }

 private:
  fs::path dir_;
};

std::string join(const std::vector<std::uint32_t>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

std::string fit_text(const std::optional<LinearFit>& fit) {
  if (!fit) return "none";
  std::string s = std::to_string(fit->slope) + "n";
  if (fit->intercept > 0) s += "+" + std::to_string(fit->intercept);
  if (fit->intercept < 0) s += std::to_string(fit->intercept);
  return s + " from n=" + std::to_string(fit->onset);
}

json report_json(const PredictionReport& r) {
  json j;
  j["quantity"] = r.quantity;
  j["predicted"] = r.predicted;
  if (r.predicted_slope) j["predicted_slope"] = *r.predicted_slope;
  if (r.predicted_intercept) j["predicted_intercept"] = *r.predicted_intercept;
  json vals = json::object();
  for (const auto& [n, v] : r.values) vals[std::to_string(n)] = v;
  j["values"] = vals;
  if (r.observed) {
    j["observed"] = {{"slope", r.observed->slope}, {"intercept", r.observed->intercept}, {"onset", r.observed->onset},
                     {"through", r.observed->last}};
  } else {
    j["observed"] = nullptr;
  }
  j["verdict"] = to_string(r.verdict);
  j["notes"] = r.notes;
  return j;
}

std::string verdict_line(const PredictionReport& r) {
  return r.quantity + ": predicted " + r.predicted + "; observed " + fit_text(r.observed) + "; " + to_string(r.verdict);
}

json betti_json(const BettiTable& t) {
  json rows = json::array();
  for (const auto& [k, v] : t.entries) rows.push_back({{"i", k.first}, {"j", k.second}, {"beta", v}});
  return rows;
}

struct ChainRun {
  const RunConfig& cfg;
  ChainSpec spec;
  std::uint32_t upto = 0;
  TermOrder order;
  Artifacts files;
  std::ostream& out;
  std::vector<std::string> summary;
  bool oracle_capped = false;

  std::vector<ChainSnapshot> snaps;
  std::optional<InitialChain> ini;
  std::optional<std::map<std::uint32_t, BettiTable>> tables;

  [[nodiscard]] std::string header() const {
    return "# chain=" + spec.name + " order=" + to_string(order.kind) + " char=" + std::to_string(spec.characteristic) +
           " upto=" + std::to_string(upto) + " seed=" + std::to_string(cfg.seed) + "\n";
  }

  void say(const std::string& line) {
    out << line << "\n";
    summary.push_back(line);
  }

  const std::vector<ChainSnapshot>& monomial_chain() {
    if (spec.is_monomial()) return snaps;
    if (!ini) {
      ini = initial_chain(snaps, order, cfg.jobs, cfg.verbose);
      if (cfg.verbose)
        for (const auto& b : ini->bases)
          if (b)
            for (const auto& l : b->stats.log) std::cerr << l << "\n";
    }
    return ini->snapshots;
  }

  const std::map<std::uint32_t, BettiTable>* betti_tables() {
    if (!spec.is_monomial()) return nullptr;
    if (!tables) tables = chain_betti_tables(snaps, cfg.jobs);
    return &*tables;
  }

  void materialize_task() {
    for (const auto& s : snaps) {
      std::string text = header();
      std::size_t count = 0;
      if (s.is_monomial()) {
        for (const auto& u : s.monomial().gens()) text += render(u, spec.rows) + "\n";
        count = s.monomial().gens().size();
      } else {
        for (const auto& f : s.polynomials()) text += render(f, spec.rows, order) + "\n";
        count = s.polynomials().size();
      }
      files.write("generators/n" + std::to_string(s.width) + ".txt", text);
      say("I" + std::to_string(s.width) + ": " + std::to_string(count) + " generators");
    }
  }

  void invariants_task() {
    const auto& mono = monomial_chain();
    const auto* tb = betti_tables();
    std::string csv = "n,num_gens,codim,gamma,omega";
    for (std::uint32_t k = 1; k <= spec.rows; ++k) csv += ",w" + std::to_string(k);
    csv += ",dim,degree,reg,pd\n";
    for (std::size_t i = 0; i < mono.size(); ++i) {
      const auto& I = mono[i].monomial();
      std::size_t gens = snaps[i].is_monomial() ? snaps[i].monomial().gens().size() : snaps[i].polynomials().size();
      bool proper = !I.is_zero() && !I.is_unit();
      std::string row = std::to_string(mono[i].width) + "," + std::to_string(gens) + ",";
      if (proper) {
        auto wr = weights(I);
        row += std::to_string(codim(I)) + "," + std::to_string(covers(I).gamma) + "," + std::to_string(wr.omega) + "," +
               join(wr.w, ",");
      } else {
        row += std::string(I.is_zero() ? "0" : "") + ",,";
        for (std::uint32_t k = 0; k < spec.rows; ++k) row += ",";
      }
      auto h = hilbert_series(I);
      row += "," + (h.unit ? std::string() : std::to_string(h.dim)) + "," + h.degree.get_str() + ",";
      if (tb && proper) {
        const auto& t = tb->at(mono[i].width);
        row += std::to_string(t.reg()) + "," + std::to_string(t.pd());
      } else {
        row += ",";
      }
      csv += row + "\n";
    }
    files.write("invariants.csv", csv);
    try {
      auto inv = chain_invariants(mono);
      say("gamma=" + std::to_string(inv.gamma) + " w=(" + join(inv.w, ",") + ") omega=" + std::to_string(inv.omega) +
          " stability_index=" + (inv.stability_index ? std::to_string(*inv.stability_index) : std::string("none")));
    } catch (const HorizonError& e) {
      say(std::string("invariants: inconclusive-horizon (") + e.what() + ")");
    }
  }

  void hilbert_task() {
    const auto& mono = monomial_chain();
    std::string csv = "n,dim,degree,codim,numerator\n";
    for (const auto& s : mono) {
      auto h = hilbert_series(s.monomial());
      csv += std::to_string(s.width) + "," + (h.unit ? std::string() : std::to_string(h.dim)) + "," + h.degree.get_str() +
             "," + std::to_string(h.codim) + "," + (h.unit ? std::string("0") : h.reduced.to_string()) + "\n";
      say("H(R" + std::to_string(s.width) + "/I" + std::to_string(s.width) + ") = " + h.rational_form());
    }
    files.write("hilbert.csv", csv);
  }

  void betti_task() {
    const auto* tb = betti_tables();
    if (!tb) {
      say("betti: skipped, Betti tables are computed for monomial chains only");
      return;
    }
    json all = json::object();
    for (const auto& [n, t] : *tb) {
      std::string title = "I" + std::to_string(n);
      auto layout = render_layout(t, title);
      files.write("betti/" + title + ".txt", layout);
      files.write("betti/" + title + ".csv", to_csv(t));
      all[title] = betti_json(t);
      if (cfg.format == "table") out << layout;
      if (cfg.format == "csv") out << "# " << title << "\n" << to_csv(t);
      const auto& I = snaps[n - 1].monomial();
      if (cfg.oracle_check && !I.is_zero() && !I.is_unit()) {
        try {
          if (taylor_betti(I) != t) throw AssertionFailure("Taylor oracle disagrees with betti_table at width " + std::to_string(n));
          say(title + ": Taylor oracle agrees");
        } catch (const OracleCapError& e) {
          oracle_capped = true;
          say(title + ": oracle cap exceeded (" + e.what() + ")");
        }
      }
    }
    files.write("betti.json", all.dump(2) + "\n");
    if (cfg.format == "json") out << all.dump(2) << "\n";
  }

  void groebner_task() {
    const auto& mono = monomial_chain();
    for (std::size_t i = 0; i < mono.size(); ++i) {
      std::string text = header();
      const auto& s = mono[i];
      if (ini && ini->bases[i]) {
        text += "basis:\n";
        for (const auto& f : ini->bases[i]->elements) text += render(f, spec.rows, order) + "\n";
      } else {
        text += "basis: monomial generators\n";
      }
      text += "initial ideal: " + render(s.monomial()) + "\n";
      files.write("groebner/n" + std::to_string(s.width) + ".txt", text);
      say("ini(I" + std::to_string(s.width) + ") = " + render(s.monomial()));
    }
  }

  template <class F>
  json guarded(F&& f) {
    try {
      return f();
    } catch (const HorizonError& e) {
      return json{{"verdict", "inconclusive-horizon"}, {"reason", e.what()}};
    } catch (const DomainError& e) {
      return json{{"skipped", e.what()}};
    }
  }

  void note(const json& j, const std::string& quantity) {
    if (j.contains("verdict") && j.contains("reason")) say(quantity + ": inconclusive-horizon");
  }

  void asymptotics_task() {
    json doc;
    const bool partitions = spec.rows == 1 && spec.symmetry == Symmetry::sym && spec.all_partitions();
    doc["codim"] = guarded([&] {
      auto r = spec.is_monomial() ? predict_codim(snaps) : predict_codim(snaps, order, cfg.jobs);
      say(verdict_line(r));
      return report_json(r);
    });
    note(doc["codim"], "codim");
    const auto* tb = betti_tables();
    if (tb) {
      if (partitions) {
        doc["reg"] = guarded([&] {
          auto p = predict_reg_c1(spec, snaps, *tb);
          auto j = report_json(p.report);
          j["omega"] = p.omega;
          j["r"] = p.r;
          j["alpha"] = render(p.alpha, 1);
          j["colon_ideal"] = render(p.colon_ideal);
          j["colon_reg"] = p.colon_reg;
          say(verdict_line(p.report) + " (omega=" + std::to_string(p.omega) + ", I" + std::to_string(p.r) +
              ":alpha = " + render(p.colon_ideal) + ")");
          return j;
        });
        note(doc["reg"], "reg");
      }
      doc["reg_bound"] = guarded([&] {
        auto b = reg_upper_bound(snaps, *tb);
        auto j = report_json(b.report);
        j["C"] = b.C;
        j["D"] = b.D;
        say(b.report.quantity + ": " + b.report.predicted + "; " + to_string(b.report.verdict));
        return j;
      });
      doc["pd"] = guarded([&] {
        auto r = pd_bounds_check(snaps, *tb);
        say(verdict_line(r));
        return report_json(r);
      });
      doc["betti_columns"] = guarded([&] {
        std::uint32_t pmax = 0;
        for (const auto& [n, t] : *tb)
          if (!t.empty()) pmax = std::max(pmax, t.pd());
        json cols = json::array();
        for (const auto& c : betti_column_stability(*tb, pmax)) {
          json degs = json::object();
          for (const auto& [n, d] : c.degrees) degs[std::to_string(n)] = std::vector<std::uint32_t>(d.begin(), d.end());
          cols.push_back({{"column", c.column}, {"degrees", degs}, {"stabilized", c.stabilized},
                          {"onset", c.onset ? json(*c.onset) : json(nullptr)}});
        }
        return cols;
      });
      if (partitions) {
        doc["segments"] = guarded([&] {
          auto res = segment_decomposition(*tb, spec.max_width());
          json j;
          if (res.decomposition) {
            const auto& d = *res.decomposition;
            json base = json::array();
            for (const auto& p : d.base) base.push_back({p.first, p.second});
            json segs = json::array();
            std::string text;
            for (const auto& s : d.segments) {
              segs.push_back({{"start", {s.start.first, s.start.second}}, {"slope", s.slope}});
              text += (text.empty() ? "" : ", ") + std::string("((") + std::to_string(s.start.first) + "," +
                      std::to_string(s.start.second) + ")," + std::to_string(s.slope) + ")";
            }
            j = {{"r", d.r}, {"base", base}, {"segments", segs}, {"verified_through", d.verified_through}};
            say("segments: r=" + std::to_string(d.r) + " base=" + (d.base.empty() ? "empty" : std::to_string(d.base.size()) + " points") +
                " {" + text + "} through n=" + std::to_string(d.verified_through));
          } else {
            j = {{"failure", res.failure}};
            if (res.failure_width) j["failure_width"] = *res.failure_width;
            say("segments: no decomposition (" + res.failure + ")");
          }
          return j;
        });
        note(doc["segments"], "segments");
        doc["cohen_macaulay"] = guarded([&] {
          auto rep = cm_criterion(spec, snaps, *tb);
          json widths = json::array();
          for (const auto& w : rep.widths)
            widths.push_back({{"n", w.width}, {"cohen_macaulay", w.cohen_macaulay}, {"unmixed", w.unmixed},
                              {"partition_condition", w.partition_condition}, {"p", w.p}});
          say(std::string("cohen-macaulay: ") + (rep.all_agree() ? "criterion agrees" : "criterion disagrees") + " on " +
              std::to_string(rep.widths.size()) + " widths");
          if (!rep.all_agree()) throw AssertionFailure("Cohen-Macaulay criterion disagrees");
          return json{{"widths", widths}, {"all_agree", rep.all_agree()}};
        });
      }
    }
    doc["degree_growth"] = guarded([&] {
      auto g = degree_growth(monomial_chain(), cfg.jobs);
      json degs = json::object();
      for (const auto& [n, d] : g.degrees) degs[std::to_string(n)] = d.get_str();
      json ratios = json::array();
      for (const auto& r : g.ratios) ratios.push_back(r.get_str());
      return json{{"degrees", degs}, {"ratios", ratios}, {"tail_ratio", g.tail_ratio ? json(g.tail_ratio->get_str()) : json(nullptr)}};
    });
    files.write("asymptotics.json", doc.dump(2) + "\n");
    if (cfg.format == "json") out << doc.dump(2) << "\n";
  }

  void report_task() {
    std::string text = header();
    for (const auto& l : summary) text += l + "\n";
    files.write("report.txt", text);
  }

  void write_config(const fs::path& chain_file) {
    json j;
    j["chain"] = chain_file.filename().string();
    j["name"] = spec.name;
    j["tasks"] = cfg.tasks;
    j["order"] = to_string(order.kind);
    j["char"] = spec.characteristic;
    j["upto"] = upto;
    j["format"] = cfg.format;
    j["jobs"] = cfg.jobs;
    j["seed"] = cfg.seed;
    j["oracle_check"] = cfg.oracle_check;
    files.write(spec.name + ".run.json", j.dump(2) + "\n");
  }
};

int run_chain(const RunConfig& cfg, const fs::path& file) {
  auto spec = load_spec(file, cfg.characteristic);
  std::uint32_t upto = cfg.upto.value_or(spec.horizon);
  ChainRun run{cfg, spec, upto, parse_order(cfg.order), Artifacts(fs::path(cfg.out) / spec.name), std::cout, {}, false, {}, {}, {}};
  run.write_config(file);
  std::cout << "== " << spec.name << " (order " << cfg.order << ", char " << spec.characteristic << ", n <= " << upto << ")\n";
  run.snaps = materialize(spec, upto, cfg.jobs);
  for (const auto& t : cfg.tasks) {
    if (t == "materialize") run.materialize_task();
    if (t == "invariants") run.invariants_task();
    if (t == "hilbert") run.hilbert_task();
    if (t == "betti") run.betti_task();
    if (t == "groebner") run.groebner_task();
    if (t == "asymptotics") run.asymptotics_task();
    if (t == "report") run.report_task();
  }
  return run.oracle_capped ? kOracleCap : kOk;
}

int validate_chain(const RunConfig& cfg, const fs::path& file) {
  auto spec = load_spec(file, cfg.characteristic);
  std::cout << "ok " << spec.name << ": " << spec.generators.size() << " generators, " << spec.rows << " row(s), char "
            << spec.characteristic << ", horizon " << spec.horizon << "\n";
  return kOk;
}

template <class F>
int guarded_exit(F&& f) {
  try {
    return f();
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kSpec;
  } catch (const HorizonError& e) {
    std::cerr << "horizon error: " << e.what() << "\n";
    return kHorizon;
  } catch (const AssertionFailure& e) {
    std::cerr << "assertion failure: " << e.what() << "\n";
    return kAssertion;
  } catch (const OracleCapError& e) {
    std::cerr << "oracle cap: " << e.what() << "\n";
    return kOracleCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant chains of ideals: Betti tables, Hilbert series, Groebner bases and asymptotic checks"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string tasks = "materialize,invariants,hilbert,betti,groebner,asymptotics,report";
  auto* run = app.add_subcommand("run", "Materialize a chain and run the selected tasks");
  auto* validate = app.add_subcommand("validate", "Parse and validate chain spec files");
  for (auto* sub : {run, validate}) {
    sub->add_option("--chain", cfg.chain, "Chain spec file or directory of spec files")->required();
    sub->add_option("--char", cfg.characteristic, "Override the field characteristic (0 or a prime)");
  }
  run->add_option("--upto", cfg.upto, "Largest width to materialize (default: the spec horizon)");
  run->add_option("--order", cfg.order, "Term order")->check(CLI::IsMember({"lex", "glex", "grevlex"}));
  run->add_option("--tasks", tasks, "Comma-separated subset of materialize,invariants,hilbert,betti,groebner,asymptotics,report");
  run->add_option("--out", cfg.out, "Output directory");
  run->add_option("--format", cfg.format, "Console format")->check(CLI::IsMember({"table", "csv", "json"}));
  run->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", cfg.seed, "Seed echoed into artifacts");
  run->add_flag("--verbose", cfg.verbose, "Log Buchberger progress to stderr");
  run->add_flag("--oracle-check", cfg.oracle_check, "Compare every Betti table with the Taylor oracle");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kSpec;
  }
  return guarded_exit([&] {
    if (run->parsed()) cfg.tasks = split_tasks(tasks);
    fs::path target(cfg.chain);
    std::vector<fs::path> files;
    if (fs::is_directory(target)) {
      files = chain_files(target);
      if (files.empty()) throw SpecError("no chain spec files in " + target.string());
    } else {
      files.push_back(target);
    }
    int rc = kOk;
    for (const auto& f : files) {
      int r = guarded_exit([&] { return run->parsed() ? run_chain(cfg, f) : validate_chain(cfg, f); });
      if (rc == kOk) rc = r;
    }
    return rc;
  });
}
