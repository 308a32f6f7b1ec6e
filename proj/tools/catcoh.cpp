// catcoh: exact cohomology workbench for finite categories.
//
// Subcommands: validate | cohomology | grothendieck | spectral | check
// Exit codes: 0 pass, 1 check failed, 2 input error, 3 budget exceeded.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "catcoh/catcoh.hpp"

using namespace catcoh;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBudget = 3;

struct Options {
  std::string file;
  std::string out;
  bool quiet = false;
  std::string ring = "zz";
  int max_degree = 4;
  int pages = 0;  // 0 = choose automatically
  std::size_t budget = kDefaultRankBudget;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("JSON parse error in '" + path + "': " + e.what());
  }
  return j;
}

void write_report(const Options& opt, const Json& report) {
  if (!opt.out.empty()) {
    std::ofstream out(opt.out);
    if (!out) throw Error("cannot write '" + opt.out + "'");
    out << report.dump(2) << "\n";
  } else if (opt.quiet) {
    std::cout << report.dump() << "\n";
  }
}

void say(const Options& opt, const std::string& line) {
  if (!opt.quiet) std::cout << line << "\n";
}

int status_to_exit(const std::string& status) {
  if (status == "pass" || status == "hypothesis-fails") return kExitPass;
  if (status == "budget-exceeded") return kExitBudget;
  if (status == "fail") return kExitCheckFail;
  return kExitInputError;
}

Json cohomology_table(const std::vector<AbInvariants>& h) {
  Json t = Json::array();
  for (std::size_t n = 0; n < h.size(); ++n) {
    Json e = emit_invariants(h[n]);
    e["degree"] = n;
    t.push_back(std::move(e));
  }
  return t;
}

// ---------------------------------------------------------------------------
// task runners
// ---------------------------------------------------------------------------

struct TaskOutcome {
  std::string status = "pass";
  Json data = Json::object();
};

TaskOutcome run_cohomology(Workspace& ws, const Json& p, const Options& opt) {
  std::string system = p.at("system").get<std::string>();
  Ring ring = parse_ring(p.value("ring", opt.ring));
  int n_max = p.value("max_degree", opt.max_degree);
  std::size_t budget = p.value("budget", opt.budget);
  const FiniteCategory* cat = nullptr;
  if (p.contains("category"))
    cat = &ws.category(p.at("category").get<std::string>());
  else if (p.contains("diagram"))
    cat = &ws.grothendieck(p.at("diagram").get<std::string>()).cat;
  else
    throw ParseError("cohomology: need 'category' or 'diagram'");
  NaturalSystem d = ws.system(system, ring);
  if (!(d.base() == *cat)) throw ParseError("cohomology: system '" + system + "' lives on a different base");
  auto h = bw_cohomology(*cat, d, n_max, budget);
  TaskOutcome out;
  out.data["ring"] = ring.str();
  out.data["max_degree"] = n_max;
  out.data["trusted_degree"] = n_max - 1;
  out.data["groups"] = cohomology_table(h);
  return out;
}

TaskOutcome run_spectral(Workspace& ws, const Json& p, const Options& opt) {
  std::string dname = p.at("diagram").get<std::string>();
  std::string system = p.at("system").get<std::string>();
  Ring ring = parse_ring(p.value("ring", opt.ring));
  int n_max = p.value("max_degree", opt.max_degree);
  std::size_t budget = p.value("budget", opt.budget);
  const Diagram& dg = ws.diagram(dname);
  const GrothendieckCategory& g = ws.grothendieck(dname);
  NaturalSystem d = ws.system(system, ring);
  if (!(d.base() == g.cat)) throw ParseError("spectral: system must live on the glued category");
  Bicomplex b = build_bicomplex(dg, g, d, n_max, budget);
  TaskOutcome out;
  out.data["ring"] = ring.str();
  out.data["max_degree"] = n_max;
  out.data["window"] = "p+q <= " + std::to_string(n_max - 1);
  if (ring.is_field()) {
    int r_max = p.value("pages", opt.pages);
    if (r_max <= 0) r_max = n_max + 1;
    auto pages = spectral_pages(b, r_max);
    Json pj = Json::array();
    for (const auto& page : pages) {
      Json entries = Json::array();
      for (const auto& e : page.entries) {
        Json ej{{"p", e.p}, {"q", e.q}, {"dim", e.dim}, {"stable", e.stable}};
        if (e.d_rank >= 0) ej["d_rank"] = e.d_rank;
        entries.push_back(std::move(ej));
      }
      pj.push_back(Json{{"r", page.r}, {"entries", std::move(entries)}});
    }
    out.data["pages"] = std::move(pj);
    auto abut = tot_cohomology_dims(b);
    out.data["total_cohomology_dims"] = abut;
  } else {
    IntegerPages ip = spectral_pages_zz(b);
    auto table = [&](const std::vector<std::vector<AbInvariants>>& t) {
      Json out_t = Json::array();
      for (std::size_t pp = 0; pp < t.size(); ++pp)
        for (std::size_t q = 0; q < t[pp].size(); ++q) {
          Json e = emit_invariants(t[pp][q]);
          e["p"] = pp;
          e["q"] = q;
          out_t.push_back(std::move(e));
        }
      return out_t;
    };
    out.data["e1"] = table(ip.e1);
    out.data["e2"] = table(ip.e2);
    out.data["note"] = "integer pages carry no convergence claim";
  }
  return out;
}

std::optional<std::vector<int>> parse_unit(const Json& p) {
  if (!p.contains("unit")) return std::nullopt;
  std::vector<int> unit;
  for (const auto& v : p.at("unit")) unit.push_back(v.get<int>());
  return unit;
}

TaskOutcome run_check(Workspace& ws, const Json& p, const Options& opt) {
  std::string target = p.at("target").get<std::string>();
  Ring ring = parse_ring(p.value("ring", opt.ring));
  int n_max = p.value("max_degree", opt.max_degree);
  std::size_t budget = p.value("budget", opt.budget);
  TaskOutcome out;
  out.data["target"] = target;
  out.data["ring"] = ring.str();
  out.data["trusted_degree"] = n_max - 1;

  if (target == "trivial") {
    const FiniteCategory& cat = ws.category(p.at("category").get<std::string>());
    NaturalSystem d = ws.system(p.at("system").get<std::string>(), ring);
    if (!(d.base() == cat)) throw ParseError("check trivial: system lives on a different base");
    if (cat.initial_object() < 0 || !d.is_constant()) {
      out.status = "hypothesis-fails";
      out.data["reason"] = cat.initial_object() < 0 ? "no initial object" : "system is not constant";
      return out;
    }
    auto h = bw_cohomology(cat, d, n_max, budget);
    out.data["groups"] = cohomology_table(h);
    AbInvariants expected{d.rank(0), {}};
    bool ok = h[0] == expected;
    for (std::size_t n = 1; n < h.size(); ++n) ok = ok && h[n].is_zero();
    out.status = ok ? "pass" : "fail";
  } else if (target == "4vanish") {
    const FiniteCategory& cat = ws.category(p.at("category").get<std::string>());
    SetPresheaf t;
    t.size = p.at("T").at("sizes").get<std::vector<int>>();
    t.map = p.at("T").at("maps").get<std::vector<std::vector<int>>>();
    int a = p.at("a").get<int>();
    int m = p.at("m").get<int>();
    std::size_t a_rank = p.value("a_rank", 1);
    NaturalSystem d = natsys_lemma44(cat, t, a, m, a_rank, ring);
    BWComplex left = bw_cochain(cat, d, n_max, budget);
    ATmCategory atm = build_category_aTm(cat, t, a, m);
    BWComplex right = bw_cochain(atm.cat, natsys_constant(atm.cat, ring, a_rank), n_max, budget);
    auto h = cohomology_all(left.cx);
    bool ok = atm.cat.initial_object() == atm.initial;
    ok = ok && h[0] == AbInvariants{a_rank, {}};
    for (std::size_t n = 1; n < h.size(); ++n) ok = ok && h[n].is_zero();
    ok = ok && left.cx.ranks == right.cx.ranks;
    auto h2 = cohomology_all(right.cx);
    for (std::size_t n = 0; n < h.size(); ++n) ok = ok && h[n] == h2[n];
    out.data["groups"] = cohomology_table(h);
    out.data["degreewise_ranks"] = left.cx.ranks;
    out.status = ok ? "pass" : "fail";
  } else if (target == "adjuntos" || target == "muro") {
    Adjunction adj =
        ws.adjunction(p.at("left").get<std::string>(), p.at("right").get<std::string>(), parse_unit(p));
    NaturalSystem sys = ws.system(p.at("system").get<std::string>(), ring);
    CompareReport rep;
    if (target == "adjuntos") {
      if (!(sys.base() == adj.l.tgt)) throw ParseError("check adjuntos: system must live on the target");
      rep = check_lemma_adjuntos(adj, sys, n_max, budget);
    } else {
      if (!(sys.base() == adj.l.src)) throw ParseError("check muro: system must live on the source");
      rep = check_prop_muro(adj, sys, n_max, budget);
    }
    out.data["lhs_name"] = rep.lhs_name;
    out.data["rhs_name"] = rep.rhs_name;
    out.data["lhs"] = cohomology_table(rep.lhs);
    out.data["rhs"] = cohomology_table(rep.rhs);
    out.status = rep.pass ? "pass" : "fail";
  } else if (target == "local" || target == "h_local") {
    std::string dname = p.at("diagram").get<std::string>();
    const Diagram& dg = ws.diagram(dname);
    const GrothendieckCategory& g = ws.grothendieck(dname);
    NaturalSystem d = ws.system(p.at("system").get<std::string>(), ring);
    if (!(d.base() == g.cat)) throw ParseError("check local: system must live on the glued category");
    if (target == "local") {
      out.data["local"] = is_local(d, dg, g);
    } else {
      out.data["h_local"] = is_h_local(d, dg, g, n_max, budget);
    }
    out.status = "pass";  // the predicate itself is the result
  } else if (target == "theorem1") {
    std::string dname = p.at("diagram").get<std::string>();
    const Diagram& dg = ws.diagram(dname);
    const GrothendieckCategory& g = ws.grothendieck(dname);
    NaturalSystem d = ws.system(p.at("system").get<std::string>(), ring);
    if (!(d.base() == g.cat)) throw ParseError("check theorem1: system must live on the glued category");
    Bicomplex b = build_bicomplex(dg, g, d, n_max, budget);  // verifies the bicomplex identities
    BWComplex f = bw_cochain(g.cat, d, n_max, budget);
    PhiReport phi = phi_map(b, f);
    RowExactnessReport rows = row_exactness_check(b, f);
    out.data["bicomplex_identities"] = true;
    out.data["phi_chain_map"] = phi.chain_map;
    out.data["phi_delta_zero"] = phi.delta_phi_zero;
    out.data["phi_cone_acyclic"] = phi.cone_acyclic_by_degree;
    out.data["rows_exact"] = rows.all();
    bool ok = phi.quasi_iso() && rows.all();
    if (ring.is_field()) {
      FiberE2 fibers = e2_from_tilde_fibers(dg, g, d, n_max, budget);
      E2Report e2 = compare_e2(b, fibers);
      out.data["e2_match"] = e2.pass;
      if (!e2.pass) {
        Json mm = Json::array();
        for (const auto& m : e2.mismatches)
          mm.push_back(Json{{"p", m[0]}, {"q", m[1]}, {"page_dim", m[2]}, {"fiber_dim", m[3]}});
        out.data["e2_mismatches"] = std::move(mm);
      }
      ok = ok && e2.pass;
    } else {
      out.data["e2_match"] = "skipped (integer coefficients)";
    }
    out.status = ok ? "pass" : "fail";
  } else if (target == "theorem2") {
    std::string dname = p.at("diagram").get<std::string>();
    const Diagram& dg = ws.diagram(dname);
    const GrothendieckCategory& g = ws.grothendieck(dname);
    NaturalSystem d = ws.system(p.at("system").get<std::string>(), ring);
    if (!(d.base() == g.cat)) throw ParseError("check theorem2: system must live on the glued category");
    Theorem2Report rep = check_theorem2(dg, g, d, n_max, budget);
    out.data["h_local"] = rep.h_local;
    if (rep.status == Theorem2Report::Status::HypothesisFails) {
      out.status = "hypothesis-fails";
      return out;
    }
    out.data["e2_vs_expanded_fibers"] = rep.versus_tilde.pass;
    out.data["e2_vs_pages"] = rep.versus_pages.pass;
    out.data["abutment_expected"] = rep.abutment_expected;
    out.data["abutment_pages"] = rep.abutment_pages;
    out.data["abutment_match"] = rep.abutment_pass;
    out.status = rep.pass() ? "pass" : "fail";
  } else {
    throw ParseError("unknown check target '" + target + "'");
  }
  return out;
}

Json outcome_record(const std::string& name, const std::string& op, const TaskOutcome& oc, double ms) {
  Json j = Json::object();
  j["name"] = name;
  j["op"] = op;
  j["status"] = oc.status;
  j["time_ms"] = ms;
  j["data"] = oc.data;
  return j;
}

int finish(const Options& opt, const std::string& command, const std::string& status, Json tasks) {
  Json report;
  report["tool"] = "catcoh";
  report["command"] = command;
  report["status"] = status;
  report["tasks"] = std::move(tasks);
  write_report(opt, report);
  return status_to_exit(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catcoh: exact cohomology workbench for finite categories"};
  app.require_subcommand(1);
  Options opt;

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", opt.file, "workbench JSON file")->required();
  };
  auto add_common = [&](CLI::App* sub, bool with_math) {
    sub->add_option("--out", opt.out, "write the JSON report to this path");
    sub->add_flag("--quiet", opt.quiet, "suppress human-readable output");
    if (with_math) {
      sub->add_option("--ring", opt.ring, "coefficient ring: zz or fp:<prime>")->capture_default_str();
      sub->add_option("--max-degree", opt.max_degree, "truncation degree")->capture_default_str();
      sub->add_option("--pages", opt.pages, "number of pages to compute (0 = automatic)");
      sub->add_option("--budget", opt.budget, "total rank budget")->capture_default_str();
    }
  };

  auto* cmd_validate = app.add_subcommand("validate", "validate every block of the file");
  add_file(cmd_validate);
  add_common(cmd_validate, false);

  auto* cmd_cohomology = app.add_subcommand("cohomology", "cohomology of a category with coefficients");
  add_file(cmd_cohomology);
  std::string arg_category, arg_system;
  cmd_cohomology->add_option("category", arg_category,
                             "category name (or int:<diagram> for the glued category)")
      ->required();
  cmd_cohomology->add_option("system", arg_system, "natural system name")->required();
  add_common(cmd_cohomology, true);

  auto* cmd_grothendieck = app.add_subcommand("grothendieck", "emit the glued category of a diagram");
  add_file(cmd_grothendieck);
  std::string arg_diagram;
  cmd_grothendieck->add_option("diagram", arg_diagram, "diagram name")->required();
  add_common(cmd_grothendieck, false);

  auto* cmd_spectral = app.add_subcommand("spectral", "pages of the diagram's filtered double complex");
  add_file(cmd_spectral);
  std::string sp_diagram, sp_system;
  cmd_spectral->add_option("diagram", sp_diagram, "diagram name")->required();
  cmd_spectral->add_option("system", sp_system, "natural system on the glued category")->required();
  add_common(cmd_spectral, true);

  auto* cmd_check = app.add_subcommand("check", "run a named verification");
  add_file(cmd_check);
  std::string ck_target, ck_task, ck_category, ck_system, ck_diagram, ck_left, ck_right, ck_unit;
  cmd_check->add_option("target", ck_target,
                        "one of: trivial, 4vanish, adjuntos, muro, theorem1, theorem2, local, h-local")
      ->required();
  cmd_check->add_option("--task", ck_task, "read parameters from the named task in the file");
  cmd_check->add_option("--category", ck_category, "category reference");
  cmd_check->add_option("--system", ck_system, "natural system reference");
  cmd_check->add_option("--diagram", ck_diagram, "diagram reference");
  cmd_check->add_option("--left", ck_left, "left adjoint functor reference");
  cmd_check->add_option("--right", ck_right, "right adjoint functor reference");
  cmd_check->add_option("--unit", ck_unit, "comma-separated unit morphism indices");
  add_common(cmd_check, true);

  CLI11_PARSE(app, argc, argv);

  try {
    Json j = load_json(opt.file);
    WorkbenchFile wf = parse_workbench(j);
    Workspace ws(wf);

    if (cmd_validate->parsed()) {
      auto t0 = std::chrono::steady_clock::now();
      ValidationReport rep = ws.validate_all();
      TaskOutcome oc;
      oc.status = rep.ok() ? "pass" : "fail";
      oc.data["problems"] = rep.problems();
      say(opt, rep.ok() ? "validate: all blocks valid" : "validate: FAILED\n" + rep.summary());
      Json rec = Json::array({outcome_record("validate", "validate", oc, ms_since(t0))});
      if (!rep.ok()) {
        // structural problems are input errors, not check failures
        Json report{{"tool", "catcoh"}, {"command", "validate"}, {"status", "error"}, {"tasks", rec}};
        write_report(opt, report);
        return kExitInputError;
      }
      return finish(opt, "validate", "pass", rec);
    }

    if (cmd_grothendieck->parsed()) {
      auto t0 = std::chrono::steady_clock::now();
      const GrothendieckCategory& g = ws.grothendieck(arg_diagram);
      TaskOutcome oc;
      oc.data["category"] = emit_category(g.cat);
      Json objs = Json::array();
      for (auto [k, x] : g.obj_label) objs.push_back(Json::array({k, x}));
      Json mors = Json::array();
      for (const auto& m : g.mor_label) mors.push_back(Json::array({m[0], m[1], m[2]}));
      oc.data["object_labels"] = std::move(objs);
      oc.data["morphism_labels"] = std::move(mors);
      say(opt, "glued category of '" + arg_diagram + "': " + std::to_string(g.cat.objects()) +
                   " objects, " + std::to_string(g.cat.morphisms()) + " morphisms");
      return finish(opt, "grothendieck", "pass",
                    Json::array({outcome_record(arg_diagram, "grothendieck", oc, ms_since(t0))}));
    }

    if (cmd_cohomology->parsed()) {
      auto t0 = std::chrono::steady_clock::now();
      Json params{{"system", arg_system}};
      if (arg_category.rfind("int:", 0) == 0)
        params["diagram"] = arg_category.substr(4);
      else
        params["category"] = arg_category;
      TaskOutcome oc = run_cohomology(ws, params, opt);
      for (const auto& row : oc.data["groups"])
        say(opt, "H^" + row["degree"].dump() + " = " + row["pretty"].get<std::string>());
      return finish(opt, "cohomology", oc.status,
                    Json::array({outcome_record(arg_category, "cohomology", oc, ms_since(t0))}));
    }

    if (cmd_spectral->parsed()) {
      auto t0 = std::chrono::steady_clock::now();
      Json params{{"diagram", sp_diagram}, {"system", sp_system}};
      TaskOutcome oc = run_spectral(ws, params, opt);
      if (oc.data.contains("pages")) {
        for (const auto& page : oc.data["pages"]) {
          std::ostringstream line;
          line << "E_" << page["r"] << ":";
          for (const auto& e : page["entries"])
            if (e["dim"].get<std::size_t>() > 0)
              line << "  (" << e["p"] << "," << e["q"] << ")=" << e["dim"].get<std::size_t>();
          say(opt, line.str());
        }
      } else {
        say(opt, "integer pages computed (see report)");
      }
      return finish(opt, "spectral", oc.status,
                    Json::array({outcome_record(sp_diagram, "spectral", oc, ms_since(t0))}));
    }

    if (cmd_check->parsed()) {
      auto t0 = std::chrono::steady_clock::now();
      Json params;
      std::string task_name = ck_target;
      if (!ck_task.empty()) {
        bool found = false;
        for (const auto& td : ws.file().tasks) {
          if (td.name == ck_task) {
            if (td.op != "check") throw ParseError("task '" + ck_task + "' is not a check task");
            params = td.params;
            found = true;
            break;
          }
        }
        if (!found) throw ParseError("no task named '" + ck_task + "' in the file");
        std::string t = params.value("target", "");
        std::string want = ck_target == "h-local" ? "h_local" : ck_target;
        if (t != want && t != ck_target)
          throw ParseError("task '" + ck_task + "' has target '" + t + "', not '" + ck_target + "'");
        task_name = ck_task;
      } else {
        if (!ck_category.empty()) params["category"] = ck_category;
        if (!ck_system.empty()) params["system"] = ck_system;
        if (!ck_diagram.empty()) params["diagram"] = ck_diagram;
        if (!ck_left.empty()) params["left"] = ck_left;
        if (!ck_right.empty()) params["right"] = ck_right;
        if (!ck_unit.empty()) {
          Json unit = Json::array();
          std::stringstream ss(ck_unit);
          std::string item;
          while (std::getline(ss, item, ',')) unit.push_back(std::stoi(item));
          params["unit"] = std::move(unit);
        }
      }
      params["target"] = ck_target == "h-local" ? "h_local" : ck_target;
      TaskOutcome oc = run_check(ws, params, opt);
      say(opt, "check " + ck_target + ": " + oc.status);
      return finish(opt, "check", oc.status,
                    Json::array({outcome_record(task_name, "check", oc, ms_since(t0))}));
    }
  } catch (const RankOverflowBudget& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    Json report{{"tool", "catcoh"}, {"status", "budget-exceeded"}, {"error", e.what()}};
    try {
      write_report(opt, report);
    } catch (...) {
    }
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    Json report{{"tool", "catcoh"}, {"status", "error"}, {"error", e.what()}};
    try {
      write_report(opt, report);
    } catch (...) {
    }
    return kExitInputError;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitPass;
}
