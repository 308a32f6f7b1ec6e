#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catcoh/spectral.hpp"

namespace catcoh {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Workbench file: named categories, functors, diagrams, natural systems, tasks.
// All indices are 0-based; matrices are row-major nested integer arrays.
// ---------------------------------------------------------------------------

struct CategoryDesc {
  int objects = 0;
  std::vector<std::pair<int, int>> morphisms;      // (src, tgt)
  std::vector<int> identity;                       // per object
  std::vector<std::array<int, 3>> composition;     // (g, f, g.f)
  bool operator==(const CategoryDesc&) const = default;
};

struct FunctorDesc {
  std::string src, tgt;
  std::vector<int> obj_map, mor_map;
  bool operator==(const FunctorDesc&) const = default;
};

struct DiagramDesc {
  std::string base;
  std::vector<std::string> fibers;   // per object of the base
  std::vector<std::string> on_mor;   // per morphism of the base
  bool operator==(const DiagramDesc&) const = default;
};

struct SystemDesc {
  std::string base_category;  // exactly one of base_category / base_diagram is set
  std::string base_diagram;
  std::string kind;           // constant | covariant | contravariant | bifunctor | explicit
  Json payload;               // kind-specific fields, kept verbatim
  bool operator==(const SystemDesc&) const = default;
};

struct TaskDesc {
  std::string name;
  std::string op;  // cohomology | spectral | check
  Json params;
  bool operator==(const TaskDesc&) const = default;
};

struct WorkbenchFile {
  std::vector<std::string> category_names, functor_names, diagram_names, system_names;
  std::map<std::string, CategoryDesc> categories;
  std::map<std::string, FunctorDesc> functors;
  std::map<std::string, DiagramDesc> diagrams;
  std::map<std::string, SystemDesc> systems;
  std::vector<TaskDesc> tasks;

  bool operator==(const WorkbenchFile&) const = default;
};

namespace detail {

inline void expect(bool cond, const std::string& msg) {
  if (!cond) throw ParseError(msg);
}

inline int to_int(const Json& j, const std::string& what) {
  expect(j.is_number_integer(), what + ": expected an integer");
  return j.get<int>();
}

inline std::vector<int> to_int_vector(const Json& j, const std::string& what) {
  expect(j.is_array(), what + ": expected an array");
  std::vector<int> out;
  for (const auto& v : j) out.push_back(to_int(v, what));
  return out;
}

inline Mat parse_matrix(const Json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  expect(j.is_array(), what + ": expected a matrix (array of rows)");
  expect(j.size() == rows, what + ": expected " + std::to_string(rows) + " rows, got " +
                               std::to_string(j.size()));
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = j[i];
    expect(row.is_array() && row.size() == cols, what + ": row " + std::to_string(i) + " has wrong length");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = row[c];
      if (e.is_number_integer())
        m(i, c) = Int(e.get<long>());
      else if (e.is_string())
        m(i, c) = Int(e.get<std::string>());
      else
        throw ParseError(what + ": matrix entries must be integers or integer strings");
    }
  }
  return m;
}

inline Json emit_matrix(const Mat& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Int& e = m(i, j);
      if (e.fits_slong_p())
        row.push_back(e.get_si());
      else
        row.push_back(e.get_str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline Ring parse_ring(const std::string& s) {
  if (s == "zz") return Ring::zz();
  if (s.rfind("fp:", 0) == 0) {
    try {
      return Ring::fp(std::stol(s.substr(3)));
    } catch (const Error&) {
      throw ParseError("ring: modulus in '" + s + "' is not prime");
    } catch (const std::exception&) {
      throw ParseError("ring: cannot parse '" + s + "'");
    }
  }
  throw ParseError("ring: expected 'zz' or 'fp:<prime>', got '" + s + "'");
}

inline WorkbenchFile parse_workbench(const Json& j) {
  using detail::expect;
  expect(j.is_object(), "top level must be an object");
  WorkbenchFile wf;
  if (j.contains("categories")) {
    expect(j["categories"].is_object(), "categories must be an object");
    for (const auto& [name, cj] : j["categories"].items()) {
      CategoryDesc cd;
      cd.objects = detail::to_int(cj.at("objects"), name + ".objects");
      expect(cj.at("morphisms").is_array(), name + ".morphisms must be an array");
      for (const auto& mj : cj.at("morphisms"))
        cd.morphisms.emplace_back(detail::to_int(mj.at("src"), name + ".src"),
                                  detail::to_int(mj.at("tgt"), name + ".tgt"));
      cd.identity = detail::to_int_vector(cj.at("identity"), name + ".identity");
      expect(cj.at("composition").is_array(), name + ".composition must be an array");
      for (const auto& tj : cj.at("composition")) {
        auto t = detail::to_int_vector(tj, name + ".composition");
        expect(t.size() == 3, name + ".composition entries must be triples");
        cd.composition.push_back({t[0], t[1], t[2]});
      }
      wf.category_names.push_back(name);
      wf.categories[name] = std::move(cd);
    }
  }
  if (j.contains("functors")) {
    for (const auto& [name, fj] : j["functors"].items()) {
      FunctorDesc fd;
      fd.src = fj.at("src").get<std::string>();
      fd.tgt = fj.at("tgt").get<std::string>();
      fd.obj_map = detail::to_int_vector(fj.at("obj_map"), name + ".obj_map");
      fd.mor_map = detail::to_int_vector(fj.at("mor_map"), name + ".mor_map");
      wf.functor_names.push_back(name);
      wf.functors[name] = std::move(fd);
    }
  }
  if (j.contains("diagrams")) {
    for (const auto& [name, dj] : j["diagrams"].items()) {
      DiagramDesc dd;
      dd.base = dj.at("base").get<std::string>();
      for (const auto& s : dj.at("fibers")) dd.fibers.push_back(s.get<std::string>());
      for (const auto& s : dj.at("on_mor")) dd.on_mor.push_back(s.get<std::string>());
      wf.diagram_names.push_back(name);
      wf.diagrams[name] = std::move(dd);
    }
  }
  if (j.contains("natural_systems")) {
    for (const auto& [name, sj] : j["natural_systems"].items()) {
      SystemDesc sd;
      const Json& base = sj.at("base");
      if (base.is_string())
        sd.base_category = base.get<std::string>();
      else if (base.is_object() && base.contains("grothendieck"))
        sd.base_diagram = base.at("grothendieck").get<std::string>();
      else
        throw ParseError(name + ".base must be a category name or {\"grothendieck\": diagram}");
      sd.kind = sj.at("kind").get<std::string>();
      expect(sd.kind == "constant" || sd.kind == "covariant" || sd.kind == "contravariant" ||
                 sd.kind == "bifunctor" || sd.kind == "explicit",
             name + ".kind unknown: " + sd.kind);
      sd.payload = sj;
      sd.payload.erase("base");
      sd.payload.erase("kind");
      wf.system_names.push_back(name);
      wf.systems[name] = std::move(sd);
    }
  }
  if (j.contains("tasks")) {
    expect(j["tasks"].is_array(), "tasks must be an array");
    for (const auto& tj : j["tasks"]) {
      TaskDesc td;
      td.name = tj.value("name", "task" + std::to_string(wf.tasks.size()));
      td.op = tj.at("op").get<std::string>();
      td.params = tj;
      td.params.erase("name");
      td.params.erase("op");
      wf.tasks.push_back(std::move(td));
    }
  }
  return wf;
}

inline Json emit_workbench(const WorkbenchFile& wf) {
  Json j = Json::object();
  Json cats = Json::object();
  for (const auto& name : wf.category_names) {
    const CategoryDesc& cd = wf.categories.at(name);
    Json cj;
    cj["objects"] = cd.objects;
    Json mors = Json::array();
    for (auto [s, t] : cd.morphisms) mors.push_back(Json{{"src", s}, {"tgt", t}});
    cj["morphisms"] = std::move(mors);
    cj["identity"] = cd.identity;
    Json comp = Json::array();
    for (const auto& t : cd.composition) comp.push_back(Json::array({t[0], t[1], t[2]}));
    cj["composition"] = std::move(comp);
    cats[name] = std::move(cj);
  }
  if (!cats.empty()) j["categories"] = std::move(cats);
  Json fns = Json::object();
  for (const auto& name : wf.functor_names) {
    const FunctorDesc& fd = wf.functors.at(name);
    fns[name] = Json{{"src", fd.src}, {"tgt", fd.tgt}, {"obj_map", fd.obj_map}, {"mor_map", fd.mor_map}};
  }
  if (!fns.empty()) j["functors"] = std::move(fns);
  Json dgs = Json::object();
  for (const auto& name : wf.diagram_names) {
    const DiagramDesc& dd = wf.diagrams.at(name);
    dgs[name] = Json{{"base", dd.base}, {"fibers", dd.fibers}, {"on_mor", dd.on_mor}};
  }
  if (!dgs.empty()) j["diagrams"] = std::move(dgs);
  Json sys = Json::object();
  for (const auto& name : wf.system_names) {
    const SystemDesc& sd = wf.systems.at(name);
    Json sj = sd.payload;
    sj["kind"] = sd.kind;
    if (!sd.base_category.empty())
      sj["base"] = sd.base_category;
    else
      sj["base"] = Json{{"grothendieck", sd.base_diagram}};
    sys[name] = std::move(sj);
  }
  if (!sys.empty()) j["natural_systems"] = std::move(sys);
  Json tasks = Json::array();
  for (const auto& td : wf.tasks) {
    Json tj = td.params;
    tj["name"] = td.name;
    tj["op"] = td.op;
    tasks.push_back(std::move(tj));
  }
  if (!tasks.empty()) j["tasks"] = std::move(tasks);
  return j;
}

/// Resolves and caches the structures described by a workbench file.
/// Resolution failures (dangling names, malformed payloads) throw ParseError;
/// mathematically invalid structures throw ValidationError.
class Workspace {
 public:
  explicit Workspace(WorkbenchFile file) : wf_(std::move(file)) {}

  [[nodiscard]] const WorkbenchFile& file() const { return wf_; }

  const FiniteCategory& category(const std::string& name) {
    auto it = cats_.find(name);
    if (it != cats_.end()) return it->second;
    auto dit = wf_.categories.find(name);
    if (dit == wf_.categories.end()) throw ParseError("unknown category '" + name + "'");
    const CategoryDesc& cd = dit->second;
    FiniteCategory cat(cd.objects, cd.morphisms, cd.identity, cd.composition);
    throw_if_invalid(validate_category(cat), "category '" + name + "'");
    return cats_.emplace(name, std::move(cat)).first->second;
  }

  const CatFunctor& functor(const std::string& name) {
    auto it = fns_.find(name);
    if (it != fns_.end()) return it->second;
    auto dit = wf_.functors.find(name);
    if (dit == wf_.functors.end()) throw ParseError("unknown functor '" + name + "'");
    const FunctorDesc& fd = dit->second;
    CatFunctor fn{category(fd.src), category(fd.tgt), fd.obj_map, fd.mor_map};
    throw_if_invalid(validate_functor(fn), "functor '" + name + "'");
    return fns_.emplace(name, std::move(fn)).first->second;
  }

  const Diagram& diagram(const std::string& name) {
    auto it = dgs_.find(name);
    if (it != dgs_.end()) return it->second;
    auto dit = wf_.diagrams.find(name);
    if (dit == wf_.diagrams.end()) throw ParseError("unknown diagram '" + name + "'");
    const DiagramDesc& dd = dit->second;
    Diagram dg;
    dg.base = category(dd.base);
    if (static_cast<int>(dd.fibers.size()) != dg.base.objects())
      throw ParseError("diagram '" + name + "': fiber count does not match base objects");
    if (static_cast<int>(dd.on_mor.size()) != dg.base.morphisms())
      throw ParseError("diagram '" + name + "': on_mor count does not match base morphisms");
    for (const auto& f : dd.fibers) dg.fiber.push_back(category(f));
    for (const auto& f : dd.on_mor) dg.on_mor.push_back(functor(f));
    throw_if_invalid(validate_diagram(dg), "diagram '" + name + "'");
    return dgs_.emplace(name, std::move(dg)).first->second;
  }

  const GrothendieckCategory& grothendieck(const std::string& diagram_name) {
    auto it = gro_.find(diagram_name);
    if (it != gro_.end()) return it->second;
    GrothendieckCategory g = grothendieck_construction(diagram(diagram_name));
    return gro_.emplace(diagram_name, std::move(g)).first->second;
  }

  const FiniteCategory& system_base(const std::string& name) {
    const SystemDesc& sd = system_desc(name);
    if (!sd.base_category.empty()) return category(sd.base_category);
    return grothendieck(sd.base_diagram).cat;
  }

  NaturalSystem system(const std::string& name, const Ring& ring) {
    const SystemDesc& sd = system_desc(name);
    const FiniteCategory& base = system_base(name);
    const Json& p = sd.payload;
    const std::string what = "natural system '" + name + "'";
    NaturalSystem out;
    if (sd.kind == "constant") {
      int rank = detail::to_int(p.at("rank"), what + ".rank");
      detail::expect(rank >= 0, what + ".rank must be non-negative");
      out = natsys_constant(base, ring, static_cast<std::size_t>(rank));
    } else if (sd.kind == "covariant" || sd.kind == "contravariant") {
      auto ranks_i = detail::to_int_vector(p.at("object_ranks"), what + ".object_ranks");
      std::vector<std::size_t> ranks(ranks_i.begin(), ranks_i.end());
      detail::expect(static_cast<int>(ranks.size()) == base.objects(), what + ": object_ranks size");
      const Json& mats = p.at("matrices");
      detail::expect(mats.is_array() && static_cast<int>(mats.size()) == base.morphisms(),
                     what + ": matrices size");
      std::vector<Mat> ms;
      for (int f = 0; f < base.morphisms(); ++f) {
        std::size_t r = sd.kind == "covariant" ? ranks[base.tgt(f)] : ranks[base.src(f)];
        std::size_t c = sd.kind == "covariant" ? ranks[base.src(f)] : ranks[base.tgt(f)];
        ms.push_back(detail::parse_matrix(mats[f], r, c, what + ".matrices[" + std::to_string(f) + "]"));
      }
      out = sd.kind == "covariant" ? natsys_from_covariant(base, ring, ranks, ms)
                                   : natsys_from_contravariant(base, ring, ranks, ms);
    } else if (sd.kind == "bifunctor") {
      const Json& pr = p.at("pair_ranks");
      detail::expect(pr.is_array() && static_cast<int>(pr.size()) == base.objects(),
                     what + ": pair_ranks size");
      std::vector<std::vector<std::size_t>> ranks;
      for (const auto& row : pr) {
        auto v = detail::to_int_vector(row, what + ".pair_ranks");
        detail::expect(static_cast<int>(v.size()) == base.objects(), what + ": pair_ranks row size");
        ranks.emplace_back(v.begin(), v.end());
      }
      auto parse_actions = [&](const char* key, bool left) {
        const Json& aj = p.at(key);
        detail::expect(aj.is_array() && static_cast<int>(aj.size()) == base.morphisms(),
                       what + ": " + key + " size");
        std::vector<std::vector<Mat>> acts;
        for (int f = 0; f < base.morphisms(); ++f) {
          detail::expect(aj[f].is_array() && static_cast<int>(aj[f].size()) == base.objects(),
                         what + ": " + key + " row size");
          std::vector<Mat> row;
          for (int x = 0; x < base.objects(); ++x) {
            std::size_t r = left ? ranks[base.src(f)][x] : ranks[x][base.tgt(f)];
            std::size_t c = left ? ranks[base.tgt(f)][x] : ranks[x][base.src(f)];
            row.push_back(detail::parse_matrix(aj[f][x], r, c, what + "." + key));
          }
          acts.push_back(std::move(row));
        }
        return acts;
      };
      out = natsys_from_bifunctor(base, ring, ranks, parse_actions("left", true),
                                  parse_actions("right", false));
    } else if (sd.kind == "explicit") {
      auto ranks_i = detail::to_int_vector(p.at("ranks"), what + ".ranks");
      detail::expect(static_cast<int>(ranks_i.size()) == base.morphisms(), what + ": ranks size");
      std::vector<std::size_t> ranks(ranks_i.begin(), ranks_i.end());
      NaturalSystem d(base, ring, ranks);
      // composable pairs default to identity actions; entries must match ranks
      for (int a = 0; a < base.morphisms(); ++a) {
        for (int psi : base.mors_from(base.tgt(a))) {
          if (ranks[base.compose(psi, a)] != ranks[a])
            continue;  // must be overridden below or validation fails
          d.set_post(psi, a, Mat::identity(ranks[a]));
        }
        for (int nu : base.mors_into(base.src(a))) {
          if (ranks[base.compose(a, nu)] != ranks[a]) continue;
          d.set_pre(nu, a, Mat::identity(ranks[a]));
        }
      }
      auto apply = [&](const char* key, bool post) {
        if (!p.contains(key)) return;
        detail::expect(p.at(key).is_array(), what + ": " + key + " must be an array");
        for (const auto& ej : p.at(key)) {
          int f = detail::to_int(ej.at(post ? "psi" : "nu"), what);
          int alpha = detail::to_int(ej.at("alpha"), what);
          detail::expect(f >= 0 && f < base.morphisms() && alpha >= 0 && alpha < base.morphisms(),
                         what + ": " + key + " morphism index out of range");
          detail::expect(post ? base.composable(f, alpha) : base.composable(alpha, f),
                         what + ": " + key + " entry is not composable");
          int comp = post ? base.compose(f, alpha) : base.compose(alpha, f);
          Mat m = detail::parse_matrix(ej.at("matrix"), ranks[comp], ranks[alpha], what + "." + key);
          if (post)
            d.set_post(f, alpha, std::move(m));
          else
            d.set_pre(f, alpha, std::move(m));
        }
      };
      apply("post", true);
      apply("pre", false);
      out = std::move(d);
    } else {
      throw ParseError(what + ": unknown kind '" + sd.kind + "'");
    }
    throw_if_invalid(validate_natural_system(out), what);
    return out;
  }

  /// Build an adjunction from functor names plus an optional explicit unit.
  Adjunction adjunction(const std::string& left, const std::string& right,
                        const std::optional<std::vector<int>>& unit) {
    Adjunction adj{functor(left), functor(right), {}};
    const FiniteCategory& c = adj.l.src;
    if (unit) {
      adj.unit = *unit;
    } else {
      // search: per object, universal candidates; then pick a natural family
      std::vector<std::vector<int>> candidates(c.objects());
      for (int x = 0; x < c.objects(); ++x) {
        for (int e : c.hom(x, adj.r.obj(adj.l.obj(x)))) {
          bool universal = true;
          for (int u = 0; u < adj.r.src.objects() && universal; ++u)
            for (int nu : c.hom(x, adj.r.obj(u))) {
              int count = 0;
              for (int nuhat : adj.r.src.hom(adj.l.obj(x), u))
                if (c.compose(adj.r.mor(nuhat), e) == nu) ++count;
              if (count != 1) {
                universal = false;
                break;
              }
            }
          if (universal) candidates[x].push_back(e);
        }
        if (candidates[x].empty())
          throw ValidationError("adjunction (" + left + ", " + right + "): no universal unit at object " +
                                std::to_string(x));
      }
      adj.unit.resize(c.objects());
      // try combinations, depth-first, bounded
      long attempts = 0;
      std::function<bool(int)> assign = [&](int x) -> bool {
        if (x == c.objects()) return validate_adjunction(adj).ok();
        for (int e : candidates[x]) {
          if (++attempts > 4096) return false;
          adj.unit[x] = e;
          if (assign(x + 1)) return true;
        }
        return false;
      };
      if (!assign(0))
        throw ValidationError("adjunction (" + left + ", " + right + "): no natural unit found");
      return adj;
    }
    throw_if_invalid(validate_adjunction(adj), "adjunction (" + left + ", " + right + ")");
    return adj;
  }

  /// Validate every named structure; collects problems instead of throwing.
  ValidationReport validate_all() {
    ValidationReport rep;
    for (const auto& name : wf_.category_names) {
      try {
        category(name);
      } catch (const Error& e) {
        rep.fail(e.what());
      }
    }
    for (const auto& name : wf_.functor_names) {
      try {
        functor(name);
      } catch (const Error& e) {
        rep.fail(e.what());
      }
    }
    for (const auto& name : wf_.diagram_names) {
      try {
        diagram(name);
      } catch (const Error& e) {
        rep.fail(e.what());
      }
    }
    for (const auto& name : wf_.system_names) {
      try {
        system(name, Ring::zz());
      } catch (const Error& e) {
        rep.fail(e.what());
      }
    }
    return rep;
  }

 private:
  const SystemDesc& system_desc(const std::string& name) {
    auto it = wf_.systems.find(name);
    if (it == wf_.systems.end()) throw ParseError("unknown natural system '" + name + "'");
    return it->second;
  }

  WorkbenchFile wf_;
  std::map<std::string, FiniteCategory> cats_;
  std::map<std::string, CatFunctor> fns_;
  std::map<std::string, Diagram> dgs_;
  std::map<std::string, GrothendieckCategory> gro_;
};

/// Emit a built category (with optional labels) as a workbench category block.
inline Json emit_category(const FiniteCategory& c) {
  Json j;
  j["objects"] = c.objects();
  Json mors = Json::array();
  for (int m = 0; m < c.morphisms(); ++m) mors.push_back(Json{{"src", c.src(m)}, {"tgt", c.tgt(m)}});
  j["morphisms"] = std::move(mors);
  Json ident = Json::array();
  for (int x = 0; x < c.objects(); ++x) ident.push_back(c.identity(x));
  j["identity"] = std::move(ident);
  Json comp = Json::array();
  for (int g = 0; g < c.morphisms(); ++g)
    for (int f = 0; f < c.morphisms(); ++f)
      if (c.composable(g, f)) comp.push_back(Json::array({g, f, c.compose(g, f)}));
  j["composition"] = std::move(comp);
  return j;
}

inline Json emit_invariants(const AbInvariants& inv) {
  Json j;
  j["free_rank"] = inv.free_rank;
  Json tor = Json::array();
  for (const auto& t : inv.torsion) {
    if (t.fits_slong_p())
      tor.push_back(t.get_si());
    else
      tor.push_back(t.get_str());
  }
  j["torsion"] = std::move(tor);
  j["pretty"] = inv.str();
  return j;
}

}  // namespace catcoh
