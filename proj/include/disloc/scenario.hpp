/**
 * @file scenario.hpp
 * @brief Declarative scenarios: parsing, reference resolution, check execution
 *        and text/JSON reports.
 *
 * A scenario document has the sections `patch`, `forms`, `chains`, `frames`,
 * `currents` and `checks`. Loading resolves every reference and validates
 * every degree before any numeric work; problems there are InputErrors.
 */
#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "disloc/currents.hpp"
#include "disloc/dislocation.hpp"
#include "disloc/forms.hpp"
#include "disloc/integrate.hpp"
#include "disloc/simplex.hpp"

namespace disloc::scenario {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed, unresolved or inconsistent scenario input (exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

struct Settings {
  int quadrature_order = geometry::QuadratureRule::kDefaultOrder;
  double fd_step = forms::kDefaultFdStep;
  double tolerance_scale = 1.0;
  int resolution = currents::kDefaultResolution;
  bool timing = false;
};

/// Tolerance rungs; scenario defaults are multiplied by the tolerance scale.
struct RungDef {
  const char* name;
  double value;
};
inline constexpr RungDef kRungExact{"exact", 1e-10};
inline constexpr RungDef kRungZero{"zero_threshold", 1e-9};
inline constexpr RungDef kRungAligned{"aligned_quadrature", 1e-8};
inline constexpr RungDef kRungBracket{"bracket_agreement", 1e-6};
inline constexpr RungDef kRungFd{"finite_difference", 1e-5};

struct CheckResult {
  std::size_t index = 0;
  std::string op, label, expect, verdict, rung, message;
  double residual = 0, tolerance = 0;
  Json details = Json::object();
  double wall_ms = 0;
};

struct Report {
  std::string scenario, title;
  Settings settings;
  std::vector<CheckResult> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (c.verdict != "pass") return false;
    return true;
  }
  double max_residual() const {
    double r = 0;
    for (const auto& c : checks) r = std::max(r, c.residual);
    return r;
  }
};

/// Shortest round-trip rendering shared by the text and JSON reports.
inline std::string num(double x) { return Json(x).dump(); }

namespace detail {

using forms::Form;
using forms::MultiIndex;
using forms::PiecewiseForm;
using forms::TestForm;
using geometry::Box;
using geometry::Chain;
using geometry::Patch;
using geometry::Vec;

/// Line and column (1-based) of a byte offset.
inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline Vec vec_of(const Json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw InputError(where + ": expected an array of " + std::to_string(dim) + " numbers");
  Vec v(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[i].is_number()) throw InputError(where + ": expected numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

inline const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_number()) throw InputError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

inline int integer(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_number_integer()) throw InputError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

inline std::string text(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_string()) throw InputError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline void allow_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : keys) ok |= k == a;
    if (!ok) throw InputError(where + ": unknown field '" + k + "'");
  }
}

/// 1-based axis list -> bit mask.
inline MultiIndex index_of(const Json& j, int dim, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": index must be an array of 1-based axes");
  MultiIndex I = 0;
  int prev = 0;
  for (const auto& a : j) {
    if (!a.is_number_integer()) throw InputError(where + ": index entries must be integers");
    const int ax = a.get<int>();
    if (ax < 1 || ax > dim) throw InputError(where + ": axis " + std::to_string(ax) + " out of range");
    if (ax <= prev) throw InputError(where + ": index must be strictly increasing");
    prev = ax;
    I |= 1u << (ax - 1);
  }
  return I;
}

inline Box box_of(const Json& j, int dim, const std::string& where) {
  allow_keys(j, {"lo", "hi"}, where);
  Vec lo = vec_of(need(j, "lo", where), dim, where + ".lo"), hi = vec_of(need(j, "hi", where), dim, where + ".hi");
  Box b(lo, hi);
  if (!b.solid()) throw InputError(where + ": box must have positive extent");
  return b;
}

}  // namespace detail

/// A loaded scenario: named objects plus prepared checks.
class Scenario {
 public:
  using Form = forms::Form;
  using PiecewiseForm = forms::PiecewiseForm;
  using TestForm = forms::TestForm;
  using Box = geometry::Box;
  using Chain = geometry::Chain;
  using Patch = geometry::Patch;
  using Vec = geometry::Vec;
  using Current = currents::Current;
  using LayerForm = currents::LayerForm;
  using Outcome = std::pair<double, Json>;  // residual, details

  struct PreparedCheck {
    std::string op, label;
    bool expect_violation = false;
    double tolerance = 0;
    std::string rung;
    std::function<Outcome()> run;
  };

  /// Parses and validates; throws InputError with line/column on syntax errors.
  static Scenario parse(const std::string& text, const Settings& settings, std::string fallback_id = "scenario") {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      auto [line, col] = detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1);
      std::string msg = e.what();
      if (auto at = msg.find("column"); at != std::string::npos && msg.find(": ", at) != std::string::npos)
        msg = msg.substr(msg.find(": ", at) + 2);
      throw InputError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
    }
    return Scenario(doc, settings, std::move(fallback_id));
  }

  Scenario(const Json& doc, const Settings& settings, std::string fallback_id = "scenario")
      : doc_(doc), settings_(settings) {
    using namespace detail;
    allow_keys(doc_, {"id", "title", "description", "patch", "forms", "chains", "frames", "currents", "checks"},
               "scenario");
    id_ = doc_.contains("id") ? text(doc_, "id", "scenario") : std::move(fallback_id);
    title_ = doc_.contains("title") ? text(doc_, "title", "scenario") : id_;
    if (settings_.quadrature_order < 1 || settings_.quadrature_order > geometry::QuadratureRule::kMaxOrder)
      throw InputError("quadrature order must lie in 1.." + std::to_string(geometry::QuadratureRule::kMaxOrder));
    if (!(settings_.fd_step > 0)) throw InputError("fd step must be positive");
    if (!(settings_.tolerance_scale > 0)) throw InputError("tolerance scale must be positive");
    if (settings_.resolution < 1) throw InputError("resolution must be >= 1");
    parse_patch();
    for (const char* section : {"forms", "chains", "frames", "currents"}) {
      if (!doc_.contains(section)) continue;
      if (!doc_[section].is_object()) throw InputError(std::string(section) + ": expected an object of named entries");
      for (const auto& [name, v] : doc_[section].items()) {
        if (std::string(section) == "forms") form(name, "");
        if (std::string(section) == "chains") chain(name, "");
        if (std::string(section) == "frames") frame(name, "");
        if (std::string(section) == "currents") current(name, "");
      }
    }
    const Json& checks = need(doc_, "checks", "scenario");
    if (!checks.is_array() || checks.empty()) throw InputError("checks: expected a non-empty array");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      try {
        checks_.push_back(prepare(checks[i], i + 1));
      } catch (const InputError&) {
        throw;
      } catch (const Error& e) {
        throw InputError("checks[" + std::to_string(i + 1) + "]: " + e.what());
      } catch (const Json::exception& e) {
        throw InputError("checks[" + std::to_string(i + 1) + "]: " + e.what());
      }
    }
  }

  const std::string& id() const { return id_; }
  const std::string& title() const { return title_; }
  const Patch& patch() const { return patch_; }
  const std::vector<PreparedCheck>& checks() const { return checks_; }

  Report run() const {
    Report rep{id_, title_, settings_, {}};
    for (std::size_t i = 0; i < checks_.size(); ++i) {
      const auto& c = checks_[i];
      CheckResult r;
      r.index = i + 1;
      r.op = c.op;
      r.label = c.label;
      r.expect = c.expect_violation ? "violated" : "holds";
      r.tolerance = c.tolerance;
      r.rung = c.rung;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        auto [res, details] = c.run();
        r.residual = res;
        r.details = std::move(details);
        const bool holds = res <= c.tolerance;
        r.verdict = holds != c.expect_violation ? "pass" : "fail";
      } catch (const std::exception& e) {
        r.verdict = "error";
        r.message = e.what();
      }
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      rep.checks.push_back(std::move(r));
    }
    return rep;
  }

 private:
  struct FrameEntry {
    std::optional<dislocation::FrameField> frame;
    std::optional<dislocation::CoframeField> coframe;
  };

  const geometry::QuadratureRule& rule() const { return geometry::QuadratureRule::of_order(settings_.quadrature_order); }
  int dim() const { return patch_.dim(); }

  // -------------------------------------------------------------------------
  // sections

  void parse_patch() {
    using namespace detail;
    const Json& p = need(doc_, "patch", "scenario");
    allow_keys(p, {"dim", "lo", "hi", "cube"}, "patch");
    const int n = integer(p, "dim", "patch");
    if (n < 2 || n > 3) throw InputError("patch.dim: must be 2 or 3");
    try {
      if (p.contains("cube")) {
        if (p.contains("lo") || p.contains("hi")) throw InputError("patch: give either 'cube' or 'lo'/'hi'");
        patch_ = Patch::cube(n, number(p, "cube", "patch"));
      } else {
        patch_ = Patch(Box(vec_of(need(p, "lo", "patch"), n, "patch.lo"), vec_of(need(p, "hi", "patch"), n, "patch.hi")));
      }
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(std::string("patch: ") + e.what());
    }
  }

  const Json& entry(const char* section, const std::string& name, const std::string& from) const {
    if (!doc_.contains(section) || !doc_[section].contains(name)) {
      std::string known;
      if (doc_.contains(section))
        for (const auto& [k, v] : doc_[section].items()) known += (known.empty() ? "" : ", ") + k;
      throw InputError((from.empty() ? std::string(section) : from) + ": unknown " + std::string(section).substr(0, std::string(section).size() - 1) +
                       " '" + name + "'" + (known.empty() ? "" : " (known: " + known + ")"));
    }
    return doc_[section][name];
  }

  template <class Map, class Build>
  auto& resolve(Map& cache, const char* section, const std::string& name, const std::string& from, Build build) {
    if (auto it = cache.find(name); it != cache.end()) return it->second;
    const Json& j = entry(section, name, from);
    const std::string key = std::string(section) + "." + name;
    if (!visiting_.insert(key).second) throw InputError(key + ": circular reference");
    try {
      auto value = build(j, key);
      visiting_.erase(key);
      return cache.emplace(name, std::move(value)).first->second;
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(key + ": " + e.what());
    } catch (const Json::exception& e) {
      throw InputError(key + ": " + e.what());
    }
  }

  ScalarField field(const Json& j, const std::string& where) const {
    if (j.is_number()) return ScalarField::constant(dim(), j.get<double>());
    if (!j.is_array()) throw InputError(where + ": a field is a number or a list of [coeff, e1, ..., en] terms");
    Polynomial p(dim());
    for (const auto& t : j) {
      if (!t.is_array() || static_cast<int>(t.size()) != dim() + 1 || !t[0].is_number())
        throw InputError(where + ": polynomial term must be [coeff, e1, ..., en]");
      Exponents e{0, 0, 0};
      for (int i = 0; i < dim(); ++i) {
        if (!t[i + 1].is_number_integer() || t[i + 1].get<int>() < 0)
          throw InputError(where + ": exponents must be non-negative integers");
        e[i] = t[i + 1].get<int>();
      }
      p.add_term(e, t[0].get<double>());
    }
    return ScalarField::polynomial(std::move(p));
  }

  const LayerForm& form(const std::string& name, const std::string& from) {
    return resolve(forms_, "forms", name, from, [&](const Json& j, const std::string& where) -> LayerForm {
      using namespace detail;
      if (j.contains("builtin")) {
        const std::string b = text(j, "builtin", where);
        if (b == "step_interface") {
          allow_keys(j, {"builtin", "a"}, where);
          if (dim() != 2) throw InputError(where + ": step_interface needs a 2-dimensional patch");
          return forms::step_interface_form(patch_, number(j, "a", where));
        }
        if (b == "closed_x1") {
          allow_keys(j, {"builtin"}, where);
          return Form::basis(patch_, 1u);
        }
        throw InputError(where + ": unknown builtin form '" + b + "' (known: step_interface, closed_x1)");
      }
      if (j.contains("d")) {
        allow_keys(j, {"d"}, where);
        const LayerForm& f = form(text(j, "d", where), where);
        const auto* smooth = std::get_if<Form>(&f);
        if (!smooth) throw InputError(where + ": d applies to smooth forms only");
        if (smooth->degree() >= dim()) throw InputError(where + ": d of a top-degree form");
        return forms::exterior_derivative(*smooth, settings_.fd_step);
      }
      if (j.contains("piecewise")) {
        allow_keys(j, {"piecewise"}, where);
        std::vector<forms::FormPiece> pieces;
        for (const auto& pj : j["piecewise"]) {
          allow_keys(pj, {"region", "form"}, where + ".piecewise");
          const Json& r = need(pj, "region", where);
          Box region;
          if (r.contains("half_space")) {
            const Json& h = r["half_space"];
            allow_keys(h, {"axis", "offset", "side"}, where + ".half_space");
            const int axis = integer(h, "axis", where);
            if (axis < 1 || axis > dim()) throw InputError(where + ": half_space axis out of range");
            const std::string side = text(h, "side", where);
            if (side != "lower" && side != "upper") throw InputError(where + ": side must be 'lower' or 'upper'");
            region = forms::half_space(patch_, axis - 1, number(h, "offset", where), side == "upper");
          } else {
            region = box_of(need(r, "box", where), dim(), where + ".box");
          }
          const LayerForm& f = form(text(pj, "form", where), where);
          const auto* smooth = std::get_if<Form>(&f);
          if (!smooth) throw InputError(where + ": piece forms must be smooth");
          pieces.push_back({region, *smooth});
        }
        return PiecewiseForm(patch_, std::move(pieces));
      }
      allow_keys(j, {"degree", "components"}, where);
      const int k = integer(j, "degree", where);
      if (k < 0 || k > dim()) throw InputError(where + ": degree out of range");
      std::vector<std::pair<MultiIndex, ScalarField>> comps;
      for (const auto& c : need(j, "components", where)) {
        allow_keys(c, {"index", "field"}, where + ".components");
        const MultiIndex I = index_of(need(c, "index", where), dim(), where);
        if (forms::index_length(I) != k) throw InputError(where + ": component index length differs from degree");
        comps.emplace_back(I, field(need(c, "field", where), where));
      }
      return Form(patch_, k, comps);
    });
  }

  const Form& smooth_form(const std::string& name, const std::string& from) {
    const LayerForm& f = form(name, from);
    if (const auto* s = std::get_if<Form>(&f)) return *s;
    throw InputError(from + ": form '" + name + "' must be smooth here");
  }

  const Chain& chain(const std::string& name, const std::string& from) {
    return resolve(chains_, "chains", name, from, [&](const Json& j, const std::string& where) -> Chain {
      using namespace detail;
      Chain c = build_chain(j, where);
      for (const auto& [verts, a] : c.terms())
        for (const auto& x : verts)
          if (!patch_.contains(x)) throw InputError(where + ": vertex " + x.str() + " outside the patch");
      return c;
    });
  }

  Chain build_chain(const Json& j, const std::string& where) {
    using namespace detail;
    if (j.contains("builtin")) {
      const std::string b = text(j, "builtin", where);
      auto need3 = [&] {
        if (!(patch_ == Patch::cube(3))) throw InputError(where + ": builtin '" + b + "' lives in the cube (-1,1)^3");
      };
      if (b == "half_plane_cube") {
        allow_keys(j, {"builtin"}, where);
        need3();
        return dislocation::half_plane_cube();
      }
      if (b == "three_quarter_planes") {
        allow_keys(j, {"builtin", "a"}, where);
        need3();
        const Vec a = vec_of(need(j, "a", where), 3, where + ".a");
        return dislocation::three_quarter_planes(a[0], a[1], a[2]);
      }
      if (b == "quarter_plane") {
        allow_keys(j, {"builtin", "which"}, where);
        need3();
        const int w = integer(j, "which", where);
        if (w < 1 || w > 3) throw InputError(where + ": which must be 1, 2 or 3");
        return dislocation::quarter_planes()[w - 1];
      }
      if (b == "fork_line") {
        allow_keys(j, {"builtin", "which"}, where);
        need3();
        const std::string w = text(j, "which", where);
        const auto f = dislocation::fork_lines();
        if (w == "L1") return f.L1;
        if (w == "L2") return f.L2;
        if (w == "L3") return f.L3;
        if (w == "L") return f.L;
        throw InputError(where + ": which must be L1, L2, L3 or L");
      }
      if (b == "step_interface_line") {
        allow_keys(j, {"builtin"}, where);
        if (dim() != 2) throw InputError(where + ": step_interface_line needs a 2-dimensional patch");
        return dislocation::step_interface_line(patch_);
      }
      throw InputError(where + ": unknown builtin chain '" + b +
                       "' (known: half_plane_cube, three_quarter_planes, quarter_plane, fork_line, step_interface_line)");
    }
    if (j.contains("simplices")) {
      allow_keys(j, {"simplices"}, where);
      const Json& s = j["simplices"];
      if (!s.is_array() || s.empty()) throw InputError(where + ": simplices must be a non-empty array");
      std::optional<Chain> c;
      for (const auto& sj : s) {
        allow_keys(sj, {"vertices", "coefficient"}, where + ".simplices");
        std::vector<Vec> verts;
        for (const auto& v : need(sj, "vertices", where)) verts.push_back(vec_of(v, dim(), where + ".vertices"));
        if (verts.empty()) throw InputError(where + ": a simplex needs vertices");
        const int k = static_cast<int>(verts.size()) - 1;
        if (!c) c.emplace(dim(), k);
        if (c->degree() != k) throw InputError(where + ": simplices of mixed dimension");
        c->add(geometry::OrientedSimplex(std::move(verts)), number_or(sj, "coefficient", 1.0, where));
      }
      return *c;
    }
    if (j.contains("box")) {
      allow_keys(j, {"box", "resolution"}, where);
      return geometry::triangulate_box(box_of(j["box"], dim(), where + ".box"),
                                       j.contains("resolution") ? integer(j, "resolution", where) : 1);
    }
    if (j.contains("parallelotope")) {
      allow_keys(j, {"parallelotope", "resolution"}, where);
      const Json& p = j["parallelotope"];
      allow_keys(p, {"origin", "edges"}, where + ".parallelotope");
      std::vector<Vec> edges;
      for (const auto& e : need(p, "edges", where)) edges.push_back(vec_of(e, dim(), where + ".edges"));
      return geometry::triangulate_parallelotope(vec_of(need(p, "origin", where), dim(), where + ".origin"), edges,
                                                 j.contains("resolution") ? integer(j, "resolution", where) : 1);
    }
    if (j.contains("boundary_of")) {
      allow_keys(j, {"boundary_of"}, where);
      return geometry::boundary_chain(chain(text(j, "boundary_of", where), where));
    }
    if (j.contains("sum")) {
      allow_keys(j, {"sum"}, where);
      std::optional<Chain> c;
      for (const auto& t : j["sum"]) {
        allow_keys(t, {"weight", "chain"}, where + ".sum");
        const Chain& ci = chain(text(t, "chain", where), where);
        if (!c) c.emplace(ci.ambient_dim(), ci.degree());
        if (c->degree() != ci.degree()) throw InputError(where + ": summing chains of different degree");
        *c += ci.scaled(number_or(t, "weight", 1.0, where));
      }
      if (!c) throw InputError(where + ": empty sum");
      return *c;
    }
    throw InputError(where + ": a chain needs one of builtin, simplices, box, parallelotope, boundary_of, sum");
  }

  const FrameEntry& frame(const std::string& name, const std::string& from) {
    return resolve(frames_, "frames", name, from, [&](const Json& j, const std::string& where) -> FrameEntry {
      using namespace detail;
      allow_keys(j, {"kind", "entries"}, where);
      const std::string kind = text(j, "kind", where);
      const Json& e = need(j, "entries", where);
      if (!e.is_array() || static_cast<int>(e.size()) != dim()) throw InputError(where + ": entries must be n x n");
      std::vector<std::vector<ScalarField>> m;
      for (const auto& row : e) {
        if (!row.is_array() || static_cast<int>(row.size()) != dim()) throw InputError(where + ": entries must be n x n");
        std::vector<ScalarField> r;
        for (const auto& x : row) r.push_back(field(x, where));
        m.push_back(std::move(r));
      }
      FrameEntry out;
      if (kind == "frame")
        out.frame.emplace(patch_, std::move(m));
      else if (kind == "coframe")
        out.coframe.emplace(patch_, std::move(m));
      else
        throw InputError(where + ": kind must be 'frame' or 'coframe'");
      return out;
    });
  }

  const Current& current(const std::string& name, const std::string& from) {
    return resolve(currents_, "currents", name, from, [&](const Json& j, const std::string& where) -> Current {
      using namespace detail;
      const std::string type = text(j, "type", where);
      if (type == "form") {
        allow_keys(j, {"type", "form", "region", "resolution"}, where);
        currents::Region region = currents::WholePatch{};
        if (j.contains("region")) {
          const Json& r = j["region"];
          if (r.is_string() && r.get<std::string>() == "patch") {
          } else if (r.is_object() && r.contains("box")) {
            region = box_of(r["box"], dim(), where + ".region.box");
          } else if (r.is_object() && r.contains("chain")) {
            region = chain(text(r, "chain", where), where);
          } else {
            throw InputError(where + ": region must be \"patch\", {\"box\": ...} or {\"chain\": name}");
          }
        }
        const int res = j.contains("resolution") ? integer(j, "resolution", where) : settings_.resolution;
        return currents::form_current(patch_, form(text(j, "form", where), where), std::move(region), res);
      }
      if (type == "chain") {
        allow_keys(j, {"type", "chain"}, where);
        return currents::chain_current(patch_, chain(text(j, "chain", where), where));
      }
      if (type == "weighted_chain") {
        allow_keys(j, {"type", "chain", "weight"}, where);
        return currents::weighted_chain_current(patch_, chain(text(j, "chain", where), where),
                                                field(need(j, "weight", where), where));
      }
      if (type == "dirac") {
        allow_keys(j, {"type", "point", "vectors"}, where);
        std::vector<Vec> vs;
        if (j.contains("vectors"))
          for (const auto& v : j["vectors"]) vs.push_back(vec_of(v, dim(), where + ".vectors"));
        return currents::dirac_current(patch_, vec_of(need(j, "point", where), dim(), where + ".point"), vs);
      }
      if (type == "contraction") {
        allow_keys(j, {"type", "current", "form"}, where);
        return currents::contract(current(text(j, "current", where), where), smooth_form(text(j, "form", where), where));
      }
      if (type == "combination") {
        allow_keys(j, {"type", "degree", "terms"}, where);
        std::vector<std::pair<double, Current>> terms;
        for (const auto& t : need(j, "terms", where)) {
          allow_keys(t, {"weight", "current"}, where + ".terms");
          terms.emplace_back(number_or(t, "weight", 1.0, where), current(text(t, "current", where), where));
        }
        if (j.contains("degree")) return currents::combine(patch_, integer(j, "degree", where), std::move(terms));
        return currents::combine(std::move(terms));
      }
      if (type == "boundary") {
        allow_keys(j, {"type", "current", "mode"}, where);
        const Current& T = current(text(j, "current", where), where);
        const std::string mode = j.contains("mode") ? text(j, "mode", where) : "auto";
        if (mode == "weak") return currents::boundary_weak(T);
        if (mode == "structural") return currents::boundary_structural(T, settings_.fd_step);
        if (mode == "auto") return dislocation::dislocation_current(T, settings_.fd_step).current;
        throw InputError(where + ": mode must be weak, structural or auto");
      }
      throw InputError(where + ": unknown current type '" + type +
                       "' (known: form, chain, weighted_chain, dirac, contraction, combination, boundary)");
    });
  }

  // -------------------------------------------------------------------------
  // probes

  std::vector<TestForm> probes(const Json& c, int degree, const std::string& where, int default_grid = 3) {
    using namespace detail;
    if (degree < 0 || degree > dim()) throw InputError(where + ": no probes of degree " + std::to_string(degree));
    std::vector<TestForm> out;
    try {
      if (c.contains("probes") && c["probes"].is_array()) {
        for (const auto& p : c["probes"]) out.push_back(single_probe(p, degree, where + ".probes"));
        if (out.empty()) throw InputError(where + ": empty probe list");
        return out;
      }
      int grid = default_grid;
      double amp = 1.0;
      if (c.contains("probes")) {
        allow_keys(c["probes"], {"grid", "amplitude"}, where + ".probes");
        if (c["probes"].contains("grid")) grid = integer(c["probes"], "grid", where + ".probes");
        amp = number_or(c["probes"], "amplitude", 1.0, where + ".probes");
      }
      if (grid < 1) throw InputError(where + ": probe grid must be >= 1");
      const Box& pb = patch_.bounds();
      std::array<int, geometry::kMaxDim> idx{0, 0, 0};
      for (;;) {
        Vec lo(dim()), hi(dim());
        for (int i = 0; i < dim(); ++i) {
          const double w = pb.extent(i) / grid;
          lo[i] = pb.lo()[i] + w * idx[i];
          hi[i] = pb.lo()[i] + w * (idx[i] + 1);
        }
        for (auto& p : dislocation::basis_probes(patch_, dislocation::probe_box(patch_, Box(lo, hi)), degree, amp))
          out.push_back(std::move(p));
        int j = dim() - 1;
        while (j >= 0 && ++idx[j] == grid) idx[j--] = 0;
        if (j < 0) break;
      }
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(where + ": " + e.what());
    }
    return out;
  }

  TestForm single_probe(const Json& p, int degree, const std::string& where) {
    using namespace detail;
    allow_keys(p, {"center", "radii", "index", "amplitude", "m"}, where);
    const MultiIndex I = p.contains("index") ? index_of(p["index"], dim(), where) : 0u;
    if (forms::index_length(I) != degree)
      throw InputError(where + ": probe index has degree " + std::to_string(forms::index_length(I)) + ", expected " +
                       std::to_string(degree));
    const int m = p.contains("m") ? integer(p, "m", where) : forms::kDefaultBumpPower;
    try {
      return forms::make_bump_testform(patch_, vec_of(need(p, "center", where), dim(), where + ".center"),
                                       vec_of(need(p, "radii", where), dim(), where + ".radii"), m, I,
                                       number_or(p, "amplitude", 1.0, where));
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(where + ": " + e.what());
    }
  }

  // -------------------------------------------------------------------------
  // checks

  static double relative(double diff, double scale, double floor) { return diff / std::max(scale, floor); }

  /// max_p |a(p) - b(p)| relative to the largest value seen, floored at the natural
  /// size amp * vol(support) of a probe pairing.
  Outcome compare_sweep(const Current& a, const Current& b, const std::vector<TestForm>& ps) const {
    double diff = 0, scale = 0, floor = 0;
    Json values = Json::array();
    for (const auto& p : ps) {
      const double va = currents::evaluate(a, p, rule()), vb = currents::evaluate(b, p, rule());
      diff = std::max(diff, std::abs(va - vb));
      scale = std::max({scale, std::abs(va), std::abs(vb)});
      floor = std::max(floor, p.support().volume());
    }
    const double res = relative(diff, scale, floor);
    return {res, Json{{"probes", ps.size()}, {"max_abs_difference", diff}, {"max_abs_value", scale}}};
  }

  PreparedCheck prepare(const Json& c, std::size_t index) {
    using namespace detail;
    const std::string where = "checks[" + std::to_string(index) + "]";
    if (!c.is_object()) throw InputError(where + ": expected an object");
    PreparedCheck pc;
    pc.op = text(c, "op", where);
    pc.label = c.contains("label") ? text(c, "label", where) : "";
    if (c.contains("expect")) {
      const std::string e = text(c, "expect", where);
      if (e != "holds" && e != "violated") throw InputError(where + ".expect: must be 'holds' or 'violated'");
      pc.expect_violation = e == "violated";
    }
    auto set_tol = [&](RungDef r) {
      pc.rung = r.name;
      pc.tolerance = r.value * settings_.tolerance_scale;
      if (c.contains("tolerance")) {
        pc.tolerance = number(c, "tolerance", where);
        pc.rung = "declared";
        if (!(pc.tolerance >= 0)) throw InputError(where + ".tolerance: must be non-negative");
      }
    };
    auto keys = [&](std::initializer_list<const char*> extra) {
      for (const auto& [k, v] : c.items()) {
        bool ok = k == "op" || k == "label" || k == "expect" || k == "tolerance";
        for (const char* e : extra) ok |= k == e;
        if (!ok) throw InputError(where + ": unknown field '" + k + "' for op " + pc.op);
      }
    };
    const auto q = &rule();
    const std::string& op = pc.op;

    if (op == "evaluate") {
      keys({"current", "probe", "expected"});
      set_tol(kRungAligned);
      const Current T = current(text(c, "current", where), where);
      const TestForm p = single_probe(need(c, "probe", where), T.degree(), where + ".probe");
      const double expected = number(c, "expected", where);
      pc.run = [T, p, expected, q] {
        const double v = currents::evaluate(T, p, *q);
        return Outcome{relative(std::abs(v - expected), std::abs(expected), 1.0), Json{{"value", v}, {"expected", expected}}};
      };
    } else if (op == "equal") {
      keys({"lhs", "rhs", "probes"});
      set_tol(kRungAligned);
      const Current a = current(text(c, "lhs", where), where), b = current(text(c, "rhs", where), where);
      if (a.degree() != b.degree()) throw InputError(where + ": lhs and rhs differ in degree");
      auto ps = probes(c, a.degree(), where);
      pc.run = [this, a, b, ps] { return compare_sweep(a, b, ps); };
    } else if (op == "boundary_equals") {
      keys({"current", "expected", "probes", "mode"});
      set_tol(kRungAligned);
      const Current T = current(text(c, "current", where), where);
      const Current E = current(text(c, "expected", where), where);
      if (T.degree() == 0) throw InputError(where + ": a 0-current has no boundary");
      if (E.degree() != T.degree() - 1)
        throw InputError(where + ": expected current must have degree " + std::to_string(T.degree() - 1));
      const std::string mode = c.contains("mode") ? text(c, "mode", where) : "auto";
      if (mode != "auto" && mode != "weak" && mode != "structural")
        throw InputError(where + ".mode: must be auto, weak or structural");
      auto ps = probes(c, E.degree(), where);
      const double fd = settings_.fd_step;
      pc.run = [this, T, E, ps, mode, fd] {
        Current D;
        bool structural = true;
        if (mode == "weak") {
          D = currents::boundary_weak(T);
          structural = false;
        } else if (mode == "structural") {
          D = currents::boundary_structural(T, fd);
        } else {
          auto dc = dislocation::dislocation_current(T, fd);
          D = dc.current;
          structural = dc.structural;
        }
        auto out = compare_sweep(D, E, ps);
        out.second["structural"] = structural;
        out.second["boundary"] = Json::parse(currents::describe(D).dump());
        return out;
      };
    } else if (op == "weak_structural_agreement") {
      keys({"current", "probes"});
      set_tol(kRungAligned);
      const Current T = current(text(c, "current", where), where);
      if (T.degree() == 0) throw InputError(where + ": a 0-current has no boundary");
      auto ps = probes(c, T.degree() - 1, where);
      const double fd = settings_.fd_step;
      pc.run = [this, T, ps, fd] {
        const Current S = currents::boundary_structural(T, fd);
        auto out = compare_sweep(currents::boundary_weak(T), S, ps);
        out.second["boundary"] = Json::parse(currents::describe(S).dump());
        return out;
      };
    } else if (op == "closed") {
      keys({"current", "probes"});
      set_tol(kRungZero);
      const Current T = current(text(c, "current", where), where);
      if (T.degree() == 0) throw InputError(where + ": a 0-current has no boundary");
      auto ps = probes(c, T.degree() - 1, where);
      pc.run = [this, T, ps] {
        const Current B = currents::boundary_weak(T);
        double worst = 0;
        for (const auto& p : ps)
          worst = std::max(worst, std::abs(currents::evaluate(B, p, rule())) / p.support().volume());
        return Outcome{worst, Json{{"probes", ps.size()}}};
      };
    } else if (op == "nilpotent") {
      keys({"current", "probes"});
      set_tol(kRungZero);
      const Current T = current(text(c, "current", where), where);
      if (T.degree() < 2) throw InputError(where + ": the current needs degree >= 2");
      auto ps = probes(c, T.degree() - 2, where);
      const double fd = settings_.fd_step;
      pc.run = [this, T, ps, fd] {
        const auto D = dislocation::dislocation_current(T, fd);
        const Current dd = currents::boundary_weak(D.current);
        double worst = 0;
        for (const auto& p : ps) worst = std::max(worst, std::abs(currents::evaluate(dd, p, rule())));
        return Outcome{worst, Json{{"probes", ps.size()}, {"structural", D.structural}}};
      };
    } else if (op == "support") {
      keys({"current", "boundary", "resolution", "amplitude", "expect_lines", "expect_points", "expect_empty"});
      set_tol(RungDef{"exact", 0.0});
      const Current T = current(text(c, "current", where), where);
      const bool take_boundary = c.contains("boundary") ? c["boundary"].get<bool>() : true;
      if (take_boundary && T.degree() == 0) throw InputError(where + ": a 0-current has no boundary");
      const int res = c.contains("resolution") ? integer(c, "resolution", where) : settings_.resolution;
      if (res < 2) throw InputError(where + ".resolution: must be >= 2");
      const double amp = number_or(c, "amplitude", 1.0, where);
      std::vector<std::vector<Vec>> expect;
      int given = 0;
      if (c.contains("expect_lines")) {
        ++given;
        for (const auto& name : c["expect_lines"]) {
          const Chain& L = chain(name.get<std::string>(), where);
          if (L.degree() > 1) throw InputError(where + ": expect_lines takes 0- or 1-chains");
          for (const auto& [verts, a] : L.terms()) expect.push_back(verts);
        }
      }
      if (c.contains("expect_points")) {
        ++given;
        for (const auto& x : c["expect_points"]) expect.push_back({vec_of(x, dim(), where + ".expect_points")});
      }
      if (c.contains("expect_empty")) ++given;
      if (given != 1) throw InputError(where + ": give exactly one of expect_lines, expect_points, expect_empty");
      const double fd = settings_.fd_step;
      pc.run = [this, T, take_boundary, res, amp, expect, fd] {
        Current D = T;
        Json details = Json::object();
        if (take_boundary) {
          auto dc = dislocation::dislocation_current(T, fd);
          D = dc.current;
          details["structural"] = dc.structural;
          details["boundary"] = Json::parse(currents::describe(D).dump());
        }
        const auto cells = dislocation::detect_support(D, res, amp, rule());
        const auto want = cells_meeting(expect, res);
        std::set<std::array<int, 3>> got;
        for (const auto& cell : cells) got.insert(cell.index);
        std::size_t missing = 0, extra = 0;
        for (const auto& w : want) missing += !got.count(w);
        for (const auto& g : got) extra += !want.count(g);
        details["cells_flagged"] = got.size();
        details["cells_expected"] = want.size();
        details["missing"] = missing;
        details["unexpected"] = extra;
        return Outcome{static_cast<double>(missing + extra), details};
      };
    } else if (op == "frank_node") {
      keys({"lines", "probes"});
      set_tol(kRungExact);
      std::vector<std::pair<double, Chain>> lines;
      for (const auto& l : need(c, "lines", where)) {
        allow_keys(l, {"weight", "chain"}, where + ".lines");
        const Chain& ch = chain(text(l, "chain", where), where);
        if (ch.degree() != 1) throw InputError(where + ": node lines must be 1-chains");
        lines.emplace_back(number(l, "weight", where), ch);
      }
      if (lines.empty()) throw InputError(where + ": no lines");
      std::vector<TestForm> ps;
      if (c.contains("probes")) ps = probes(c, 0, where);
      pc.run = [this, lines, ps] {
        const auto r = dislocation::frank_node_check(patch_, lines, ps, rule());
        return Outcome{r.residual, Json{{"node", r.node.to_vector()}, {"signs", r.signs}, {"signed_sum", r.signed_sum},
                                        {"probe_values", r.probe_values}}};
      };
    } else if (op == "frank_constancy") {
      keys({"weight", "chain", "allow_boundary", "probes"});
      set_tol(kRungZero);
      const ScalarField u = field(need(c, "weight", where), where + ".weight");
      const Chain L = chain(text(c, "chain", where), where);
      if (L.degree() < 1) throw InputError(where + ": the chain needs degree >= 1");
      const bool allow = c.contains("allow_boundary") && c["allow_boundary"].get<bool>();
      if (!allow && !geometry::restrict_to_open_patch(geometry::boundary_chain(L), patch_).empty())
        throw InputError(where + ": the chain has boundary inside the patch and allow_boundary is not set");
      std::vector<TestForm> ps;
      if (c.contains("probes")) ps = probes(c, L.degree() - 1, where);
      pc.run = [this, u, L, ps, allow] {
        const auto r = dislocation::frank_constancy_check(u, patch_, L, ps, allow, 0.0, rule());
        double worst = 0;
        for (std::size_t i = 0; i < r.probe_values.size(); ++i) worst = std::max(worst, std::abs(r.probe_values[i]));
        return Outcome{worst, Json{{"probes", r.probe_values.size()}, {"probe_values", r.probe_values},
                                   {"boundary", Json::parse(currents::describe(r.boundary).dump())}}};
      };
    } else if (op == "total_dislocation") {
      keys({"form", "chains"});
      set_tol(kRungAligned);
      const Form phi = smooth_form(text(c, "form", where), where);
      if (phi.degree() != 1) throw InputError(where + ": the layering form must be a 1-form");
      std::vector<Chain> zs;
      for (const auto& name : need(c, "chains", where)) {
        const Chain& z = chain(name.get<std::string>(), where);
        if (z.degree() != 2) throw InputError(where + ": chains must be 2-chains");
        zs.push_back(z);
      }
      if (zs.empty()) throw InputError(where + ": no chains");
      const double fd = settings_.fd_step;
      pc.run = [this, phi, zs, fd] {
        Json vals = Json::array();
        double lo = 1e300, hi = -1e300, worst = 0, scale = 0;
        for (const auto& z : zs) {
          const auto t = dislocation::total_dislocation(phi, z, rule(), fd);
          vals.push_back({{"boundary", t.boundary_integral}, {"interior", t.interior_integral}});
          lo = std::min({lo, t.interior_integral, t.boundary_integral});
          hi = std::max({hi, t.interior_integral, t.boundary_integral});
          scale = std::max({scale, std::abs(t.interior_integral), std::abs(t.boundary_integral)});
          worst = std::max(worst, std::abs(t.interior_integral - t.boundary_integral));
        }
        worst = std::max(worst, hi - lo);
        return Outcome{relative(worst, scale, 1.0), Json{{"values", vals}}};
      };
    } else if (op == "dislocation_density") {
      keys({"form", "expected"});
      set_tol(kRungExact);
      const Form phi = smooth_form(text(c, "form", where), where);
      if (phi.degree() != 1) throw InputError(where + ": the layering form must be a 1-form");
      std::optional<Form> expected;
      if (c.contains("expected")) expected = smooth_form(text(c, "expected", where), where);
      if (expected && expected->degree() != 2) throw InputError(where + ": expected must be a 2-form");
      const double fd = settings_.fd_step;
      pc.run = [this, phi, expected, fd] {
        const Form delta = dislocation::dislocation_density(phi, fd);
        const Form diff = expected ? delta - *expected : delta;
        return Outcome{max_on_audit(diff), Json{{"density", delta.str()}}};
      };
    } else if (op == "torsion") {
      keys({"coframe", "expected"});
      set_tol(kRungExact);
      const FrameEntry& fe = frame(text(c, "coframe", where), where);
      if (!fe.coframe) throw InputError(where + ": torsion needs a coframe");
      std::vector<Form> expected;
      if (c.contains("expected")) {
        for (const auto& name : c["expected"]) expected.push_back(smooth_form(name.get<std::string>(), where));
        if (static_cast<int>(expected.size()) != dim()) throw InputError(where + ": expected needs n forms");
        for (const auto& e : expected)
          if (e.degree() != 2) throw InputError(where + ": expected torsion components are 2-forms");
      }
      const auto cf = *fe.coframe;
      pc.run = [this, cf, expected] {
        const auto tau = dislocation::torsion(cf);
        double worst = 0;
        Json comps = Json::array();
        for (std::size_t a = 0; a < tau.size(); ++a) {
          comps.push_back(tau[a].str());
          worst = std::max(worst, max_on_audit(expected.empty() ? tau[a] : tau[a] - expected[a]));
        }
        return Outcome{worst, Json{{"torsion", comps}}};
      };
    } else if (op == "burgers_bracket") {
      keys({"frame", "alpha", "beta", "points", "expected"});
      set_tol(kRungBracket);
      const FrameEntry& fe = frame(text(c, "frame", where), where);
      if (!fe.frame) throw InputError(where + ": burgers_bracket needs a frame");
      const int a = integer(c, "alpha", where) - 1, b = integer(c, "beta", where) - 1;
      if (a < 0 || b < 0 || a >= dim() || b >= dim()) throw InputError(where + ": frame index out of range");
      if (a == b) throw InputError(where + ": alpha and beta must differ");
      std::vector<Vec> pts;
      for (const auto& x : need(c, "points", where)) {
        pts.push_back(vec_of(x, dim(), where + ".points"));
        if (!patch_.contains(pts.back())) throw InputError(where + ": point outside the patch");
      }
      std::vector<Vec> expected;
      if (c.contains("expected"))
        for (const auto& x : c["expected"]) expected.push_back(vec_of(x, dim(), where + ".expected"));
      if (!expected.empty() && expected.size() != pts.size())
        throw InputError(where + ": expected needs one vector per point");
      const auto ff = *fe.frame;
      pc.run = [ff, a, b, pts, expected] {
        double worst = 0;
        Json out = Json::array();
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const auto br = dislocation::burgers_bracket(ff, a, b, pts[i]);
          worst = std::max(worst, br.discrepancy);
          Json e{{"point", pts[i].to_vector()}, {"bracket", br.component_formula.to_vector()},
                 {"via_torsion", br.contraction_formula.to_vector()}};
          if (br.edge) {
            e["edge"] = br.edge->to_vector();
            e["screw"] = br.screw->to_vector();
          }
          if (!expected.empty())
            worst = std::max(worst, (br.component_formula - expected[i]).norm() / std::max(1.0, expected[i].norm()));
          out.push_back(e);
        }
        return Outcome{worst, Json{{"points", out}}};
      };
    } else if (op == "tube_flux") {
      keys({"coframe", "forms", "lids"});
      set_tol(kRungAligned);
      std::optional<forms::VectorValuedForm> tau;
      if (c.contains("coframe")) {
        const FrameEntry& fe = frame(text(c, "coframe", where), where);
        if (!fe.coframe) throw InputError(where + ": tube_flux needs a coframe");
        tau = dislocation::torsion(*fe.coframe);
      } else {
        std::vector<Form> fs;
        for (const auto& name : need(c, "forms", where)) fs.push_back(smooth_form(name.get<std::string>(), where));
        for (const auto& f : fs)
          if (f.degree() != 2) throw InputError(where + ": flux forms must be 2-forms");
        try {
          tau = forms::VectorValuedForm(fs);
        } catch (const Error& e) {
          throw InputError(where + ": " + e.what());
        }
      }
      std::vector<Chain> lids;
      for (const auto& name : need(c, "lids", where)) {
        lids.push_back(chain(name.get<std::string>(), where));
        if (lids.back().degree() != 2) throw InputError(where + ": lids must be 2-chains");
      }
      if (lids.size() < 2) throw InputError(where + ": need at least two lids");
      pc.run = [this, tau, lids] {
        double worst = 0;
        Json fluxes = Json::array();
        for (std::size_t i = 0; i < lids.size(); ++i)
          for (std::size_t j = i + 1; j < lids.size(); ++j) {
            const auto r = dislocation::tube_flux_check(*tau, lids[i], lids[j], rule());
            for (std::size_t a = 0; a < r.residual.size(); ++a)
              worst = std::max(worst, relative(r.residual[a], std::max(std::abs(r.flux1[a]), std::abs(r.flux2[a])), 1.0));
            if (i == 0) fluxes.push_back(j == 1 ? r.flux1 : r.flux2);
            if (i == 0 && j == 1) fluxes.push_back(r.flux2);
          }
        return Outcome{worst, Json{{"fluxes", fluxes}}};
      };
    } else if (op == "stokes") {
      keys({"form", "chain"});
      set_tol(kRungExact);
      const Form w = smooth_form(text(c, "form", where), where);
      const Chain s = chain(text(c, "chain", where), where);
      if (w.degree() + 1 != s.degree()) throw InputError(where + ": form degree must be chain degree - 1");
      const double fd = settings_.fd_step;
      pc.run = [this, w, s, fd] {
        const Form dw = forms::exterior_derivative(w, w.has_analytic_partials() ? std::nullopt : std::optional(fd));
        const double lhs = integrate_over_chain(s, dw, rule());
        const double rhs = integrate_over_chain(geometry::boundary_chain(s), w, rule());
        return Outcome{relative(std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs)), 1.0),
                       Json{{"interior", lhs}, {"boundary", rhs}}};
      };
    } else {
      throw InputError(where + ": unknown op '" + op + "'");
    }
    return pc;
  }

  /// Largest |component| at 16 deterministic points of the patch.
  double max_on_audit(const Form& f) const {
    double worst = 0;
    for (const auto& x : dislocation::detail::audit_points(patch_, 16))
      for (forms::MultiIndex I : forms::multi_indices(dim(), f.degree()))
        worst = std::max(worst, std::abs(f.component(I)(x)));
    return worst;
  }

  /// Grid cells whose closed box meets one of the given points or segments.
  std::set<std::array<int, 3>> cells_meeting(const std::vector<std::vector<Vec>>& simplices, int res) const {
    std::set<std::array<int, 3>> out;
    const Box& pb = patch_.bounds();
    std::array<int, 3> idx{0, 0, 0};
    for (;;) {
      Vec lo(dim()), hi(dim());
      for (int i = 0; i < dim(); ++i) {
        const double w = pb.extent(i) / res;
        lo[i] = pb.lo()[i] + w * idx[i];
        hi[i] = idx[i] + 1 == res ? pb.hi()[i] : pb.lo()[i] + w * (idx[i] + 1);
      }
      for (const auto& s : simplices) {
        // parametric clip of p0 + t (p1 - p0), t in [0, 1], against the closed cell
        const Vec p0 = s[0], dir = s.size() > 1 ? s[1] - s[0] : Vec(dim());
        double t0 = 0, t1 = 1;
        bool hit = true;
        for (int i = 0; i < dim() && hit; ++i) {
          if (dir[i] == 0) {
            hit = p0[i] >= lo[i] && p0[i] <= hi[i];
          } else {
            double a = (lo[i] - p0[i]) / dir[i], b = (hi[i] - p0[i]) / dir[i];
            if (a > b) std::swap(a, b);
            t0 = std::max(t0, a);
            t1 = std::min(t1, b);
            hit = t0 <= t1;
          }
        }
        if (hit) {
          out.insert(idx);
          break;
        }
      }
      int j = dim() - 1;
      while (j >= 0 && ++idx[j] == res) idx[j--] = 0;
      if (j < 0) break;
    }
    return out;
  }

  Json doc_;
  Settings settings_;
  std::string id_, title_;
  Patch patch_;
  std::map<std::string, LayerForm> forms_;
  std::map<std::string, Chain> chains_;
  std::map<std::string, FrameEntry> frames_;
  std::map<std::string, Current> currents_;
  std::set<std::string> visiting_;
  std::vector<PreparedCheck> checks_;
};

// ---------------------------------------------------------------------------
// reports

inline Json settings_json(const Settings& s) {
  return Json{{"quadrature_order", s.quadrature_order},
              {"fd_step", s.fd_step},
              {"tolerance_scale", s.tolerance_scale},
              {"resolution", s.resolution}};
}

inline Json check_json(const CheckResult& c, bool timing) {
  Json j{{"index", c.index}, {"op", c.op}};
  if (!c.label.empty()) j["label"] = c.label;
  j["expect"] = c.expect;
  j["verdict"] = c.verdict;
  j["residual"] = c.residual;
  j["tolerance"] = c.tolerance;
  j["rung"] = c.rung;
  if (!c.message.empty()) j["message"] = c.message;
  if (timing) j["wall_ms"] = c.wall_ms;
  j["details"] = c.details;
  return j;
}

inline Json report_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c, r.settings.timing));
  return Json{{"schema_version", kSchemaVersion},
              {"scenario", r.scenario},
              {"title", r.title},
              {"settings", settings_json(r.settings)},
              {"overall", r.passed() ? "pass" : "fail"},
              {"checks", checks}};
}

inline std::string report_text(const Report& r) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& c : r.checks) passed += c.verdict == "pass";
  os << "scenario " << r.scenario << " (" << r.title << "): " << (r.passed() ? "PASS" : "FAIL") << " " << passed << "/"
     << r.checks.size() << " checks\n";
  for (const auto& c : r.checks) {
    os << "  [" << c.verdict << "] " << c.index << " " << c.op;
    if (!c.label.empty()) os << " (" << c.label << ")";
    os << "  residual=" << num(c.residual) << "  tolerance=" << num(c.tolerance) << " [" << c.rung << "]";
    if (c.expect == "violated") os << "  expect=violated";
    if (r.settings.timing) os << "  wall_ms=" << num(c.wall_ms);
    if (!c.message.empty()) os << "\n      error: " << c.message;
    os << "\n";
  }
  return os.str();
}

}  // namespace disloc::scenario
