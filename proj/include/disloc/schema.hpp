/**
 * @file schema.hpp
 * @brief Machine-readable description of the scenario format, printed by `disloc schema`.
 */
#pragma once

#include "disloc/scenario.hpp"

namespace disloc::scenario {

inline const std::vector<std::string>& current_types() {
  static const std::vector<std::string> v = {"form", "chain", "weighted_chain", "dirac", "contraction", "combination",
                                             "boundary"};
  return v;
}

inline const std::vector<std::string>& check_ops() {
  static const std::vector<std::string> v = {"evaluate",          "equal",          "boundary_equals",
                                             "weak_structural_agreement",       "closed",
                                             "nilpotent",         "support",        "frank_node",
                                             "frank_constancy",   "total_dislocation", "dislocation_density",
                                             "torsion",           "burgers_bracket", "tube_flux",
                                             "stokes"};
  return v;
}

inline Json schema_json() {
  const Json field = "number, or list of polynomial terms [coeff, e1, ..., en]";
  const Json box = Json{{"lo", "n numbers"}, {"hi", "n numbers"}};
  const Json probes =
      "optional: {grid: g, amplitude: a} for every basis bump on a g^n cell grid (default g = 3), "
      "or an explicit list of probes";
  const Json probe = Json{{"center", "n numbers"},
                          {"radii", "n numbers, support must lie strictly inside the patch"},
                          {"index", "1-based axes of the basis form, strictly increasing"},
                          {"amplitude", "number, default 1"},
                          {"m", "bump power, default 4"}};
  Json currents{
      {"form", {{"form", "form name"}, {"region", "\"patch\" | {box} | {chain: name}"}, {"resolution", "integer"}}},
      {"chain", {{"chain", "chain name"}}},
      {"weighted_chain", {{"chain", "chain name"}, {"weight", field}}},
      {"dirac", {{"point", "n numbers"}, {"vectors", "list of n-vectors"}}},
      {"contraction", {{"current", "current name"}, {"form", "smooth form name"}}},
      {"combination", {{"terms", "list of {weight, current}"}, {"degree", "integer, required when terms is empty"}}},
      {"boundary", {{"current", "current name"}, {"mode", "auto | weak | structural (default auto)"}}}};
  Json checks{
      {"evaluate", {{"current", "name"}, {"probe", probe}, {"expected", "number"}}},
      {"equal", {{"lhs", "name"}, {"rhs", "name"}, {"probes", probes}}},
      {"boundary_equals",
       {{"current", "name"}, {"expected", "name"}, {"mode", "auto | weak | structural"}, {"probes", probes}}},
      {"weak_structural_agreement", {{"current", "name"}, {"probes", probes}}},
      {"closed", {{"current", "name"}, {"probes", probes}}},
      {"nilpotent", {{"current", "name of a current of degree >= 2"}, {"probes", probes}}},
      {"support",
       {{"current", "name"},
        {"boundary", "bool, default true: locate the support of the boundary"},
        {"resolution", "cells per axis, default from --resolution"},
        {"amplitude", "probe amplitude"},
        {"expect_lines", "chain names of 0- or 1-chains"},
        {"expect_points", "list of points"},
        {"expect_empty", "true"}}},
      {"frank_node", {{"lines", "list of {weight, chain}"}, {"probes", probes}}},
      {"frank_constancy",
       {{"weight", field}, {"chain", "name"}, {"allow_boundary", "bool"}, {"probes", probes}}},
      {"total_dislocation", {{"form", "1-form name"}, {"chains", "2-chain names"}}},
      {"dislocation_density", {{"form", "1-form name"}, {"expected", "optional 2-form name, default zero"}}},
      {"torsion", {{"coframe", "frame name"}, {"expected", "optional list of n 2-form names, default zero"}}},
      {"burgers_bracket",
       {{"frame", "frame name"}, {"alpha", "1-based"}, {"beta", "1-based"}, {"points", "list of points"},
        {"expected", "optional list of vectors"}}},
      {"tube_flux", {{"coframe", "frame name"}, {"forms", "alternatively, 2-form names"}, {"lids", "2-chain names"}}},
      {"stokes", {{"form", "name"}, {"chain", "name"}}}};
  return Json{
      {"schema_version", kSchemaVersion},
      {"scenario",
       {{"id", "string, optional"},
        {"title", "string, optional"},
        {"description", "string, optional"},
        {"patch", {{"dim", "2 or 3"}, {"lo", "n numbers"}, {"hi", "n numbers"}, {"cube", "half width h for (-h, h)^n"}}},
        {"forms",
         {{"components", {{"degree", "integer"}, {"components", "list of {index, field}"}}},
          {"builtin", "step_interface {a} | closed_x1"},
          {"d", "form name"},
          {"piecewise", "list of {region: {box} | {half_space: {axis, offset, side}}, form}"}}},
        {"chains",
         {{"simplices", "list of {vertices, coefficient}"},
          {"box", box},
          {"parallelotope", "{origin, edges}, with optional resolution"},
          {"builtin", "half_plane_cube | three_quarter_planes {a} | quarter_plane {which} | fork_line {which} | "
                      "step_interface_line"},
          {"boundary_of", "chain name"},
          {"sum", "list of {weight, chain}"}}},
        {"frames", {{"kind", "frame | coframe"}, {"entries", "n x n fields; frame entries[i][alpha], coframe entries[alpha][i]"}}},
        {"currents", currents},
        {"checks",
         {{"common", {{"op", "string"}, {"label", "string"}, {"expect", "holds | violated"}, {"tolerance", "number"}}},
          {"ops", checks}}}}},
      {"field", field},
      {"rungs",
       {{kRungExact.name, kRungExact.value},
        {kRungZero.name, kRungZero.value},
        {kRungAligned.name, kRungAligned.value},
        {kRungBracket.name, kRungBracket.value},
        {kRungFd.name, kRungFd.value}}},
      {"report",
       {{"schema_version", kSchemaVersion},
        {"scenario", "string"},
        {"title", "string"},
        {"settings", "{quadrature_order, fd_step, tolerance_scale, resolution}"},
        {"overall", "pass | fail"},
        {"checks", "list of {index, op, label, expect, verdict, residual, tolerance, rung, message, wall_ms, details}"}}},
      {"exit_codes", {{"0", "all checks pass"}, {"1", "a check failed"}, {"2", "input error"}}}};
}

}  // namespace disloc::scenario
