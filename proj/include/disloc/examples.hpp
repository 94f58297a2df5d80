/**
 * @file examples.hpp
 * @brief The builtin example suite run by `disloc examples`.
 */
#pragma once

#include <string>
#include <vector>

namespace disloc::scenario {

struct Example {
  const char* id;
  const char* topic;
  const char* json;
};

// Expected pairings are closed forms in the bump integral I = 256/315 of (1 - t^2)^4:
// form pairing 0.2 * 0.5 * 0.4 * I^2, segment 0.5 * I, weighted segment 2 * 0.5 * I.
inline const std::vector<Example>& builtin_examples() {
  static const std::vector<Example> examples = {
      {"form_current_pairing", "currents: layering form paired with a bump", R"({
  "patch": {"dim": 2, "cube": 1},
  "forms": {"phi": {"degree": 1, "components": [{"index": [1], "field": [[1, 1, 0]]},
                                                 {"index": [2], "field": [[1, 0, 1]]}]}},
  "currents": {"T": {"type": "form", "form": "phi"}},
  "checks": [
    {"op": "evaluate", "current": "T", "expected": 0.026419148400100782,
     "probe": {"center": [0.2, -0.1], "radii": [0.5, 0.4], "index": [2]}}
  ]
})"},
      {"step_layering_current", "currents: piecewise layering splits into regions", R"({
  "patch": {"dim": 2, "cube": 1},
  "forms": {"step": {"builtin": "step_interface", "a": 2}, "dx1": {"builtin": "closed_x1"}},
  "currents": {
    "T": {"type": "form", "form": "step"},
    "lower": {"type": "form", "form": "dx1", "region": {"box": {"lo": [-1, -1], "hi": [1, 0]}}},
    "upper": {"type": "form", "form": "dx1", "region": {"box": {"lo": [-1, 0], "hi": [1, 1]}}},
    "split": {"type": "combination", "terms": [{"weight": 1, "current": "lower"}, {"weight": 2, "current": "upper"}]}
  },
  "checks": [{"op": "equal", "lhs": "T", "rhs": "split"}]
})"},
      {"dirac_current", "currents: point current carrying a vector", R"({
  "patch": {"dim": 2, "cube": 1},
  "currents": {"delta": {"type": "dirac", "point": [0.1, 0.1], "vectors": [[1, 0]]}},
  "checks": [
    {"op": "evaluate", "current": "delta", "expected": 2,
     "probe": {"center": [0.1, 0.1], "radii": [0.3, 0.3], "index": [1], "amplitude": 2}},
    {"op": "support", "current": "delta", "boundary": false, "expect_points": [[0.1, 0.1]]}
  ]
})"},
      {"exterior_derivative_current", "currents: boundary of a smooth layering inside the patch", R"({
  "patch": {"dim": 2, "cube": 1},
  "forms": {
    "phi": {"degree": 1, "components": [{"index": [1], "field": [[1, 1, 1]]}, {"index": [2], "field": [[2, 2, 0]]}]},
    "dphi": {"d": "phi"}
  },
  "currents": {"T": {"type": "form", "form": "phi"}, "TdPhi": {"type": "form", "form": "dphi"}},
  "checks": [
    {"op": "boundary_equals", "current": "T", "expected": "TdPhi", "mode": "weak"},
    {"op": "weak_structural_agreement", "current": "T"}
  ]
})"},
      {"polyhedral_chain_current", "currents: integration over a segment", R"({
  "patch": {"dim": 2, "cube": 1},
  "chains": {"seg": {"simplices": [{"vertices": [[-0.5, 0], [0.5, 0]]}]}},
  "currents": {"T": {"type": "chain", "chain": "seg"}},
  "checks": [
    {"op": "evaluate", "current": "T", "expected": 0.40634920634920635,
     "probe": {"center": [0, 0], "radii": [0.5, 0.5], "index": [1]}}
  ]
})"},
      {"weighted_chain_current", "currents: segment with a smooth weight", R"({
  "patch": {"dim": 2, "cube": 1},
  "chains": {"seg": {"simplices": [{"vertices": [[-0.5, 0], [0.5, 0]]}]}},
  "currents": {"T": {"type": "weighted_chain", "chain": "seg", "weight": [[1, 1, 0], [2, 0, 0]]}},
  "checks": [
    {"op": "evaluate", "current": "T", "expected": 0.8126984126984127,
     "probe": {"center": [0, 0], "radii": [0.5, 0.5], "index": [1]}}
  ]
})"},
      {"coherent_layering_closed", "dislocations: closed layering has no dislocation", R"({
  "patch": {"dim": 3, "cube": 1},
  "forms": {"dx1": {"builtin": "closed_x1"}},
  "currents": {"T": {"type": "form", "form": "dx1"}},
  "checks": [
    {"op": "closed", "current": "T"},
    {"op": "support", "current": "T", "resolution": 4, "expect_empty": true}
  ]
})"},
      {"step_interface_dislocation", "dislocations: step interface between layer spacings", R"({
  "patch": {"dim": 2, "cube": 1},
  "forms": {"step": {"builtin": "step_interface", "a": 2}, "dx1": {"builtin": "closed_x1"}},
  "chains": {"L": {"builtin": "step_interface_line"}},
  "currents": {
    "T": {"type": "form", "form": "step"},
    "TL": {"type": "contraction", "current": "L_current", "form": "dx1"},
    "L_current": {"type": "chain", "chain": "L"}
  },
  "checks": [
    {"op": "boundary_equals", "label": "structural", "current": "T", "expected": "TL"},
    {"op": "boundary_equals", "label": "weak", "current": "T", "expected": "TL", "mode": "weak"},
    {"op": "weak_structural_agreement", "current": "T"},
    {"op": "support", "current": "T", "expect_lines": ["L"]}
  ]
})"},
      {"polyhedral_chain_boundary", "dislocations: boundary of a triangle current", R"({
  "patch": {"dim": 2, "cube": 1},
  "forms": {"w": {"degree": 1, "components": [{"index": [1], "field": [[1, 0, 2]]}, {"index": [2], "field": [[3, 1, 1]]}]}},
  "chains": {
    "tri": {"simplices": [{"vertices": [[-0.6, -0.5], [0.7, -0.4], [0.1, 0.6]]}]},
    "edges": {"boundary_of": "tri"}
  },
  "currents": {"T": {"type": "chain", "chain": "tri"}, "dT": {"type": "chain", "chain": "edges"}},
  "checks": [
    {"op": "boundary_equals", "current": "T", "expected": "dT", "mode": "weak"},
    {"op": "weak_structural_agreement", "current": "T"},
    {"op": "stokes", "form": "w", "chain": "tri"}
  ]
})"},
      {"general_incoherent_interface", "dislocations: layering rescaled inside a region", R"({
  "patch": {"dim": 2, "cube": 1},
  "forms": {"dx1": {"builtin": "closed_x1"}},
  "chains": {"Y": {"box": {"lo": [-0.5, -0.4], "hi": [0.3, 0.5]}}, "Z": {"boundary_of": "Y"}},
  "currents": {
    "inside": {"type": "form", "form": "dx1", "region": {"box": {"lo": [-0.5, -0.4], "hi": [0.3, 0.5]}}},
    "whole": {"type": "form", "form": "dx1"},
    "T": {"type": "combination", "terms": [{"weight": 3, "current": "inside"}, {"weight": 1, "current": "whole"},
                                           {"weight": -1, "current": "inside"}]},
    "Zc": {"type": "chain", "chain": "Z"},
    "ZdotPhi": {"type": "contraction", "current": "Zc", "form": "dx1"},
    "expected": {"type": "combination", "terms": [{"weight": -2, "current": "ZdotPhi"}]}
  },
  "checks": [
    {"op": "boundary_equals", "current": "T", "expected": "expected", "mode": "weak"},
    {"op": "boundary_equals", "current": "T", "expected": "expected", "mode": "structural"}
  ]
})"},
      {"half_plane_in_cube", "dislocations: half plane ending on a line", R"({
  "patch": {"dim": 3, "cube": 1},
  "chains": {
    "H": {"builtin": "half_plane_cube"},
    "edge": {"simplices": [{"vertices": [[0, 0, -1], [0, 0, 1]]}]}
  },
  "currents": {"T": {"type": "chain", "chain": "H"}, "E": {"type": "chain", "chain": "edge"}},
  "checks": [
    {"op": "boundary_equals", "current": "T", "expected": "E"},
    {"op": "weak_structural_agreement", "current": "T"},
    {"op": "nilpotent", "current": "T"},
    {"op": "support", "current": "T", "expect_lines": ["edge"]}
  ]
})"},
      {"weighted_chain_boundary", "dislocations: weighted surface with a varying weight", R"({
  "patch": {"dim": 2, "cube": 1},
  "forms": {"u": {"degree": 0, "components": [{"index": [], "field": [[1, 1, 0], [0.5, 0, 2]]}]}, "du": {"d": "u"}},
  "chains": {"A": {"box": {"lo": [-0.5, -0.5], "hi": [0.5, 0.4]}}, "dA": {"boundary_of": "A"}},
  "currents": {
    "T": {"type": "weighted_chain", "chain": "A", "weight": [[1, 1, 0], [0.5, 0, 2]]},
    "edge": {"type": "weighted_chain", "chain": "dA", "weight": [[1, 1, 0], [0.5, 0, 2]]},
    "Ac": {"type": "chain", "chain": "A"},
    "slope": {"type": "contraction", "current": "Ac", "form": "du"},
    "expected": {"type": "combination", "terms": [{"weight": 1, "current": "edge"}, {"weight": -1, "current": "slope"}]}
  },
  "checks": [
    {"op": "boundary_equals", "current": "T", "expected": "expected", "mode": "weak"},
    {"op": "weak_structural_agreement", "current": "T"}
  ]
})"},
      {"node_of_three_lines", "dislocations: three quarter planes meeting at a node", R"({
  "patch": {"dim": 3, "cube": 1},
  "chains": {
    "planes_fork": {"builtin": "three_quarter_planes", "a": [1, 1, 0]},
    "planes_all": {"builtin": "three_quarter_planes", "a": [1, 1, 1]},
    "L1": {"builtin": "fork_line", "which": "L1"},
    "L2": {"builtin": "fork_line", "which": "L2"},
    "L3": {"builtin": "fork_line", "which": "L3"},
    "L": {"builtin": "fork_line", "which": "L"}
  },
  "currents": {"T_fork": {"type": "chain", "chain": "planes_fork"}, "T_all": {"type": "chain", "chain": "planes_all"}},
  "checks": [
    {"op": "support", "current": "T_fork", "expect_lines": ["L1", "L2"]},
    {"op": "support", "current": "T_all", "expect_lines": ["L1", "L2", "L3", "L"]},
    {"op": "frank_node", "lines": [{"weight": 1, "chain": "L1"}, {"weight": 1, "chain": "L2"}]},
    {"op": "frank_node", "lines": [{"weight": 1, "chain": "L1"}, {"weight": 1, "chain": "L2"},
                                   {"weight": 1, "chain": "L3"}, {"weight": -1, "chain": "L"}]},
    {"op": "frank_node", "label": "fork lines alone", "expect": "violated",
     "lines": [{"weight": 1, "chain": "L1"}, {"weight": 1, "chain": "L2"}, {"weight": 1, "chain": "L3"}]}
  ]
})"},
      {"constancy_on_closed_line", "Frank rules: weight constant along a closed line", R"({
  "patch": {"dim": 2, "cube": 1},
  "chains": {"square": {"box": {"lo": [-0.5, -0.5], "hi": [0.5, 0.5]}}, "loop": {"boundary_of": "square"}},
  "checks": [
    {"op": "frank_constancy", "weight": 3, "chain": "loop"},
    {"op": "frank_constancy", "label": "varying weight", "expect": "violated", "weight": [[1, 1, 0]], "chain": "loop"}
  ]
})"},
      {"constancy_on_submanifold_boundary", "Frank rules: weight constant on a closed surface", R"({
  "patch": {"dim": 3, "cube": 1},
  "chains": {"block": {"box": {"lo": [-0.5, -0.5, -0.5], "hi": [0.5, 0.4, 0.3]}}, "shell": {"boundary_of": "block"}},
  "checks": [
    {"op": "frank_constancy", "weight": -1.5, "chain": "shell"},
    {"op": "frank_constancy", "label": "varying weight", "expect": "violated", "weight": [[1, 1, 0, 0], [1, 0, 1, 0]],
     "chain": "shell"}
  ]
})"},
      {"frank_second_rule", "Frank rules: strengths balance at a node", R"({
  "patch": {"dim": 3, "cube": 1},
  "chains": {
    "in": {"simplices": [{"vertices": [[-1, 0.1, 0], [0, 0, 0]]}]},
    "out_a": {"simplices": [{"vertices": [[0, 0, 0], [1, 1, 0.4]]}]},
    "out_b": {"simplices": [{"vertices": [[0, 0, 0], [0.8, -1, -0.6]]}]}
  },
  "checks": [
    {"op": "frank_node", "lines": [{"weight": 2, "chain": "in"}, {"weight": 1.25, "chain": "out_a"},
                                   {"weight": 0.75, "chain": "out_b"}]},
    {"op": "frank_node", "label": "unbalanced", "expect": "violated",
     "lines": [{"weight": 2, "chain": "in"}, {"weight": 1, "chain": "out_a"}, {"weight": 2, "chain": "out_b"}]}
  ]
})"},
      {"smooth_total_dislocation", "smooth theory: total dislocation through surfaces", R"({
  "patch": {"dim": 3, "cube": 1},
  "forms": {
    "phi": {"degree": 1, "components": [{"index": [1], "field": [[1, 0, 1, 0], [0.3, 0, 0, 2]]},
                                         {"index": [2], "field": [[1, 1, 0, 1]]},
                                         {"index": [3], "field": [[-2, 1, 1, 0]]}]},
    "expected": {"degree": 2, "components": [{"index": [1, 2], "field": [[1, 0, 0, 1], [-1, 0, 0, 0]]},
                                              {"index": [1, 3], "field": [[-0.6, 0, 0, 1], [-2, 0, 1, 0]]},
                                              {"index": [2, 3], "field": [[-2, 1, 0, 0], [-1, 1, 0, 0]]}]}
  },
  "chains": {
    "flat": {"parallelotope": {"origin": [-0.5, -0.5, 0.1], "edges": [[1, 0, 0], [0, 1, 0]]}, "resolution": 2},
    "roof": {"simplices": [
      {"vertices": [[0, 0, 0.8], [-0.5, -0.5, 0.1], [0.5, -0.5, 0.1], [0.5, 0.5, 0.1]]},
      {"vertices": [[0, 0, 0.8], [-0.5, -0.5, 0.1], [0.5, 0.5, 0.1], [-0.5, 0.5, 0.1]]}
    ]},
    "basin": {"simplices": [
      {"vertices": [[0.1, -0.2, -0.6], [-0.5, -0.5, 0.1], [0.5, -0.5, 0.1], [0.5, 0.5, 0.1]]},
      {"vertices": [[0.1, -0.2, -0.6], [-0.5, -0.5, 0.1], [0.5, 0.5, 0.1], [-0.5, 0.5, 0.1]]}
    ]},
    "roof_shell": {"boundary_of": "roof"},
    "basin_shell": {"boundary_of": "basin"},
    "over": {"sum": [{"weight": 1, "chain": "flat"}, {"weight": 1, "chain": "roof_shell"}]},
    "under": {"sum": [{"weight": 1, "chain": "flat"}, {"weight": -1, "chain": "basin_shell"}]},
    "tilted": {"parallelotope": {"origin": [-0.6, -0.4, -0.5], "edges": [[1, 0.2, 0.4], [0.1, 0.9, 0.8]]}}
  },
  "checks": [
    {"op": "dislocation_density", "form": "phi", "expected": "expected"},
    {"op": "total_dislocation", "label": "three surfaces on one loop", "form": "phi", "chains": ["flat", "over", "under"]},
    {"op": "total_dislocation", "form": "phi", "chains": ["tilted"]}
  ]
})"},
      {"torsion_and_burgers", "smooth theory: torsion of a coframe and the Burgers bracket", R"({
  "patch": {"dim": 3, "cube": 1},
  "forms": {
    "zero": {"degree": 2, "components": []},
    "tau2": {"degree": 2, "components": [{"index": [1, 3], "field": 1}]}
  },
  "frames": {
    "coframe": {"kind": "coframe", "entries": [[1, 0, 0], [0, 1, [[1, 1, 0, 0]]], [0, 0, 1]]},
    "frame": {"kind": "frame", "entries": [[1, 0, 0], [0, 1, [[-1, 1, 0, 0]]], [0, 0, 1]]}
  },
  "checks": [
    {"op": "torsion", "coframe": "coframe", "expected": ["zero", "tau2", "zero"]},
    {"op": "burgers_bracket", "frame": "frame", "alpha": 1, "beta": 3,
     "points": [[0.2, 0.1, 0.3], [-0.5, 0.4, 0.1]], "expected": [[0, -1, 0], [0, -1, 0]]},
    {"op": "burgers_bracket", "frame": "frame", "alpha": 1, "beta": 2, "points": [[0.3, -0.2, 0.6]],
     "expected": [[0, 0, 0]]}
  ]
})"},
      {"tube_flux", "smooth theory: torsion flux through two lids of a tube", R"({
  "patch": {"dim": 3, "cube": 1},
  "frames": {"coframe": {"kind": "coframe", "entries": [[1, 0, 0], [[[1, 0, 0, 1]], 1, 0], [0, 0, 1]]}},
  "chains": {
    "flat": {"parallelotope": {"origin": [-0.5, 0, -0.5], "edges": [[1, 0, 0], [0, 0, 1]]}},
    "cap": {"simplices": [
      {"vertices": [[0, 0.5, 0], [-0.5, 0, -0.5], [0.5, 0, -0.5], [0.5, 0, 0.5]]},
      {"vertices": [[0, 0.5, 0], [-0.5, 0, -0.5], [0.5, 0, 0.5], [-0.5, 0, 0.5]]}
    ]},
    "cap_shell": {"boundary_of": "cap"},
    "dome": {"sum": [{"weight": 1, "chain": "flat"}, {"weight": 1, "chain": "cap_shell"}]}
  },
  "checks": [{"op": "tube_flux", "coframe": "coframe", "lids": ["flat", "dome"]}]
})"},
  };
  return examples;
}

}  // namespace disloc::scenario
