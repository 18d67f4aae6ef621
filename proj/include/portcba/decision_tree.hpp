#pragma once

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "portcba/calibration.hpp"
#include "portcba/factors.hpp"
#include "portcba/scenario_analysis.hpp"

namespace portcba::dt {

enum class NodeKind { decision, chance, terminal };

// A conventional decision/chance/terminal tree. Chance edges carry
// probabilities summing to 1; decision edges carry option labels; terminals
// carry the cost booked when the year ends there, plus the expected number
// of lorries that end there (the calibrated target).
struct TreeNode {
  NodeKind kind = NodeKind::terminal;
  std::string label;

  struct Edge {
    double probability = 0.0;  // chance edges only
    std::string choice;        // decision edges only
    std::unique_ptr<TreeNode> child;
  };
  std::vector<Edge> edges;

  double terminal_value = 0.0;     // pounds
  double expected_lorries = 0.0;   // terminals only
};

inline std::unique_ptr<TreeNode> make_terminal(std::string label, double value,
                                               double expected_lorries) {
  auto n = std::make_unique<TreeNode>();
  n->kind = NodeKind::terminal;
  n->label = std::move(label);
  n->terminal_value = value;
  n->expected_lorries = expected_lorries;
  return n;
}

inline std::unique_ptr<TreeNode> make_chance(std::string label) {
  auto n = std::make_unique<TreeNode>();
  n->kind = NodeKind::chance;
  n->label = std::move(label);
  return n;
}

namespace detail {

inline std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+g%%", v * 100.0);
  return buf;
}

// Outcome subtree of one scenario: France check, then the UK shed, then the
// UK berth, then whether an undetected lorry was carrying. The volume and the
// option's yearly cost are folded into the terminal values, so a plain
// probability-weighted rollback of this subtree yields the scenario cost.
inline std::unique_ptr<TreeNode> make_outcome_subtree(const Scenario& s,
                                                      const BaselineCounts& baseline,
                                                      const CostModel& costs,
                                                      double option_cost_pounds) {
  CalibratedRouting routing;
  try {
    routing = calibrate_routing(s, baseline);
  } catch (const CalibrationError& e) {
    throw CalibrationError("scenario (tg=" + pct(s.tg) + ", cg=" + pct(s.cg) +
                           ", sg=" + pct(s.sg) + "): " + e.what());
  }

  const double n = routing.n_lorries;
  const double miss_value =
      option_cost_pounds + n * costs.cost_per_missed_lorry().pounds();

  auto undetected = make_chance("undetected lorry carrying?");
  undetected->edges.push_back({routing.p_missed_given_undetected, "",
                               make_terminal("missed", miss_value, routing.targets.missed)});
  undetected->edges.push_back(
      {1.0 - routing.p_missed_given_undetected, "",
       make_terminal("negative through", option_cost_pounds,
                     n * (1.0 - routing.p_found_france) *
                         (1.0 - routing.p_found_shed_given_past_france) *
                         (1.0 - routing.p_found_berth_given_past_shed) *
                         (1.0 - routing.p_missed_given_undetected))});

  auto berth = make_chance("uk berth check");
  berth->edges.push_back({routing.p_found_berth_given_past_shed, "",
                          make_terminal("found uk berth", option_cost_pounds,
                                        routing.targets.berth)});
  berth->edges.push_back({1.0 - routing.p_found_berth_given_past_shed, "", std::move(undetected)});

  auto shed = make_chance("uk shed check");
  shed->edges.push_back({routing.p_found_shed_given_past_france, "",
                         make_terminal("found uk shed", option_cost_pounds,
                                       routing.targets.shed)});
  shed->edges.push_back({1.0 - routing.p_found_shed_given_past_france, "", std::move(berth)});

  auto france = make_chance("france check");
  france->edges.push_back({routing.p_found_france, "",
                           make_terminal("found france", option_cost_pounds,
                                         routing.targets.france)});
  france->edges.push_back({1.0 - routing.p_found_france, "", std::move(shed)});
  return france;
}

}  // namespace detail

enum class ChanceOrder { tg_then_cg, cg_then_tg };

/// Decision node over the search options; beneath each, chance layers over
/// traffic growth and clandestine growth, then the per-scenario outcome
/// subtree with calibrated branch probabilities.
inline std::unique_ptr<TreeNode> build_tree(const ScenarioFactorGrid& grid,
                                            const BaselineCounts& baseline,
                                            const CostModel& costs,
                                            ChanceOrder order = ChanceOrder::tg_then_cg) {
  grid.validate();
  baseline.validate();

  const auto& outer =
      order == ChanceOrder::tg_then_cg ? grid.traffic_growth : grid.clandestine_growth;
  const auto& inner =
      order == ChanceOrder::tg_then_cg ? grid.clandestine_growth : grid.traffic_growth;
  const char* outer_name = order == ChanceOrder::tg_then_cg ? "traffic growth" : "clandestine growth";
  const char* inner_name = order == ChanceOrder::tg_then_cg ? "clandestine growth" : "traffic growth";

  auto root = std::make_unique<TreeNode>();
  root->kind = NodeKind::decision;
  root->label = "search growth";

  for (const auto& opt : grid.search_growth) {
    auto outer_node = make_chance(outer_name);
    for (const auto& lo : outer) {
      auto inner_node = make_chance(inner_name);
      for (const auto& li : inner) {
        Scenario s;
        s.sg = opt.growth;
        s.tg = order == ChanceOrder::tg_then_cg ? lo.value : li.value;
        s.cg = order == ChanceOrder::tg_then_cg ? li.value : lo.value;
        inner_node->edges.push_back(
            {li.probability, "",
             detail::make_outcome_subtree(s, baseline, costs, opt.annual_cost.pounds())});
      }
      outer_node->edges.push_back({lo.probability, "", std::move(inner_node)});
    }
    root->edges.push_back({0.0, "sg " + detail::pct(opt.growth), std::move(outer_node)});
  }
  return root;
}

struct Rollback {
  double value = 0.0;  // root expectation; at a decision node, the minimum
  std::vector<std::pair<std::string, double>> per_option;  // root decision children
};

inline double rollback_value(const TreeNode& node) {
  switch (node.kind) {
    case NodeKind::terminal:
      if (!node.edges.empty()) throw StructureError("terminal node has children");
      return node.terminal_value;
    case NodeKind::chance: {
      if (node.edges.empty()) throw StructureError("chance node '" + node.label + "' has no children");
      double sum_p = 0.0, value = 0.0;
      for (const auto& e : node.edges) {
        if (!e.child) throw StructureError("chance edge without child");
        sum_p += e.probability;
        value += e.probability * rollback_value(*e.child);
      }
      if (std::abs(sum_p - 1.0) > 1e-9)
        throw StructureError("chance node '" + node.label + "' probabilities sum to " +
                             portcba::detail::fmt(sum_p));
      return value;
    }
    case NodeKind::decision: {
      if (node.edges.empty()) throw StructureError("decision node has no options");
      double best = 0.0;
      bool first = true;
      for (const auto& e : node.edges) {
        if (!e.child) throw StructureError("decision edge without child");
        const double v = rollback_value(*e.child);
        if (first || v < best) best = v;  // ties keep the earlier (cheaper) option
        first = false;
      }
      return best;
    }
  }
  throw StructureError("unknown node kind");
}

/// Expected cost of the best option, plus the expectation of every option at
/// the root decision.
inline Rollback rollback(const TreeNode& root) {
  Rollback out;
  if (root.kind == NodeKind::decision) {
    bool first = true;
    for (const auto& e : root.edges) {
      if (!e.child) throw StructureError("decision edge without child");
      const double v = rollback_value(*e.child);
      out.per_option.emplace_back(e.choice, v);
      if (first || v < out.value) out.value = v;
      first = false;
    }
    if (first) throw StructureError("decision node has no options");
  } else {
    out.value = rollback_value(root);
  }
  return out;
}

struct EndCounts {
  double france = 0.0;
  double shed = 0.0;
  double berth = 0.0;
  double missed = 0.0;

  double uk_total() const { return shed + berth; }
};

/// Expected exit counts of one scenario, from the chained calibrated
/// probabilities.
inline EndCounts end_counts(const Scenario& s, const BaselineCounts& baseline) {
  const CalibratedRouting routing = calibrate_routing(s, baseline);
  const double n = routing.n_lorries;
  EndCounts out;
  out.france = n * routing.p_found_france;
  double remaining = n - out.france;
  out.shed = remaining * routing.p_found_shed_given_past_france;
  remaining -= out.shed;
  out.berth = remaining * routing.p_found_berth_given_past_shed;
  remaining -= out.berth;
  out.missed = remaining * routing.p_missed_given_undetected;
  return out;
}

inline void indented_text(const TreeNode& node, std::string& out, int depth) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  char buf[64];
  switch (node.kind) {
    case NodeKind::decision:
      out += "[decide] " + node.label + "\n";
      break;
    case NodeKind::chance:
      out += "[chance] " + node.label + "\n";
      break;
    case NodeKind::terminal:
      std::snprintf(buf, sizeof buf, " value=%.2f lorries=%.2f", node.terminal_value,
                    node.expected_lorries);
      out += "[end] " + node.label + buf + "\n";
      break;
  }
  for (const auto& e : node.edges) {
    out.append(static_cast<std::size_t>(depth) * 2 + 2, ' ');
    if (node.kind == NodeKind::decision) {
      out += "option: " + e.choice + "\n";
    } else {
      std::snprintf(buf, sizeof buf, "p=%.9f", e.probability);
      out += buf;
      out += "\n";
    }
    indented_text(*e.child, out, depth + 2);
  }
}

inline std::string to_indented_text(const TreeNode& root) {
  std::string out;
  indented_text(root, out, 0);
  return out;
}

namespace detail {
inline void graph_nodes(const TreeNode& node, std::string& out, int& counter, int id) {
  char buf[160];
  const char* shape = node.kind == NodeKind::decision ? "box"
                      : node.kind == NodeKind::chance ? "ellipse"
                                                      : "plaintext";
  if (node.kind == NodeKind::terminal) {
    std::snprintf(buf, sizeof buf, "  n%d [shape=%s, label=\"%s\\n%.2f\"];\n", id, shape,
                  node.label.c_str(), node.terminal_value);
  } else {
    std::snprintf(buf, sizeof buf, "  n%d [shape=%s, label=\"%s\"];\n", id, shape,
                  node.label.c_str());
  }
  out += buf;
  for (const auto& e : node.edges) {
    const int child = ++counter;
    if (node.kind == NodeKind::decision) {
      std::snprintf(buf, sizeof buf, "  n%d -> n%d [label=\"%s\"];\n", id, child,
                    e.choice.c_str());
    } else {
      std::snprintf(buf, sizeof buf, "  n%d -> n%d [label=\"%.6g\"];\n", id, child,
                    e.probability);
    }
    out += buf;
    graph_nodes(*e.child, out, counter, child);
  }
}
}  // namespace detail

// Graphviz-style description; pairs with the indented export for docs.
inline std::string to_graph_description(const TreeNode& root) {
  std::string out = "digraph decision_tree {\n  rankdir=LR;\n";
  int counter = 0;
  detail::graph_nodes(root, out, counter, 0);
  out += "}\n";
  return out;
}

}  // namespace portcba::dt
