#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <new>
#include <span>
#include <vector>

namespace imc2 {

using NodeId = std::uint32_t;

// Graph concept used by the SCC routines:
//   std::size_t size() const;
//   auto edges(NodeId v) const;   // successor list: size() and operator[](k) -> NodeId
// The successor list is fetched once per visited node and held while the node
// is on the DFS stack, so it should be a cheap view.
template <class G>
concept SuccessorGraph = requires(const G& g, NodeId v, std::size_t k) {
  { g.size() } -> std::convertible_to<std::size_t>;
  { g.edges(v).size() } -> std::convertible_to<std::size_t>;
  { g.edges(v)[k] } -> std::convertible_to<NodeId>;
};

// An SCC "contains an edge" when it has two or more nodes or a self-loop.
template <SuccessorGraph G>
bool is_cyclic_component(const G& g, std::span<const NodeId> members) {
  if (members.size() > 1) return true;
  const NodeId v = members.front();
  const auto out = g.edges(v);
  for (std::size_t k = 0, d = out.size(); k < d; ++k)
    if (out[k] == v) return true;
  return false;
}

// Pearce's space-efficient variant of Tarjan's algorithm with an explicit
// call stack, restricted to the part of g reachable from roots. A single
// rindex array replaces Tarjan's index and lowlink arrays: live nodes hold a
// DFS number, finished nodes a component number counted down from the top
// of the range, so finished nodes never lower a live node's rindex. One
// random access per edge matters on products with millions of nodes.
//
// on_scc receives each component (in reverse topological order) and returns
// true to stop the sweep. Returns true iff the sweep was stopped.
template <SuccessorGraph G, class OnScc>
bool for_each_scc(const G& g, std::span<const NodeId> roots, OnScc&& on_scc) {
  using Edges = decltype(g.edges(NodeId{}));
  struct Frame {
    NodeId node;
    std::uint32_t next;  // low 31 bits: next edge; top bit: v is not a root
    Edges out;
  };
  constexpr std::uint32_t kNotRoot = 1u << 31;
  const std::size_t n = g.size();
  std::vector<std::uint32_t> rindex(n, 0);  // 0 = unvisited
  std::vector<NodeId> pending;              // visited, component not yet reported
  std::vector<Frame> calls;
  std::uint32_t index = 1;
  std::uint32_t component = static_cast<std::uint32_t>(n);  // counts down, never meets index

  auto enter = [&](NodeId v) {
    rindex[v] = index++;
    calls.push_back({v, 0, g.edges(v)});
  };

  for (NodeId root : roots) {
    if (rindex[root] != 0) continue;
    enter(root);
    while (!calls.empty()) {
      Frame& top = calls.back();
      const NodeId v = top.node;
      if ((top.next & ~kNotRoot) < top.out.size()) {
        const NodeId w = top.out[top.next++ & ~kNotRoot];
        if (rindex[w] == 0) {
          enter(w);  // invalidates top
        } else if (rindex[w] < rindex[v]) {
          rindex[v] = rindex[w];
          top.next |= kNotRoot;
        }
        continue;
      }
      const bool is_root = (top.next & kNotRoot) == 0;
      calls.pop_back();
      if (!is_root) {
        pending.push_back(v);
      } else {
        // v's component is v plus the pending suffix numbered at least v;
        // members are renumbered in the same pass.
        const std::uint32_t own = rindex[v];
        std::size_t first = pending.size();
        while (first > 0 && rindex[pending[first - 1]] >= own) rindex[pending[--first]] = component;
        rindex[v] = component--;
        pending.push_back(v);
        std::span<const NodeId> members(pending.data() + first, pending.size() - first);
        index -= static_cast<std::uint32_t>(members.size());
        if (on_scc(members)) return true;
        pending.resize(first);
      }
      if (!calls.empty()) {
        Frame& parent = calls.back();
        if (rindex[v] < rindex[parent.node]) {
          rindex[parent.node] = rindex[v];
          parent.next |= kNotRoot;
        }
      }
    }
  }
  return false;
}

// True iff some cycle reachable from roots passes through a node with
// accepting(v). Couvreur's on-the-fly check: components are merged as back
// edges close cycles, and the search stops as soon as a merged component
// holds an accepting node, so accepted inputs rarely need a full sweep.
template <SuccessorGraph G, class IsAccepting>
bool has_accepting_cycle(const G& g, std::span<const NodeId> roots, IsAccepting&& accepting) {
  using Edges = decltype(g.edges(NodeId{}));
  struct Frame {
    NodeId node;
    std::uint32_t next;
    Edges out;
  };
  struct Root {
    std::uint32_t number;
    bool accepting;
  };
  constexpr std::uint32_t kDone = ~std::uint32_t{0};
  // 0 unvisited, kDone finished. calloc lets large tables start as untouched
  // zero pages, so an early exit does not pay for the whole product.
  const std::unique_ptr<std::uint32_t[], void (*)(void*)> number(
      static_cast<std::uint32_t*>(std::calloc(std::max<std::size_t>(g.size(), 1), sizeof(std::uint32_t))), std::free);
  if (!number) throw std::bad_alloc();
  std::vector<NodeId> active;
  std::vector<Root> components;
  std::vector<Frame> calls;
  std::uint32_t counter = 0;

  auto enter = [&](NodeId v) {
    number[v] = ++counter;
    active.push_back(v);
    components.push_back({counter, static_cast<bool>(accepting(v))});
    calls.push_back({v, 0, g.edges(v)});
  };

  for (NodeId root : roots) {
    if (number[root] != 0) continue;
    enter(root);
    while (!calls.empty()) {
      Frame& top = calls.back();
      const NodeId v = top.node;
      if (top.next < top.out.size()) {
        const NodeId w = top.out[top.next++];
        const std::uint32_t nw = number[w];
        if (nw == 0) {
          enter(w);  // invalidates top
        } else if (nw != kDone) {
          // w is live, so v -> w closes a cycle through every component
          // opened since w's.
          bool merged = false;
          while (components.back().number > nw) {
            merged = merged || components.back().accepting;
            components.pop_back();
          }
          if (merged) components.back().accepting = true;
          if (components.back().accepting) return true;
        }
        continue;
      }
      calls.pop_back();
      if (components.back().number == number[v]) {
        components.pop_back();
        NodeId w;
        do {
          w = active.back();
          active.pop_back();
          number[w] = kDone;
        } while (w != v);
      }
    }
  }
  return false;
}

}  // namespace imc2
