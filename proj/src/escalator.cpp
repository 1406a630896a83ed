#include "qforms/escalator.hpp"

#include <algorithm>
#include <map>

#include "qforms/parallel.hpp"

namespace qforms {

std::vector<QuadraticForm> escalations(const QuadraticForm& q, int64_t t) {
  std::vector<QuadraticForm> out;
  for_each_escalation(q, t, [&](QuadraticForm&& f) { out.push_back(std::move(f)); });
  return out;
}

namespace {

struct ClassKey {
  int64_t det;
  std::vector<int64_t> theta;
  auto operator<=>(const ClassKey&) const = default;
};

constexpr int64_t kKeyThetaBound = 24;

ClassKey key_of(const QuadraticForm& q) {
  return {q.determinant(), theta_coefficients(q, kKeyThetaBound)};
}

}  // namespace

std::vector<QuadraticForm> dedup(const std::vector<QuadraticForm>& forms) {
  std::map<ClassKey, std::vector<size_t>> buckets;
  std::vector<QuadraticForm> reps;
  for (const auto& q : forms) {
    auto& bucket = buckets[key_of(q)];
    bool seen = false;
    for (size_t idx : bucket) {
      if (is_equivalent(reps[idx], q)) {
        seen = true;
        break;
      }
    }
    if (!seen) {
      bucket.push_back(reps.size());
      reps.push_back(q);
    }
  }
  std::sort(reps.begin(), reps.end());
  return reps;
}

std::string to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Escalated: return "escalated";
    case NodeStatus::Candidate: return "candidate";
    case NodeStatus::Pruned: return "pruned";
    case NodeStatus::Leaf: return "leaf";
  }
  return "unknown";
}

std::vector<QuadraticForm> EscalatorTree::forms_at(int dim) const {
  std::vector<QuadraticForm> out;
  if (dim < static_cast<int>(levels.size()))
    for (int idx : levels[dim]) out.push_back(nodes[idx].form);
  return out;
}

EscalatorTree escalate_tree(const ExceptionTarget& s, const EscalatorOptions& options) {
  if (options.max_dim > kMaxFormDim) throw std::invalid_argument("escalation beyond dimension 6");
  EscalatorTree tree;
  tree.target = s;
  tree.raw_counts.assign(options.max_dim + 1, 0);
  tree.levels.assign(options.max_dim + 1, {});
  EscalationNode root;
  root.target = s;
  tree.nodes.push_back(root);
  tree.levels[0].push_back(0);
  tree.raw_counts[0] = 1;

  for (int dim = 0; dim <= options.max_dim; ++dim) {
    auto& level_nodes = tree.levels[dim];
    if (dim == options.max_dim && !options.truants_at_max_dim) break;
    parallel_for(level_nodes.size(), options.threads, [&](size_t i) {
      EscalationNode& node = tree.nodes[level_nodes[i]];
      node.truant = truant(node.form, s, options.truant_cap);
    });
    for (int idx : level_nodes) {
      EscalationNode& node = tree.nodes[idx];
      node.status = node.truant ? NodeStatus::Leaf : NodeStatus::Candidate;
    }
    if (dim == options.max_dim) break;

    // escalate every node with a truant, then prune and dedup the level
    struct Child {
      QuadraticForm form;
      int parent;
      bool pruned;
    };
    std::vector<std::vector<Child>> per_parent(level_nodes.size());
    parallel_for(level_nodes.size(), options.threads, [&](size_t i) {
      const EscalationNode& node = tree.nodes[level_nodes[i]];
      if (!node.truant) return;
      for (auto& f : escalations(node.form, *node.truant)) {
        bool pruned = false;
        if (options.prune_represented)
          for (int64_t m : s.values())
            if (is_represented(f, m)) {
              pruned = true;
              break;
            }
        per_parent[i].push_back({std::move(f), level_nodes[i], pruned});
      }
    });
    std::vector<Child> survivors;
    for (size_t i = 0; i < level_nodes.size(); ++i) {
      if (tree.nodes[level_nodes[i]].truant) tree.nodes[level_nodes[i]].status = NodeStatus::Escalated;
      for (auto& c : per_parent[i]) {
        ++tree.raw_counts[dim + 1];
        if (c.pruned) {
          EscalationNode pn;
          pn.form = c.form;
          pn.target = s;
          pn.parent = c.parent;
          pn.depth = dim + 1;
          pn.status = NodeStatus::Pruned;
          tree.nodes.push_back(std::move(pn));
        } else {
          survivors.push_back(std::move(c));
        }
      }
    }
    // dedup, keeping the first member of each class as the node
    std::map<ClassKey, std::vector<int>> buckets;
    std::vector<int> next;
    std::vector<ClassKey> keys(survivors.size());
    parallel_for(survivors.size(), options.threads, [&](size_t i) { keys[i] = key_of(survivors[i].form); });
    for (size_t i = 0; i < survivors.size(); ++i) {
      auto& bucket = buckets[keys[i]];
      bool seen = false;
      for (int idx : bucket)
        if (is_equivalent(tree.nodes[idx].form, survivors[i].form)) {
          seen = true;
          break;
        }
      if (seen) continue;
      EscalationNode nn;
      nn.form = survivors[i].form;
      nn.target = s;
      nn.parent = survivors[i].parent;
      nn.depth = dim + 1;
      tree.nodes.push_back(std::move(nn));
      int idx = static_cast<int>(tree.nodes.size()) - 1;
      bucket.push_back(idx);
      next.push_back(idx);
    }
    std::sort(next.begin(), next.end(), [&](int a, int b) { return tree.nodes[a].form < tree.nodes[b].form; });
    tree.levels[dim + 1] = std::move(next);
  }
  return tree;
}

std::vector<nlohmann::json> tree_json_lines(const EscalatorTree& tree) {
  std::vector<nlohmann::json> out;
  out.reserve(tree.nodes.size());
  for (size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& n = tree.nodes[i];
    nlohmann::json j;
    j["index"] = i;
    j["dim"] = n.depth;
    j["gram"] = n.form.gram().to_rows();
    j["target"] = n.target.values();
    j["truant"] = n.truant ? nlohmann::json(*n.truant) : nlohmann::json(nullptr);
    j["parent"] = n.parent;
    j["status"] = to_string(n.status);
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace qforms
