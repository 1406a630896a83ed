#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "qforms/form.hpp"
#include "qforms/represent.hpp"

namespace qforms {

/// All Gram matrices [[A, b], [b^T, t]] with integer border b and positive
/// determinant, i.e. b^T adj(A) b < t det(A).
std::vector<QuadraticForm> escalations(const QuadraticForm& q, int64_t t);

/// Same forms one at a time; emit(QuadraticForm&&) may return false to stop.
/// Returns false iff stopped early.
template <class Emit>
bool for_each_escalation(const QuadraticForm& q, int64_t t, Emit&& emit) {
  if (t <= 0) throw std::invalid_argument("escalation norm must be positive");
  const int n = q.dim();
  auto build = [&](const int64_t* b) {
    IntMatrix g(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) = q.entry(i, j);
      g(i, n) = g(n, i) = b[i];
    }
    g(n, n) = t;
    if constexpr (std::is_same_v<std::invoke_result_t<Emit&, QuadraticForm&&>, bool>) {
      return emit(QuadraticForm(std::move(g)));
    } else {
      emit(QuadraticForm(std::move(g)));
      return true;
    }
  };
  if (n == 0) return build(nullptr);
  const i128 bound = static_cast<i128>(t) * q.determinant() - 1;
  if (bound < 0) return true;
  return for_each_vector(q.gram().adjugate(), narrow(bound), [&](int64_t, const int64_t* b) { return build(b); });
}

/// One representative per equivalence class (the first member met), sorted
/// by flattened Gram matrix.
std::vector<QuadraticForm> dedup(const std::vector<QuadraticForm>& forms);

enum class NodeStatus { Escalated, Candidate, Pruned, Leaf };
std::string to_string(NodeStatus s);

struct EscalationNode {
  QuadraticForm form;
  ExceptionTarget target;
  std::optional<int64_t> truant;  // nullopt: nothing missing up to the cap
  int parent = -1;                // index into the tree's node list
  int depth = 0;                  // = form.dim()
  NodeStatus status = NodeStatus::Leaf;
};

struct EscalatorOptions {
  int max_dim = 4;
  int64_t truant_cap = kDefaultTruantCap;
  /// Drop escalations that represent an element of the target.
  bool prune_represented = true;
  /// Compute truants of the nodes at max_dim as well.
  bool truants_at_max_dim = true;
  int threads = 1;
};

struct EscalatorTree {
  ExceptionTarget target;
  std::vector<EscalationNode> nodes;
  /// raw (pre-dedup) escalation count per dimension
  std::vector<size_t> raw_counts;
  /// node indices per dimension, excluding pruned ones
  std::vector<std::vector<int>> levels;

  [[nodiscard]] std::vector<QuadraticForm> forms_at(int dim) const;
};

EscalatorTree escalate_tree(const ExceptionTarget& s, const EscalatorOptions& options = {});

/// One JSON object per node.
std::vector<nlohmann::json> tree_json_lines(const EscalatorTree& tree);

}  // namespace qforms
