#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

namespace conetree {

using Label = std::size_t;

/// Square matrix of nonnegative integers; entry (p, q) is the number of
/// label-q children below a label-p vertex.
class SubstitutionMatrix {
public:
    /// Throws InvalidArgument unless `rows` is square, nonnegative and every
    /// row has a positive entry.
    explicit SubstitutionMatrix(std::vector<std::vector<std::int64_t>> rows);

    std::size_t size() const noexcept { return size_; }
    std::int64_t operator()(Label p, Label q) const { return entries_[p * size_ + q]; }
    std::int64_t children_of(Label p) const;

    bool operator==(const SubstitutionMatrix&) const = default;

private:
    std::size_t size_ = 0;
    std::vector<std::int64_t> entries_;
};

/// The (L+1)x(L+1) matrix of the K,L family: a label-0 vertex has K label-0
/// children and one label-1 child, label p < L has one child p+1, label L has
/// one child 0.
SubstitutionMatrix make_kl_matrix(int K, int L);

struct TreeNode {
    std::size_t id = 0;
    Label label = 0;
    std::optional<std::size_t> parent;
    int generation = 1;
    std::size_t first_child = 0;
    std::size_t child_count = 0;
};

/// Finite rooted tree of finite cone type, truncated after `depth`
/// generations.  Nodes are stored breadth first, so the children of a node
/// occupy a contiguous id range and every parent id is smaller than its
/// children's ids.
class TruncatedTree {
public:
    TruncatedTree(Label root_label, int depth, std::vector<TreeNode> nodes);

    Label root_label() const noexcept { return root_label_; }
    int depth() const noexcept { return depth_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const TreeNode& node(std::size_t id) const { return nodes_.at(id); }
    std::span<const TreeNode> nodes() const noexcept { return nodes_; }

    nlohmann::json to_json() const;

private:
    Label root_label_;
    int depth_;
    std::vector<TreeNode> nodes_;
};

inline constexpr std::size_t kDefaultNodeCap = 10'000'000;

TruncatedTree build_tree(const SubstitutionMatrix& S, Label root_label, int depth,
                         std::size_t node_cap = kDefaultNodeCap);

/// Number of nodes in each generation, root generation first.
std::vector<std::size_t> generation_counts(const TruncatedTree& tree);

}  // namespace conetree
