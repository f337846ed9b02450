#include "conetree/tree.hpp"

#include <string>

#include "conetree/errors.hpp"

namespace conetree {

SubstitutionMatrix::SubstitutionMatrix(std::vector<std::vector<std::int64_t>> rows)
    : size_(rows.size()) {
    if (size_ == 0) throw InvalidArgument("substitution matrix must be nonempty");
    entries_.reserve(size_ * size_);
    for (std::size_t p = 0; p < size_; ++p) {
        if (rows[p].size() != size_)
            throw InvalidArgument("substitution matrix must be square");
        bool has_child = false;
        for (auto v : rows[p]) {
            if (v < 0) throw InvalidArgument("substitution matrix entries must be >= 0");
            has_child = has_child || v > 0;
            entries_.push_back(v);
        }
        if (!has_child)
            throw InvalidArgument("row " + std::to_string(p) +
                                  " of the substitution matrix has no children");
    }
}

std::int64_t SubstitutionMatrix::children_of(Label p) const {
    std::int64_t total = 0;
    for (std::size_t q = 0; q < size_; ++q) total += (*this)(p, q);
    return total;
}

SubstitutionMatrix make_kl_matrix(int K, int L) {
    if (K < 1 || L < 1) throw InvalidArgument("K and L must both be >= 1");
    const auto n = static_cast<std::size_t>(L) + 1;
    std::vector<std::vector<std::int64_t>> rows(n, std::vector<std::int64_t>(n, 0));
    rows[0][0] = K;
    for (std::size_t p = 0; p + 1 < n; ++p) rows[p][p + 1] = 1;
    rows[n - 1][0] = 1;
    return SubstitutionMatrix(std::move(rows));
}

TruncatedTree::TruncatedTree(Label root_label, int depth, std::vector<TreeNode> nodes)
    : root_label_(root_label), depth_(depth), nodes_(std::move(nodes)) {}

nlohmann::json TruncatedTree::to_json() const {
    nlohmann::json out;
    out["root_label"] = root_label_;
    out["depth"] = depth_;
    auto& arr = out["nodes"] = nlohmann::json::array();
    for (const auto& n : nodes_) {
        arr.push_back({{"id", n.id},
                       {"label", n.label},
                       {"parent", n.parent ? nlohmann::json(*n.parent) : nlohmann::json()},
                       {"gen", n.generation}});
    }
    return out;
}

TruncatedTree build_tree(const SubstitutionMatrix& S, Label root_label, int depth,
                         std::size_t node_cap) {
    if (root_label >= S.size()) throw InvalidArgument("root label out of range");
    if (depth < 1) throw InvalidArgument("depth must be >= 1");

    std::vector<TreeNode> nodes;
    nodes.push_back(TreeNode{0, root_label, std::nullopt, 1, 0, 0});

    // Breadth first: expand generation g while appending generation g+1.
    std::size_t gen_begin = 0;
    for (int g = 1; g < depth; ++g) {
        const std::size_t gen_end = nodes.size();
        for (std::size_t id = gen_begin; id < gen_end; ++id) {
            const Label p = nodes[id].label;
            nodes[id].first_child = nodes.size();
            for (Label q = 0; q < S.size(); ++q) {
                for (std::int64_t c = 0; c < S(p, q); ++c) {
                    if (nodes.size() >= node_cap)
                        throw InvalidArgument("tree exceeds node cap of " +
                                              std::to_string(node_cap) + " nodes");
                    nodes.push_back(TreeNode{nodes.size(), q, id, g + 1, 0, 0});
                }
            }
            nodes[id].child_count = nodes.size() - nodes[id].first_child;
        }
        gen_begin = gen_end;
    }
    for (std::size_t id = gen_begin; id < nodes.size(); ++id) nodes[id].first_child = nodes.size();
    return TruncatedTree(root_label, depth, std::move(nodes));
}

std::vector<std::size_t> generation_counts(const TruncatedTree& tree) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(tree.depth()), 0);
    for (const auto& n : tree.nodes()) ++counts[static_cast<std::size_t>(n.generation - 1)];
    return counts;
}

}  // namespace conetree
