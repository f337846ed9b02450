#include <doctest.h>

#include <random>

#include "conetree/errors.hpp"
#include "conetree/tree.hpp"

using namespace conetree;

namespace {

// Row vector e_r^T S^{n-1} summed: the algebraic generation count.
std::vector<std::size_t> algebraic_counts(const SubstitutionMatrix& S, Label root, int depth) {
    std::vector<std::int64_t> row(S.size(), 0);
    row[root] = 1;
    std::vector<std::size_t> out;
    for (int g = 0; g < depth; ++g) {
        std::int64_t total = 0;
        for (auto v : row) total += v;
        out.push_back(static_cast<std::size_t>(total));
        std::vector<std::int64_t> next(S.size(), 0);
        for (Label p = 0; p < S.size(); ++p)
            for (Label q = 0; q < S.size(); ++q) next[q] += row[p] * S(p, q);
        row = next;
    }
    return out;
}

}  // namespace

TEST_CASE("make_kl_matrix instantiates the K,L family") {
    CHECK(make_kl_matrix(1, 1) == SubstitutionMatrix({{1, 1}, {1, 0}}));
    CHECK(make_kl_matrix(2, 1) == SubstitutionMatrix({{2, 1}, {1, 0}}));
    CHECK(make_kl_matrix(2, 3) ==
          SubstitutionMatrix({{2, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}}));
    CHECK_THROWS_AS(make_kl_matrix(0, 1), InvalidArgument);
    CHECK_THROWS_AS(make_kl_matrix(1, 0), InvalidArgument);
}

TEST_CASE("substitution matrix validation") {
    CHECK_THROWS_AS(SubstitutionMatrix({{1, -1}, {1, 0}}), InvalidArgument);
    CHECK_THROWS_AS(SubstitutionMatrix({{1, 1}, {0, 0}}), InvalidArgument);
    CHECK_THROWS_AS(SubstitutionMatrix({{1, 1}}), InvalidArgument);
}

TEST_CASE("Fibonacci generation counts") {
    const auto S = make_kl_matrix(1, 1);
    CHECK(generation_counts(build_tree(S, 1, 8)) ==
          std::vector<std::size_t>{1, 1, 2, 3, 5, 8, 13, 21});
    CHECK(generation_counts(build_tree(S, 0, 6)) == std::vector<std::size_t>{1, 2, 3, 5, 8, 13});
    CHECK(generation_counts(build_tree(S, 1, 3)) == std::vector<std::size_t>{1, 1, 2});
    CHECK(generation_counts(build_tree(S, 0, 1)) == std::vector<std::size_t>{1});
}

TEST_CASE("S^{2,3} rooted at label 0") {
    // Root has K = 2 label-0 children and one label-1 child; the label-0 pair
    // each branch into three and the label-1 vertex into one: 1, 3, 7.
    const auto S = make_kl_matrix(2, 3);
    const auto counts = generation_counts(build_tree(S, 0, 3));
    CHECK(counts == std::vector<std::size_t>{1, 3, 7});
    CHECK(counts == algebraic_counts(S, 0, 3));
}

TEST_CASE("tree invariants") {
    const auto S = make_kl_matrix(2, 3);
    const auto tree = build_tree(S, 0, 6);
    CHECK(tree.node(0).parent == std::nullopt);
    CHECK(tree.node(0).generation == 1);
    for (const auto& n : tree.nodes()) {
        if (n.id > 0) {
            REQUIRE(n.parent.has_value());
            CHECK(*n.parent < n.id);
            CHECK(tree.node(*n.parent).generation + 1 == n.generation);
        }
        if (n.generation < tree.depth()) {
            std::vector<std::int64_t> by_label(S.size(), 0);
            Label prev = 0;
            for (std::size_t c = 0; c < n.child_count; ++c) {
                const auto& child = tree.node(n.first_child + c);
                CHECK(child.parent == n.id);
                CHECK(child.label >= prev);
                prev = child.label;
                ++by_label[child.label];
            }
            for (Label q = 0; q < S.size(); ++q) CHECK(by_label[q] == S(n.label, q));
            if (n.label == 0) CHECK(n.child_count == 3);
            else CHECK(n.child_count == 1);
        } else {
            CHECK(n.child_count == 0);
        }
    }
}

TEST_CASE("combinatorial and algebraic counts agree on random matrices") {
    std::mt19937 gen(7);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t s = 1 + gen() % 4;
        std::vector<std::vector<std::int64_t>> rows(s, std::vector<std::int64_t>(s));
        for (auto& row : rows) {
            for (auto& v : row) v = gen() % 3;
            row[gen() % s] += 1;
        }
        const SubstitutionMatrix S(rows);
        const Label root = gen() % s;
        const int depth = 1 + static_cast<int>(gen() % 10);
        const auto expected = algebraic_counts(S, root, depth);
        std::size_t total = 0;
        for (auto c : expected) total += c;
        if (total > 2'000'000) continue;
        CHECK(generation_counts(build_tree(S, root, depth)) == expected);
    }
}

TEST_CASE("build_tree errors") {
    const auto S = make_kl_matrix(1, 1);
    CHECK_THROWS_AS(build_tree(S, 2, 3), InvalidArgument);
    CHECK_THROWS_AS(build_tree(S, 0, 0), InvalidArgument);
    CHECK_THROWS_AS(build_tree(make_kl_matrix(5, 1), 0, 20, 1000), InvalidArgument);
}

TEST_CASE("tree JSON layout") {
    const auto tree = build_tree(make_kl_matrix(1, 1), 1, 3);
    const auto j = tree.to_json();
    CHECK(j["root_label"] == 1);
    CHECK(j["depth"] == 3);
    REQUIRE(j["nodes"].size() == 4);
    CHECK(j["nodes"][0]["parent"].is_null());
    CHECK(j["nodes"][1]["parent"] == 0);
    CHECK(j["nodes"][3]["gen"] == 3);
    CHECK(j["nodes"][2]["label"] == 0);
    CHECK(j["nodes"][3]["label"] == 1);
}
