#pragma once

// Symbolic reward trees: a fixed dictionary of 17 scalar operators over
// observation features and the constants 0 and 1.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lisr/rng.hpp"

namespace lisr::symtree {

enum class OpKind : std::uint8_t {
    Add,
    Subtract,
    Multiply,
    Cos,
    Sin,
    Tan,
    Max,
    Min,
    PassGreater,
    PassSmaller,
    EqualTo,
    Gate,
    Square,
    IsNegative,
    DivBy100,
    DivBy10,
    ProtectedDiv,
};

inline constexpr std::size_t kOpCount = 17;

inline constexpr std::array<OpKind, kOpCount> kAllOps = {
    OpKind::Add,         OpKind::Subtract,    OpKind::Multiply, OpKind::Cos,     OpKind::Sin,
    OpKind::Tan,         OpKind::Max,         OpKind::Min,      OpKind::PassGreater,
    OpKind::PassSmaller, OpKind::EqualTo,     OpKind::Gate,     OpKind::Square,
    OpKind::IsNegative,  OpKind::DivBy100,    OpKind::DivBy10,  OpKind::ProtectedDiv,
};

// max/min take a variable argument list whose length is fixed when the node
// is created.
inline constexpr int kMinVariadicArity = 2;
inline constexpr int kMaxVariadicArity = 5;

std::string_view op_name(OpKind op);
std::optional<OpKind> op_from_name(std::string_view name);
bool is_variadic(OpKind op);

// Arity of a fixed-arity operator. For max/min this returns the minimum.
int fixed_arity(OpKind op);
bool arity_ok(OpKind op, std::size_t n_args);

// Apply one operator. Total over all real inputs: non-finite values propagate
// except through protected_div, which maps any non-finite quotient to 1.
double eval_op(OpKind op, std::span<const double> args);

struct Node {
    enum class Kind : std::uint8_t { Operator, Feature, Constant };

    Kind kind = Kind::Constant;
    OpKind op = OpKind::Add;
    int feature = 0;
    double value = 0.0;
    std::vector<Node> children;

    static Node make_op(OpKind op, std::vector<Node> children);
    static Node make_feature(int index);
    static Node make_const(double value);

    bool is_operator() const { return kind == Kind::Operator; }
    bool operator==(const Node& other) const;
};

// Operator layers on the deepest root-to-leaf path; a lone terminal has depth 0.
int depth(const Node& node);
std::size_t node_count(const Node& node);
std::size_t operator_count(const Node& node);

// Preorder addressing. Index 0 is the node itself.
const Node& node_at(const Node& root, std::size_t index);
Node& node_at(Node& root, std::size_t index);
// Number of operator ancestors for every node, in preorder.
std::vector<int> ancestor_depths(const Node& root);

class SymTree {
public:
    // Throws std::invalid_argument if a feature index is out of range or an
    // operator has the wrong number of children.
    SymTree(Node root, int feature_dim);

    const Node& root() const { return root_; }
    int feature_dim() const { return feature_dim_; }
    std::uint64_t id() const { return id_; }

    int depth() const { return symtree::depth(root_); }
    std::size_t size() const { return node_count(root_); }
    std::size_t operator_count() const { return symtree::operator_count(root_); }

    // Same shape, operators, arities and terminals. Ids are ignored.
    bool structurally_equal(const SymTree& other) const
    {
        return feature_dim_ == other.feature_dim_ && root_ == other.root_;
    }

private:
    Node root_;
    int feature_dim_;
    std::uint64_t id_;
};

double evaluate(const Node& node, std::span<const double> features);
double evaluate(const SymTree& tree, std::span<const double> features);

struct GrowParams {
    double operator_prob = 0.7;
    double feature_prob = 0.9;
};

Node random_terminal(int feature_dim, Rng& rng, const GrowParams& params = {});
// Grow-method subtree with at most max_depth operator layers (0 gives a terminal).
Node grow(int feature_dim, int max_depth, Rng& rng, const GrowParams& params = {});

SymTree random_tree(int feature_dim, int max_depth, Rng& rng, const GrowParams& params = {});

SymTree mutate_tree(const SymTree& tree, int max_depth, Rng& rng, const GrowParams& params = {});

struct CrossoverTrace {
    int attempts = 0;
    bool accepted = false;
    std::size_t target_index = 0; // preorder index in parent_a
    std::size_t donor_index = 0;  // preorder index in parent_b
};

inline constexpr int kCrossoverAttempts = 20;

SymTree crossover_trees(const SymTree& parent_a, const SymTree& parent_b, int max_depth, Rng& rng,
                        CrossoverTrace* trace = nullptr);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& reason);
    std::size_t position() const { return position_; }
    const std::string& reason() const { return reason_; }

private:
    std::size_t position_;
    std::string reason_;
};

// Prefix form: `(add (cos f3) c1)`; fN is feature N, c0/c1 the constants.
std::string serialize(const SymTree& tree);
std::string serialize(const Node& node);
SymTree deserialize(std::string_view text, int feature_dim);

std::vector<std::string> default_feature_names(int feature_dim);

// Flatten into single-assignment statements `v_k = op(...)`, one per
// operator node in post-order, followed by `reward = v_last`. A terminal-only
// tree yields the single line `reward = <terminal>`.
std::string unroll(const SymTree& tree, std::span<const std::string> feature_names);

} // namespace lisr::symtree
