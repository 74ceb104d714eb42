#include "lisr/symtree.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <sstream>

namespace lisr::symtree {

namespace {

constexpr std::array<std::string_view, kOpCount> kNames = {
    "add",          "subtract",     "multiply", "cos",    "sin",         "tan",
    "max",          "min",          "pass_greater", "pass_smaller", "equal_to", "gate",
    "square",       "is_negative",  "div_by_100",   "div_by_10",    "protected_div",
};

std::atomic<std::uint64_t> g_next_tree_id{1};

} // namespace

std::string_view op_name(OpKind op)
{
    return kNames[static_cast<std::size_t>(op)];
}

std::optional<OpKind> op_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < kOpCount; ++i) {
        if (kNames[i] == name) {
            return static_cast<OpKind>(i);
        }
    }
    return std::nullopt;
}

bool is_variadic(OpKind op)
{
    return op == OpKind::Max || op == OpKind::Min;
}

int fixed_arity(OpKind op)
{
    switch (op) {
    case OpKind::Cos:
    case OpKind::Sin:
    case OpKind::Tan:
    case OpKind::Square:
    case OpKind::IsNegative:
    case OpKind::DivBy100:
    case OpKind::DivBy10:
        return 1;
    case OpKind::Gate:
        return 3;
    case OpKind::Max:
    case OpKind::Min:
        return kMinVariadicArity;
    default:
        return 2;
    }
}

bool arity_ok(OpKind op, std::size_t n_args)
{
    if (is_variadic(op)) {
        return n_args >= static_cast<std::size_t>(kMinVariadicArity)
            && n_args <= static_cast<std::size_t>(kMaxVariadicArity);
    }
    return n_args == static_cast<std::size_t>(fixed_arity(op));
}

double eval_op(OpKind op, std::span<const double> args)
{
    switch (op) {
    case OpKind::Add:
        return args[0] + args[1];
    case OpKind::Subtract:
        return args[0] - args[1];
    case OpKind::Multiply:
        return args[0] * args[1];
    case OpKind::Cos:
        return std::cos(args[0]);
    case OpKind::Sin:
        return std::sin(args[0]);
    case OpKind::Tan:
        return std::tan(args[0]);
    case OpKind::Max: {
        // NaN is sticky; ties keep the earliest argument.
        double best = args[0];
        for (std::size_t i = 1; i < args.size(); ++i) {
            if (std::isnan(best)) {
                break;
            }
            if (std::isnan(args[i]) || args[i] > best) {
                best = args[i];
            }
        }
        return best;
    }
    case OpKind::Min: {
        double best = args[0];
        for (std::size_t i = 1; i < args.size(); ++i) {
            if (std::isnan(best)) {
                break;
            }
            if (std::isnan(args[i]) || args[i] < best) {
                best = args[i];
            }
        }
        return best;
    }
    case OpKind::PassGreater:
        return args[0] > args[1] ? args[0] : args[1];
    case OpKind::PassSmaller:
        return args[0] < args[1] ? args[0] : args[1];
    case OpKind::EqualTo:
        return args[0] == args[1] ? 1.0 : 0.0;
    case OpKind::Gate:
        return args[2] <= 0.0 ? args[0] : args[1];
    case OpKind::Square:
        return args[0] * args[0];
    case OpKind::IsNegative:
        return args[0] < 0.0 ? 1.0 : 0.0;
    case OpKind::DivBy100:
        return args[0] / 100.0;
    case OpKind::DivBy10:
        return args[0] / 10.0;
    case OpKind::ProtectedDiv: {
        const double q = args[0] / args[1];
        return std::isfinite(q) ? q : 1.0;
    }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Node

Node Node::make_op(OpKind op, std::vector<Node> children)
{
    if (!arity_ok(op, children.size())) {
        throw std::invalid_argument("arity mismatch for " + std::string(op_name(op)) + ": got "
                                    + std::to_string(children.size()) + " children");
    }
    Node n;
    n.kind = Kind::Operator;
    n.op = op;
    n.children = std::move(children);
    return n;
}

Node Node::make_feature(int index)
{
    if (index < 0) {
        throw std::invalid_argument("negative feature index");
    }
    Node n;
    n.kind = Kind::Feature;
    n.feature = index;
    return n;
}

Node Node::make_const(double value)
{
    if (value != 0.0 && value != 1.0) {
        throw std::invalid_argument("constant terminals are restricted to 0 and 1");
    }
    Node n;
    n.kind = Kind::Constant;
    n.value = value;
    return n;
}

bool Node::operator==(const Node& other) const
{
    if (kind != other.kind) {
        return false;
    }
    switch (kind) {
    case Kind::Feature:
        return feature == other.feature;
    case Kind::Constant:
        return value == other.value;
    case Kind::Operator:
        return op == other.op && children == other.children;
    }
    return false;
}

int depth(const Node& node)
{
    if (!node.is_operator()) {
        return 0;
    }
    int deepest = 0;
    for (const auto& c : node.children) {
        deepest = std::max(deepest, depth(c));
    }
    return deepest + 1;
}

std::size_t node_count(const Node& node)
{
    std::size_t n = 1;
    for (const auto& c : node.children) {
        n += node_count(c);
    }
    return n;
}

std::size_t operator_count(const Node& node)
{
    std::size_t n = node.is_operator() ? 1 : 0;
    for (const auto& c : node.children) {
        n += operator_count(c);
    }
    return n;
}

namespace {

template <typename N>
N* find_preorder(N& node, std::size_t& remaining)
{
    if (remaining == 0) {
        return &node;
    }
    --remaining;
    for (auto& c : node.children) {
        if (auto* hit = find_preorder(c, remaining)) {
            return hit;
        }
    }
    return nullptr;
}

void collect_depths(const Node& node, int d, std::vector<int>& out)
{
    out.push_back(d);
    for (const auto& c : node.children) {
        collect_depths(c, d + 1, out);
    }
}

void validate(const Node& node, int feature_dim)
{
    switch (node.kind) {
    case Node::Kind::Feature:
        if (node.feature < 0 || node.feature >= feature_dim) {
            throw std::invalid_argument("feature index " + std::to_string(node.feature)
                                        + " out of range for dimension " + std::to_string(feature_dim));
        }
        break;
    case Node::Kind::Constant:
        if (node.value != 0.0 && node.value != 1.0) {
            throw std::invalid_argument("constant terminals are restricted to 0 and 1");
        }
        break;
    case Node::Kind::Operator:
        if (!arity_ok(node.op, node.children.size())) {
            throw std::invalid_argument("arity mismatch for " + std::string(op_name(node.op)));
        }
        for (const auto& c : node.children) {
            validate(c, feature_dim);
        }
        break;
    }
}

} // namespace

const Node& node_at(const Node& root, std::size_t index)
{
    std::size_t remaining = index;
    const Node* hit = find_preorder(root, remaining);
    if (hit == nullptr) {
        throw std::out_of_range("preorder index out of range");
    }
    return *hit;
}

Node& node_at(Node& root, std::size_t index)
{
    std::size_t remaining = index;
    Node* hit = find_preorder(root, remaining);
    if (hit == nullptr) {
        throw std::out_of_range("preorder index out of range");
    }
    return *hit;
}

std::vector<int> ancestor_depths(const Node& root)
{
    std::vector<int> out;
    collect_depths(root, 0, out);
    return out;
}

SymTree::SymTree(Node root, int feature_dim)
    : root_(std::move(root))
    , feature_dim_(feature_dim)
    , id_(g_next_tree_id.fetch_add(1, std::memory_order_relaxed))
{
    if (feature_dim < 1) {
        throw std::invalid_argument("feature_dim must be at least 1");
    }
    validate(root_, feature_dim_);
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Node& node, std::span<const double> features)
{
    switch (node.kind) {
    case Node::Kind::Feature:
        return features[static_cast<std::size_t>(node.feature)];
    case Node::Kind::Constant:
        return node.value;
    case Node::Kind::Operator:
        break;
    }
    std::array<double, kMaxVariadicArity> args{};
    const std::size_t n = node.children.size();
    for (std::size_t i = 0; i < n; ++i) {
        args[i] = evaluate(node.children[i], features);
    }
    return eval_op(node.op, std::span<const double>(args.data(), n));
}

double evaluate(const SymTree& tree, std::span<const double> features)
{
    if (features.size() != static_cast<std::size_t>(tree.feature_dim())) {
        throw std::invalid_argument("feature vector length " + std::to_string(features.size())
                                    + " does not match tree dimension " + std::to_string(tree.feature_dim()));
    }
    return evaluate(tree.root(), features);
}

// ---------------------------------------------------------------------------
// Generation and variation

Node random_terminal(int feature_dim, Rng& rng, const GrowParams& params)
{
    if (uniform01(rng) < params.feature_prob) {
        return Node::make_feature(static_cast<int>(uniform_index(rng, static_cast<std::size_t>(feature_dim))));
    }
    return Node::make_const(uniform_index(rng, 2) == 0 ? 0.0 : 1.0);
}

Node grow(int feature_dim, int max_depth, Rng& rng, const GrowParams& params)
{
    if (max_depth <= 0 || uniform01(rng) >= params.operator_prob) {
        return random_terminal(feature_dim, rng, params);
    }
    const OpKind op = kAllOps[uniform_index(rng, kOpCount)];
    int arity = fixed_arity(op);
    if (is_variadic(op)) {
        arity = std::uniform_int_distribution<int>(kMinVariadicArity, kMaxVariadicArity)(rng);
    }
    std::vector<Node> children;
    children.reserve(static_cast<std::size_t>(arity));
    for (int i = 0; i < arity; ++i) {
        children.push_back(grow(feature_dim, max_depth - 1, rng, params));
    }
    return Node::make_op(op, std::move(children));
}

SymTree random_tree(int feature_dim, int max_depth, Rng& rng, const GrowParams& params)
{
    if (feature_dim < 1 || max_depth < 1) {
        throw std::invalid_argument("random_tree needs feature_dim >= 1 and max_depth >= 1");
    }
    return SymTree(grow(feature_dim, max_depth, rng, params), feature_dim);
}

SymTree mutate_tree(const SymTree& tree, int max_depth, Rng& rng, const GrowParams& params)
{
    Node root = tree.root();
    const auto depths = ancestor_depths(root);
    const std::size_t site = uniform_index(rng, depths.size());
    const int budget = std::max(0, max_depth - depths[site]);
    node_at(root, site) = grow(tree.feature_dim(), budget, rng, params);
    return SymTree(std::move(root), tree.feature_dim());
}

SymTree crossover_trees(const SymTree& parent_a, const SymTree& parent_b, int max_depth, Rng& rng,
                        CrossoverTrace* trace)
{
    if (parent_a.feature_dim() != parent_b.feature_dim()) {
        throw std::invalid_argument("crossover parents have different feature dimensions");
    }
    const auto target_depths = ancestor_depths(parent_a.root());
    const auto donor_count = node_count(parent_b.root());

    CrossoverTrace local;
    for (int attempt = 1; attempt <= kCrossoverAttempts; ++attempt) {
        const std::size_t target = uniform_index(rng, target_depths.size());
        const std::size_t donor = uniform_index(rng, donor_count);
        const Node& material = node_at(parent_b.root(), donor);
        local.attempts = attempt;
        local.target_index = target;
        local.donor_index = donor;
        if (target_depths[target] + depth(material) <= max_depth) {
            Node root = parent_a.root();
            node_at(root, target) = material;
            local.accepted = true;
            if (trace != nullptr) {
                *trace = local;
            }
            return SymTree(std::move(root), parent_a.feature_dim());
        }
    }
    if (trace != nullptr) {
        *trace = local;
    }
    return SymTree(parent_a.root(), parent_a.feature_dim());
}

// ---------------------------------------------------------------------------
// Text forms

ParseError::ParseError(std::size_t position, const std::string& reason)
    : std::runtime_error("parse error at " + std::to_string(position) + ": " + reason)
    , position_(position)
    , reason_(reason)
{
}

namespace {

void write_prefix(const Node& node, std::string& out)
{
    switch (node.kind) {
    case Node::Kind::Feature:
        out += 'f';
        out += std::to_string(node.feature);
        return;
    case Node::Kind::Constant:
        out += node.value == 0.0 ? "c0" : "c1";
        return;
    case Node::Kind::Operator:
        break;
    }
    out += '(';
    out += op_name(node.op);
    for (const auto& c : node.children) {
        out += ' ';
        write_prefix(c, out);
    }
    out += ')';
}

class PrefixParser {
public:
    PrefixParser(std::string_view text, int feature_dim)
        : text_(text)
        , feature_dim_(feature_dim)
    {
    }

    Node parse()
    {
        Node n = parse_node();
        skip_space();
        if (pos_ != text_.size()) {
            throw ParseError(pos_, "trailing characters");
        }
        return n;
    }

private:
    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    std::string_view token()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')'
               && std::isspace(static_cast<unsigned char>(text_[pos_])) == 0) {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    Node parse_atom(std::size_t at, std::string_view tok)
    {
        if (tok == "c0") {
            return Node::make_const(0.0);
        }
        if (tok == "c1") {
            return Node::make_const(1.0);
        }
        if (tok.size() >= 2 && tok[0] == 'f'
            && std::all_of(tok.begin() + 1, tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; })) {
            if (tok.size() > 10) {
                throw ParseError(at, "feature index out of range");
            }
            const long idx = std::stol(std::string(tok.substr(1)));
            if (idx >= feature_dim_) {
                throw ParseError(at, "feature index out of range: f" + std::to_string(idx) + " with dimension "
                                         + std::to_string(feature_dim_));
            }
            return Node::make_feature(static_cast<int>(idx));
        }
        throw ParseError(at, "unknown atom '" + std::string(tok) + "'");
    }

    Node parse_node()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            throw ParseError(pos_, "unexpected end of input");
        }
        const std::size_t at = pos_;
        if (text_[pos_] == ')') {
            throw ParseError(pos_, "unexpected ')'");
        }
        if (text_[pos_] != '(') {
            return parse_atom(at, token());
        }
        ++pos_;
        skip_space();
        const std::size_t name_at = pos_;
        const std::string_view name = token();
        if (name.empty()) {
            throw ParseError(name_at, "missing operator name");
        }
        const auto op = op_from_name(name);
        if (!op) {
            throw ParseError(name_at, "unknown operator '" + std::string(name) + "'");
        }
        std::vector<Node> children;
        for (;;) {
            skip_space();
            if (pos_ >= text_.size()) {
                throw ParseError(pos_, "unexpected end of input, missing ')'");
            }
            if (text_[pos_] == ')') {
                ++pos_;
                break;
            }
            children.push_back(parse_node());
        }
        if (!arity_ok(*op, children.size())) {
            throw ParseError(at, "arity mismatch: " + std::string(name) + " takes "
                                     + (is_variadic(*op) ? std::string("2 to 5") : std::to_string(fixed_arity(*op)))
                                     + " arguments, got " + std::to_string(children.size()));
        }
        return Node::make_op(*op, std::move(children));
    }

    std::string_view text_;
    int feature_dim_;
    std::size_t pos_ = 0;
};

std::string terminal_text(const Node& node, std::span<const std::string> names)
{
    if (node.kind == Node::Kind::Feature) {
        return names[static_cast<std::size_t>(node.feature)];
    }
    return node.value == 0.0 ? "0" : "1";
}

// Emits statements for every operator below (and including) `node`; returns
// the expression naming its value.
std::string unroll_node(const Node& node, std::span<const std::string> names, int& counter, std::ostringstream& out)
{
    if (!node.is_operator()) {
        return terminal_text(node, names);
    }
    std::vector<std::string> args;
    args.reserve(node.children.size());
    for (const auto& c : node.children) {
        args.push_back(unroll_node(c, names, counter, out));
    }
    std::string call(op_name(node.op));
    call += '(';
    if (is_variadic(node.op)) {
        call += '[';
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i > 0) {
            call += ", ";
        }
        call += args[i];
    }
    if (is_variadic(node.op)) {
        call += ']';
    }
    call += ')';

    std::string var = "v_" + std::to_string(++counter);
    out << var << " = " << call << '\n';
    return var;
}

} // namespace

std::string serialize(const Node& node)
{
    std::string out;
    write_prefix(node, out);
    return out;
}

std::string serialize(const SymTree& tree)
{
    return serialize(tree.root());
}

SymTree deserialize(std::string_view text, int feature_dim)
{
    if (feature_dim < 1) {
        throw ParseError(0, "feature dimension must be at least 1");
    }
    PrefixParser parser(text, feature_dim);
    return SymTree(parser.parse(), feature_dim);
}

std::vector<std::string> default_feature_names(int feature_dim)
{
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(feature_dim));
    for (int i = 0; i < feature_dim; ++i) {
        names.push_back("s_" + std::to_string(i));
    }
    return names;
}

std::string unroll(const SymTree& tree, std::span<const std::string> feature_names)
{
    if (feature_names.size() != static_cast<std::size_t>(tree.feature_dim())) {
        throw std::invalid_argument("unroll needs one name per feature");
    }
    std::ostringstream out;
    if (!tree.root().is_operator()) {
        out << "reward = " << terminal_text(tree.root(), feature_names) << '\n';
        return out.str();
    }
    int counter = 0;
    const std::string last = unroll_node(tree.root(), feature_names, counter, out);
    out << "reward = " << last << '\n';
    return out.str();
}

} // namespace lisr::symtree
