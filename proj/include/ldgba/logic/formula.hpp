#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <utility>

namespace ldgba::logic {

enum class Op { True, Atom, Not, And, Or, Next, Until, Eventually, Always };

/// Immutable LTL syntax tree. Copies share structure.
class Formula {
 public:
  Formula() : Formula(make(Op::True, {}, nullptr, nullptr)) {}

  static Formula truth() { return Formula(); }
  static Formula atom(std::string name) { return make(Op::Atom, std::move(name), nullptr, nullptr); }
  static Formula negation(Formula f) { return make(Op::Not, {}, std::move(f.node_), nullptr); }
  static Formula conj(Formula l, Formula r) { return make(Op::And, {}, std::move(l.node_), std::move(r.node_)); }
  static Formula disj(Formula l, Formula r) { return make(Op::Or, {}, std::move(l.node_), std::move(r.node_)); }
  static Formula next(Formula f) { return make(Op::Next, {}, std::move(f.node_), nullptr); }
  static Formula until(Formula l, Formula r) { return make(Op::Until, {}, std::move(l.node_), std::move(r.node_)); }
  static Formula eventually(Formula f) { return make(Op::Eventually, {}, std::move(f.node_), nullptr); }
  static Formula always(Formula f) { return make(Op::Always, {}, std::move(f.node_), nullptr); }

  Op op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  bool is_unary() const { return op() == Op::Not || op() == Op::Next || op() == Op::Eventually || op() == Op::Always; }
  bool is_binary() const { return op() == Op::And || op() == Op::Or || op() == Op::Until; }

  /// Operand of a unary node, or left operand of a binary node.
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  Formula operand() const { return lhs(); }

  /// Identity of the shared node; usable as a memo key.
  const void* id() const { return node_.get(); }

  std::size_t depth() const {
    if (is_binary()) return 1 + std::max(lhs().depth(), rhs().depth());
    if (is_unary()) return 1 + operand().depth();
    return 1;
  }

  void collect_atoms(std::set<std::string>& out) const {
    if (op() == Op::Atom) out.insert(name());
    if (is_unary()) operand().collect_atoms(out);
    if (is_binary()) {
      lhs().collect_atoms(out);
      rhs().collect_atoms(out);
    }
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op()) return false;
    if (a.op() == Op::Atom) return a.name() == b.name();
    if (a.is_unary()) return a.operand() == b.operand();
    if (a.is_binary()) return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    return true;
  }

 private:
  struct Node {
    Op op;
    std::string name;
    std::shared_ptr<const Node> lhs, rhs;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula make(Op op, std::string name, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r) {
    return Formula(std::make_shared<const Node>(Node{op, std::move(name), std::move(l), std::move(r)}));
  }

  std::shared_ptr<const Node> node_;
};

/// Rewrites F and G into the core operators: F f = true U f, G f = !(true U !f).
inline Formula expand_derived(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::Atom: return f;
    case Op::Not: return Formula::negation(expand_derived(f.operand()));
    case Op::Next: return Formula::next(expand_derived(f.operand()));
    case Op::And: return Formula::conj(expand_derived(f.lhs()), expand_derived(f.rhs()));
    case Op::Or: return Formula::disj(expand_derived(f.lhs()), expand_derived(f.rhs()));
    case Op::Until: return Formula::until(expand_derived(f.lhs()), expand_derived(f.rhs()));
    case Op::Eventually: return Formula::until(Formula::truth(), expand_derived(f.operand()));
    case Op::Always:
      return Formula::negation(Formula::until(Formula::truth(), Formula::negation(expand_derived(f.operand()))));
  }
  return f;
}

}  // namespace ldgba::logic
