#include "opsem.hpp"

#include <algorithm>
#include <functional>

#include "errors.hpp"
#include "expectation.hpp"

namespace rewlab {

namespace {
std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)); }

ContPtr cons(const StmtPtr& s, ContPtr tail) {
  std::size_t h = mix(tail ? tail->hash : 0x51ed27, std::hash<const void*>{}(s.get()));
  return std::make_shared<Cont>(Cont{s, std::move(tail), h});
}

bool cont_equal(const ContPtr& a, const ContPtr& b) {
  const Cont *x = a.get(), *y = b.get();
  while (x && y) {
    if (x == y) return true;
    if (x->hash != y->hash || x->head != y->head) return false;
    x = x->tail.get();
    y = y->tail.get();
  }
  return x == y;
}

std::string key_of(const ExtReal& v) {
  return (v.is_exact() ? "q" : v.is_float() ? "d" : "i") + v.str();
}
}  // namespace

ContPtr push(const StmtPtr& s, ContPtr tail) {
  if (s->kind == StmtKind::Seq) {
    for (auto it = s->items.rbegin(); it != s->items.rend(); ++it) tail = push(*it, std::move(tail));
    return tail;
  }
  return cons(s, std::move(tail));
}

Configuration Configuration::start(const StmtPtr& s, State st) {
  Configuration c;
  c.kind = ConfigKind::Run;
  c.cont = push(s, nullptr);
  c.state = std::move(st);
  return c;
}

bool Configuration::operator==(const Configuration& o) const {
  if (kind != o.kind) return false;
  if (kind == ConfigKind::Sink) return true;
  return state == o.state && cont_equal(cont, o.cont);
}

std::size_t Configuration::hash() const {
  if (kind == ConfigKind::Sink) return 7;
  return mix(mix(static_cast<std::size_t>(kind), cont ? cont->hash : 0), state.hash());
}

std::string Configuration::str() const {
  if (kind == ConfigKind::Sink) return "<sink>";
  std::string head = kind == ConfigKind::Done ? "<term>" : to_string(cont->head);
  auto nl = head.find('\n');
  if (nl != std::string::npos) head = head.substr(0, nl) + " ...";
  return "<" + head + ", " + state.vars.str() + ">";
}

namespace {
Configuration continue_with(const ContPtr& rest, State s) {
  Configuration c;
  c.kind = rest ? ConfigKind::Run : ConfigKind::Done;
  c.cont = rest;
  c.state = std::move(s);
  return c;
}

void add_succ(std::vector<std::pair<Configuration, ExtReal>>& out, Configuration c, const ExtReal& p) {
  if (p.is_zero()) return;
  for (auto& [d, q] : out)
    if (d == c) {
      q += p;
      return;
    }
  out.emplace_back(std::move(c), p);
}
}  // namespace

std::vector<std::pair<Configuration, ExtReal>> step(const Configuration& c) {
  std::vector<std::pair<Configuration, ExtReal>> out;
  if (c.kind != ConfigKind::Run) {
    out.emplace_back(Configuration{}, ExtReal(1));
    return out;
  }
  const Stmt& s = *c.cont->head;
  const ContPtr& rest = c.cont->tail;
  switch (s.kind) {
    case StmtKind::Skip:
    case StmtKind::Reward: out.emplace_back(continue_with(rest, c.state), ExtReal(1)); break;
    case StmtKind::Assign: {
      State n = c.state;
      n.vars.set(s.var, evaluate(s.e, c.state));
      out.emplace_back(continue_with(rest, std::move(n)), ExtReal(1));
      break;
    }
    case StmtKind::Seq: out.emplace_back(continue_with(push(c.cont->head, rest), c.state), ExtReal(1)); break;
    case StmtKind::Prob: {
      ExtReal p = evaluate(s.e, c.state);
      if (ExtReal(1) < p) throw EvalError("probability " + p.str() + " exceeds 1");
      add_succ(out, continue_with(push(s.s1, rest), c.state), p);
      add_succ(out, continue_with(push(s.s2, rest), c.state), monus(ExtReal(1), p));
      break;
    }
    case StmtKind::If: {
      bool b = evaluate(s.guard, c.state);
      out.emplace_back(continue_with(push(b ? s.s1 : s.s2, rest), c.state), ExtReal(1));
      break;
    }
    case StmtKind::While: {
      if (evaluate(s.guard, c.state))
        out.emplace_back(continue_with(push(s.s1, cons(c.cont->head, rest)), c.state), ExtReal(1));
      else
        out.emplace_back(continue_with(rest, c.state), ExtReal(1));
      break;
    }
  }
  return out;
}

RewardVec config_reward(const Configuration& c, std::size_t arity, const ExprPtr& post) {
  RewardVec r(arity, ExtReal());
  if (c.kind == ConfigKind::Done && post) {
    r[0] = evaluate(post, c.state);
  } else if (c.kind == ConfigKind::Run && c.cont->head->kind == StmtKind::Reward) {
    const auto& args = c.cont->head->args;
    if (args.size() != arity) throw Error(ErrorKind::Arity, "reward arity mismatch");
    for (std::size_t i = 0; i < arity; ++i) r[i] = evaluate(args[i], c.state);
  }
  return r;
}

bool unfolds_loop(const Configuration& c) {
  return c.kind == ConfigKind::Run && c.cont->head->kind == StmtKind::While && evaluate(c.cont->head->guard, c.state);
}

// ---- ProgramChain

ProgramChain::ProgramChain(const StmtPtr& s, const State& init, ExprPtr post, std::size_t budget)
    : post_(std::move(post)), arity_(reward_arity(s)), budget_(budget) {
  if (post_ && arity_ != 1) throw UsageError("a post-expectation needs a single-reward program");
  State st = init;
  for (const auto& v : free_vars(s))
    if (!st.vars.contains(v)) st.vars.set(v, ExtReal());
  intern(Configuration::start(s, std::move(st)));
}

ProgramChain::ProgramChain(const Program& p, const State& init, ExprPtr post, std::size_t budget)
    : ProgramChain(p.body, init, std::move(post), budget) {}

NodeId ProgramChain::intern(Configuration c) {
  auto it = index_.find(c);
  if (it != index_.end()) return it->second;
  if (nodes_.size() >= budget_)
    throw BudgetExceeded("node budget of " + std::to_string(budget_) + " configurations exceeded");
  Node n;
  n.rew = config_reward(c, arity_, post_);
  n.tick = unfolds_loop(c);
  n.cfg = std::move(c);
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(n));
  index_.emplace(nodes_.back().cfg, id);
  return id;
}

const std::vector<Transition>& ProgramChain::successors(NodeId n) {
  if (!nodes_[n].expanded) {
    auto succ = step(nodes_[n].cfg);
    std::vector<Transition> ts;
    for (auto& [c, p] : succ) ts.push_back({intern(std::move(c)), p});
    nodes_[n].succ = std::move(ts);
    nodes_[n].expanded = true;
  }
  return nodes_[n].succ;
}

// ---- ExplicitChain

NodeId ExplicitChain::add_state(RewardVec rew, bool absorbing, std::string label) {
  if (rew.size() != arity_) throw UsageError("reward arity mismatch");
  states_.push_back({std::move(rew), absorbing, std::move(label), {}});
  NodeId id = static_cast<NodeId>(states_.size() - 1);
  if (absorbing) states_.back().succ.push_back({id, ExtReal(1)});
  return id;
}

void ExplicitChain::add_transition(NodeId from, NodeId to, ExtReal p) { states_.at(from).succ.push_back({to, std::move(p)}); }

// ---- TransformedChain

RewardVec reward_add(const RewardVec& a, const RewardVec& b) {
  RewardVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

bool reward_less(const RewardVec& a, const RewardVec& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    auto c = compare(a[i], b[i]);
    if (c < 0) return true;
    if (c > 0) return false;
    if (a[i].kind() != b[i].kind()) return a[i].kind() < b[i].kind();
  }
  return a.size() < b.size();
}

TransformedChain::TransformedChain(MarkovChain& base, RewardFn f, std::size_t budget)
    : base_(base), f_(std::move(f)), budget_(budget) {
  RewardVec zero(base.arity(), ExtReal());
  ExtReal f0 = f_(zero);
  if (!f0.is_zero()) {
    prelude_ = true;
    Node pre;
    pre.base = base.initial();
    pre.alpha = zero;
    pre.prelude = true;
    pre.rew = {f0};
    nodes_.push_back(std::move(pre));
  }
  NodeId first = intern(base.initial(), zero);
  if (prelude_) {
    nodes_[0].succ = {{first, ExtReal(1)}};
    nodes_[0].expanded = true;
  }
}

NodeId TransformedChain::intern(NodeId base, RewardVec alpha) {
  std::vector<std::string> key;
  for (const auto& a : alpha) key.push_back(key_of(a));
  auto k = std::make_pair(base, std::move(key));
  auto it = index_.find(k);
  if (it != index_.end()) return it->second;
  if (nodes_.size() >= budget_) throw BudgetExceeded("node budget of " + std::to_string(budget_) + " states exceeded");
  Node n;
  n.base = base;
  n.alpha = std::move(alpha);
  RewardVec total = reward_add(n.alpha, base_.reward(base));
  n.rew = {monus(f_(total), f_(n.alpha))};
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(n));
  index_.emplace(std::move(k), id);
  return id;
}

const std::vector<Transition>& TransformedChain::successors(NodeId n) {
  if (!nodes_[n].expanded) {
    NodeId b = nodes_[n].base;
    RewardVec next_alpha = reward_add(nodes_[n].alpha, base_.reward(b));
    std::vector<Transition> ts;
    for (const auto& t : base_.successors(b)) ts.push_back({intern(t.to, next_alpha), t.prob});
    nodes_[n].succ = std::move(ts);
    nodes_[n].expanded = true;
  }
  return nodes_[n].succ;
}

std::string TransformedChain::describe(NodeId n) {
  if (nodes_[n].prelude) return "<prelude>";
  std::string a = "(";
  for (std::size_t i = 0; i < nodes_[n].alpha.size(); ++i) a += (i ? "," : "") + nodes_[n].alpha[i].str();
  return "(" + base_.describe(nodes_[n].base) + ", " + a + "))";
}

std::unique_ptr<TransformedChain> mc_transform(MarkovChain& mc, RewardFn f, std::size_t budget) {
  return std::make_unique<TransformedChain>(mc, std::move(f), budget);
}

// ---- path enumeration

void enumerate_paths(MarkovChain& mc, std::size_t depth,
                     const std::function<void(const PathSummary&, const std::vector<NodeId>&)>& visit) {
  std::vector<NodeId> path;
  std::function<void(NodeId, const ExtReal&, const RewardVec&, std::size_t)> dfs =
      [&](NodeId n, const ExtReal& prob, const RewardVec& rew_before, std::size_t used) {
        path.push_back(n);
        RewardVec rew = reward_add(rew_before, mc.reward(n));
        bool absorbed = mc.absorbing(n);
        if (absorbed || (mc.ticks(n) && used == depth)) {
          visit(PathSummary{prob, rew, absorbed, path.size()}, path);
        } else {
          std::size_t next_used = used + (mc.ticks(n) ? 1 : 0);
          for (const auto& t : mc.successors(n)) dfs(t.to, prob * t.prob, rew, next_used);
        }
        path.pop_back();
      };
  dfs(mc.initial(), ExtReal(1), RewardVec(mc.arity(), ExtReal()), 0);
}

// ---- expected reward

namespace {
struct Key {
  NodeId n;
  RewardVec alpha;
  bool operator<(const Key& o) const {
    if (n != o.n) return n < o.n;
    return reward_less(alpha, o.alpha);
  }
};

struct Mass {
  ExtReal m;  // probability
  ExtReal w;  // probability-weighted prefix reward (identity mode only)
};
}  // namespace

Bracket expected_reward(MarkovChain& mc, std::size_t depth, const RewardFn* f) {
  if (!f && mc.arity() != 1) throw UsageError("a multi-reward chain needs an aggregating function f");
  Bracket br;
  br.depth = depth;
  const RewardVec zero(f ? mc.arity() : 0, ExtReal());
  std::map<Key, Mass> level{{Key{mc.initial(), zero}, Mass{ExtReal(1), ExtReal()}}};
  ExtReal open_part;
  for (std::size_t k = 0;; ++k) {
    std::map<Key, Mass> next, pending = std::move(level);
    while (!pending.empty()) {
      auto node = pending.extract(pending.begin());
      const Key& key = node.key();
      const Mass& ms = node.mapped();
      ++br.paths_enumerated;
      const RewardVec& r = mc.reward(key.n);
      if (mc.absorbing(key.n)) {
        ExtReal v = f ? ms.m * (*f)(key.alpha) : ms.w;
        br.terminated_lower += v;
        continue;
      }
      bool tick = mc.ticks(key.n);
      if (tick && k == depth) {
        br.unabsorbed_mass += ms.m;
        open_part += f ? ms.m * (*f)(reward_add(key.alpha, r)) : ms.w + ms.m * r[0];
        continue;
      }
      auto& target = tick ? next : pending;
      for (const auto& t : mc.successors(key.n)) {
        Key nk{t.to, f ? reward_add(key.alpha, r) : zero};
        Mass add{ms.m * t.prob, f ? ExtReal() : (ms.w + ms.m * r[0]) * t.prob};
        auto [it, fresh] = target.try_emplace(std::move(nk), add);
        if (!fresh) {
          it->second.m += add.m;
          it->second.w += add.w;
        }
      }
    }
    if (next.empty() || k == depth) break;
    level = std::move(next);
  }
  br.lower = br.terminated_lower + open_part;
  if (br.unabsorbed_mass.is_zero()) br.upper = br.lower;
  return br;
}

Histogram runtime_distribution(MarkovChain& mc, std::size_t depth) {
  Histogram h;
  std::map<RewardVec, ExtReal, decltype(&reward_less)> buckets(&reward_less);
  const RewardVec zero(mc.arity(), ExtReal());
  std::map<Key, ExtReal> level{{Key{mc.initial(), zero}, ExtReal(1)}};
  for (std::size_t k = 0;; ++k) {
    std::map<Key, ExtReal> next, pending = std::move(level);
    while (!pending.empty()) {
      auto node = pending.extract(pending.begin());
      const Key& key = node.key();
      const ExtReal& m = node.mapped();
      if (mc.absorbing(key.n)) {
        buckets[key.alpha] += m;
        continue;
      }
      bool tick = mc.ticks(key.n);
      if (tick && k == depth) {
        h.unabsorbed_mass += m;
        continue;
      }
      RewardVec a = reward_add(key.alpha, mc.reward(key.n));
      auto& target = tick ? next : pending;
      for (const auto& t : mc.successors(key.n)) target[Key{t.to, a}] += m * t.prob;
    }
    if (next.empty() || k == depth) break;
    level = std::move(next);
  }
  h.buckets.assign(buckets.begin(), buckets.end());
  return h;
}

std::string histogram_csv(const Histogram& h) {
  std::string s = "reward,probability\n";
  for (const auto& [r, p] : h.buckets) {
    std::string key;
    if (r.size() == 1) {
      key = r[0].str();
    } else {
      key = "\"(";
      for (std::size_t i = 0; i < r.size(); ++i) key += (i ? "," : "") + r[i].str();
      key += ")\"";
    }
    s += key + "," + p.str() + "\n";
  }
  return s;
}

}  // namespace rewlab
