#pragma once
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lang.hpp"

namespace rewlab {

// Continuation: immutable cons list of statements still to execute.
struct Cont;
using ContPtr = std::shared_ptr<const Cont>;
struct Cont {
  StmtPtr head;
  ContPtr tail;
  std::size_t hash;
};
// Pushes s in front of tail, unfolding sequences.
ContPtr push(const StmtPtr& s, ContPtr tail);

enum class ConfigKind { Run, Done, Sink };  // <S, s>, <done-marker, s>, bottom

struct Configuration {
  ConfigKind kind = ConfigKind::Sink;
  ContPtr cont;
  State state;

  static Configuration start(const StmtPtr& s, State st);
  bool operator==(const Configuration& o) const;
  std::size_t hash() const;
  std::string str() const;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const { return c.hash(); }
};

using RewardVec = std::vector<ExtReal>;

// One application of the inference rules; identical successors are merged,
// probability-zero successors dropped.
std::vector<std::pair<Configuration, ExtReal>> step(const Configuration& c);
// rew(c); at the termination marker the post-expectation (if any) is collected.
RewardVec config_reward(const Configuration& c, std::size_t arity, const ExprPtr& post = nullptr);
// Guard-true loop unfolding: the transitions counted by depth for program chains.
bool unfolds_loop(const Configuration& c);

using NodeId = std::uint32_t;

struct Transition {
  NodeId to;
  ExtReal prob;
};

constexpr std::size_t kDefaultBudget = 1000000;

class MarkovChain {
 public:
  virtual ~MarkovChain() = default;
  virtual NodeId initial() = 0;
  virtual const std::vector<Transition>& successors(NodeId n) = 0;
  virtual const RewardVec& reward(NodeId n) = 0;
  virtual bool absorbing(NodeId n) = 0;
  // Whether leaving n consumes one unit of depth.
  virtual bool ticks(NodeId n) = 0;
  virtual std::size_t arity() const = 0;
  virtual std::string describe(NodeId n) = 0;
  virtual std::size_t explored() const = 0;
};

// Lazily explored operational chain of a program.
class ProgramChain : public MarkovChain {
 public:
  ProgramChain(const Program& p, const State& init, ExprPtr post = nullptr, std::size_t budget = kDefaultBudget);
  ProgramChain(const StmtPtr& s, const State& init, ExprPtr post = nullptr, std::size_t budget = kDefaultBudget);
  NodeId initial() override { return 0; }
  const std::vector<Transition>& successors(NodeId n) override;
  const RewardVec& reward(NodeId n) override { return nodes_[n].rew; }
  bool absorbing(NodeId n) override { return nodes_[n].cfg.kind == ConfigKind::Sink; }
  bool ticks(NodeId n) override { return nodes_[n].tick; }
  std::size_t arity() const override { return arity_; }
  std::string describe(NodeId n) override { return nodes_[n].cfg.str(); }
  std::size_t explored() const override { return nodes_.size(); }
  const Configuration& config(NodeId n) const { return nodes_[n].cfg; }

 private:
  struct Node {
    Configuration cfg;
    RewardVec rew;
    bool tick = false;
    bool expanded = false;
    std::vector<Transition> succ;
  };
  NodeId intern(Configuration c);
  std::deque<Node> nodes_;
  std::unordered_map<Configuration, NodeId, ConfigurationHash> index_;
  ExprPtr post_;
  std::size_t arity_, budget_;
};

// Finite chain given explicitly; every transition ticks.
class ExplicitChain : public MarkovChain {
 public:
  explicit ExplicitChain(std::size_t arity = 1) : arity_(arity) {}
  NodeId add_state(RewardVec rew, bool absorbing = false, std::string label = "");
  void add_transition(NodeId from, NodeId to, ExtReal p);
  NodeId initial() override { return 0; }
  const std::vector<Transition>& successors(NodeId n) override { return states_[n].succ; }
  const RewardVec& reward(NodeId n) override { return states_[n].rew; }
  bool absorbing(NodeId n) override { return states_[n].absorbing; }
  bool ticks(NodeId) override { return true; }
  std::size_t arity() const override { return arity_; }
  std::string describe(NodeId n) override { return states_[n].label; }
  std::size_t explored() const override { return states_.size(); }

 private:
  struct S {
    RewardVec rew;
    bool absorbing;
    std::string label;
    std::vector<Transition> succ;
  };
  std::vector<S> states_;
  std::size_t arity_;
};

// f applied to a reward tuple; must be monotone.
using RewardFn = std::function<ExtReal(const RewardVec&)>;

// Definition-2 chain: states (base, alpha) with reward f(alpha + rew) - f(alpha);
// a prelude state carrying f(0) is prepended when f(0) != 0.
class TransformedChain : public MarkovChain {
 public:
  TransformedChain(MarkovChain& base, RewardFn f, std::size_t budget = kDefaultBudget);
  NodeId initial() override { return 0; }
  const std::vector<Transition>& successors(NodeId n) override;
  const RewardVec& reward(NodeId n) override { return nodes_[n].rew; }
  bool absorbing(NodeId n) override { return !nodes_[n].prelude && base_.absorbing(nodes_[n].base); }
  bool ticks(NodeId n) override { return !nodes_[n].prelude && base_.ticks(nodes_[n].base); }
  std::size_t arity() const override { return 1; }
  std::string describe(NodeId n) override;
  std::size_t explored() const override { return nodes_.size(); }
  bool has_prelude() const { return prelude_; }
  bool is_prelude(NodeId n) const { return nodes_[n].prelude; }
  NodeId base_of(NodeId n) const { return nodes_[n].base; }
  const RewardVec& alpha_of(NodeId n) const { return nodes_[n].alpha; }

 private:
  struct Node {
    NodeId base;
    RewardVec alpha;
    bool prelude = false;
    RewardVec rew;
    bool expanded = false;
    std::vector<Transition> succ;
  };
  NodeId intern(NodeId base, RewardVec alpha);
  MarkovChain& base_;
  RewardFn f_;
  std::size_t budget_;
  bool prelude_ = false;
  std::deque<Node> nodes_;
  std::map<std::pair<NodeId, std::vector<std::string>>, NodeId> index_;
};

std::unique_ptr<TransformedChain> mc_transform(MarkovChain& mc, RewardFn f, std::size_t budget = kDefaultBudget);

struct PathSummary {
  ExtReal probability;
  RewardVec reward;
  bool terminated = false;
  std::size_t length = 0;  // configurations on the path
};

// Every maximal probability-positive path using at most `depth` ticking
// transitions; paths reaching the sink end there and are reported terminated.
void enumerate_paths(MarkovChain& mc, std::size_t depth,
                     const std::function<void(const PathSummary&, const std::vector<NodeId>&)>& visit);

struct Bracket {
  ExtReal lower;
  std::optional<ExtReal> upper;
  ExtReal unabsorbed_mass;
  ExtReal terminated_lower;  // contribution of paths absorbed within the depth
  std::size_t depth = 0;
  std::size_t paths_enumerated = 0;
};

// L(d) = sum over depth-d paths of Prob * f(Rew); f absent means identity (arity 1).
Bracket expected_reward(MarkovChain& mc, std::size_t depth, const RewardFn* f = nullptr);

struct Histogram {
  std::vector<std::pair<RewardVec, ExtReal>> buckets;  // sorted by reward
  ExtReal unabsorbed_mass;
};

Histogram runtime_distribution(MarkovChain& mc, std::size_t depth);
std::string histogram_csv(const Histogram& h);

// Lexicographic numeric order, ties broken by representation kind.
bool reward_less(const RewardVec& a, const RewardVec& b);
RewardVec reward_add(const RewardVec& a, const RewardVec& b);

}  // namespace rewlab
