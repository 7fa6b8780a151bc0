#pragma once

// Weeping tree: a spanning tree over the stored entries in which every node's
// itemset is a proper subset of its parent's, and in which a node's subsets
// are either its descendants or precede it in pre-order. The first property
// licenses descendant-intersect-skipping, masking and descendant-update-
// skipping; the second licenses successor-update-skipping and guarantees that
// a new itemset is first reached at its smallest stored superset, which is
// where it is attached. Minimum entries always sit directly under the root,
// so eviction only ever looks at the shallowest layer.
//
// Addresses over the transaction cube are never materialised; the tree keeps
// structure, sibling order and birth timestamps only.

#include <algorithm>
#include <cassert>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "parasol/core.hpp"
#include "parasol/policy.hpp"

namespace parasol {

/// Switches for the four pruning rules. Disabling any of them changes the
/// amount of work, never the result.
struct pruning {
  bool dis = true;      // descendant-intersect-skipping
  bool masking = true;  // recurse with the narrowed itemset
  bool dus = true;      // descendant-update-skipping
  bool sus = true;      // successor-update-skipping
};

class weeping_tree {
 public:
  using node_id = std::uint32_t;
  static constexpr node_id nil = std::numeric_limits<node_id>::max();
  static constexpr node_id root = 0;

  struct node {
    entry e;
    timestamp created = 0;  // step at which the node was attached
    timestamp birth = 0;    // first step of the root-level ancestor
    std::size_t rank = 0;   // lexicographic rank among nodes created in the same step
    node_id parent = nil;
    node_id first_child = nil;
    node_id last_child = nil;
    node_id prev = nil;
    node_id next = nil;
    std::uint64_t epoch = 0;
    bool alive = false;
  };

  weeping_tree() { clear(); }

  void clear() {
    nodes_.assign(1, node{});
    nodes_[root].alive = true;
    free_.clear();
    index_.clear();
    shallow_.clear();
    size_ = 0;
    now_ = 0;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  void set_pruning(pruning p) noexcept { pruning_ = p; }
  pruning pruning_rules() const noexcept { return pruning_; }

  /// When set, every update appends a human-readable event log.
  void set_trace(std::vector<std::string>* sink) noexcept { trace_ = sink; }

  const node* find(const itemset& a) const {
    auto it = index_.find(a);
    return it == index_.end() ? nullptr : &nodes_[it->second];
  }

  /// Itemset of the parent, or nullopt when the node hangs off the root.
  std::optional<itemset> parent_of(const itemset& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) throw std::out_of_range("no such itemset in tree");
    const node_id p = nodes_[it->second].parent;
    if (p == root) return std::nullopt;
    return nodes_[p].e.alpha;
  }

  /// Children of `a` (root when nullopt), left to right.
  std::vector<itemset> children_of(const std::optional<itemset>& a) const {
    node_id x = root;
    if (a) {
      auto it = index_.find(*a);
      if (it == index_.end()) throw std::out_of_range("no such itemset in tree");
      x = it->second;
    }
    std::vector<itemset> out;
    for (node_id c = nodes_[x].first_child; c != nil; c = nodes_[c].next)
      out.push_back(nodes_[c].e.alpha);
    return out;
  }

  /// Visits nodes in pre-order as f(const node&, depth); depth 1 = under root.
  template <class F>
  void for_each_preorder(F&& f) const {
    std::vector<std::pair<node_id, std::size_t>> stack;
    for (node_id c = nodes_[root].last_child; c != nil; c = nodes_[c].prev)
      stack.emplace_back(c, 1);
    while (!stack.empty()) {
      auto [x, d] = stack.back();
      stack.pop_back();
      f(nodes_[x], d);
      for (node_id c = nodes_[x].last_child; c != nil; c = nodes_[c].prev)
        stack.emplace_back(c, d + 1);
    }
  }

  template <class F>
  void for_each_entry(F&& f) const {
    for_each_preorder([&](const node& n, std::size_t) { f(n.e); });
  }

  std::vector<entry> entries() const {
    std::vector<entry> out;
    out.reserve(size_);
    for_each_entry([&](const entry& e) { out.push_back(e); });
    sort_for_output(out);
    return out;
  }

  std::optional<count_type> min_count() const {
    if (shallow_.empty()) return std::nullopt;
    return shallow_.begin()->first.count;
  }

  /// One line per node, depth-indented: itemset TAB count TAB err TAB birth.
  std::string dump() const {
    std::ostringstream os;
    for_each_preorder([&](const node& n, std::size_t d) {
      os << std::string(2 * (d - 1), ' ') << to_string(n.e.alpha) << '\t'
         << n.e.count << '\t' << n.e.err << '\t' << n.birth << '\n';
    });
    return os.str();
  }

  /// Incremental intersection of the whole tree with transaction `t`.
  void intersect(const itemset& t, timestamp now, count_type delta,
                 step_stats& stats) {
    now_ = now;
    ++epoch_;
    fresh_.clear();
    stats_ = &stats;
    delta_ = delta;
    update(root, t, t);
    stats_ = nullptr;
    settle_fresh();
    stats.peak_size = std::max(stats.peak_size, size_);
  }

  /// Attaches <t, c_r + 1, err_r> under the representative r of `t` (the
  /// highest-count stored superset, smallest on ties), or <t, delta + 1,
  /// delta> under the root when `t` has no stored superset.
  const node& insert_entry(const itemset& t, count_type delta, timestamp now) {
    if (index_.contains(t)) throw std::invalid_argument("itemset already stored");
    now_ = now;
    node_id best = root;
    std::vector<node_id> stack;
    for (node_id c = nodes_[root].first_child; c != nil; c = nodes_[c].next)
      stack.push_back(c);
    while (!stack.empty()) {
      const node_id x = stack.back();
      stack.pop_back();
      if (!is_subset(t, nodes_[x].e.alpha)) continue;
      if (best == root || nodes_[x].e.count > nodes_[best].e.count ||
          (nodes_[x].e.count == nodes_[best].e.count &&
           nodes_[x].e.alpha.size() < nodes_[best].e.alpha.size()))
        best = x;
      for (node_id c = nodes_[x].first_child; c != nil; c = nodes_[c].next)
        stack.push_back(c);
    }
    fresh_.clear();
    const node_id id = create(t, best, delta);
    settle_fresh();
    return nodes_[id];
  }

  /// Removes shallowest minimum nodes while `keep(min_count, size)` holds,
  /// splicing each victim's children into the root layer in its place.
  /// Returns the running maximum error.
  template <class Keep>
  count_type delete_minima(Keep&& keep, count_type delta, step_stats& stats) {
    while (!shallow_.empty() && keep(shallow_.begin()->first.count, size_)) {
      const auto [key, victim] = *shallow_.begin();
      delta = std::max(delta, key.count);
      remove_root_child(victim);
      ++stats.deleted;
    }
    return delta;
  }

  /// One post-order pass removing every child that is delta_n-covered by its
  /// parent (count_child <= count_parent - err_parent + delta_n). The parent
  /// absorbs the child's count and the grandchildren move up to the parent.
  /// Returns the number of removed nodes.
  std::size_t precompress(count_type delta_n) {
    std::size_t removed = 0;
    precompress_below(root, delta_n, removed);
    return removed;
  }

  /// Checks the structural invariants; returns an empty string when they
  /// hold, otherwise a description of the first violation.
  std::string check_invariants() const {
    std::vector<std::pair<node_id, std::size_t>> order;  // pre-order, with subtree end
    std::vector<node_id> pre;
    std::unordered_map<node_id, std::size_t> pos;
    for_each_preorder([&](const node& n, std::size_t) {
      const node_id id = static_cast<node_id>(&n - nodes_.data());
      pos[id] = pre.size();
      pre.push_back(id);
    });
    if (pre.size() != size_) return "size mismatch";
    std::vector<std::size_t> end(pre.size());
    for (std::size_t i = pre.size(); i-- > 0;) {
      std::size_t e = i + 1;
      for (node_id c = nodes_[pre[i]].first_child; c != nil; c = nodes_[c].next)
        e = std::max(e, end[pos[c]]);
      end[i] = e;
    }
    std::size_t shallow = 0;
    for (node_id c = nodes_[root].first_child; c != nil; c = nodes_[c].next) ++shallow;
    if (shallow != shallow_.size()) return "shallow heap out of sync";
    for (std::size_t i = 0; i < pre.size(); ++i) {
      const node& x = nodes_[pre[i]];
      if (x.parent != root) {
        const node& p = nodes_[x.parent];
        if (!is_subset(x.e.alpha, p.e.alpha) || x.e.alpha == p.e.alpha)
          return "child not a proper subset of parent";
        if (x.e.count < p.e.count) return "child count below parent count";
      }
      // Subsets of x must be descendants or precede x.
      for (std::size_t j = end[i]; j < pre.size(); ++j)
        if (is_subset(nodes_[pre[j]].e.alpha, x.e.alpha))
          return "subset placed after its superset's subtree";
    }
    return {};
  }

 private:
  static std::string show(const itemset& s) {
    std::ostringstream os;
    os << s;
    return os.str();
  }

  eviction_key key_of(node_id x) const {
    const node& n = nodes_[x];
    return eviction_key{n.e.count, n.e.alpha.size(), n.created, n.rank};
  }

  void touch(node_id x) {
    assert(nodes_[x].epoch != epoch_ && "node visited twice in one update");
    nodes_[x].epoch = epoch_;
  }

  void increment(node_id x) {
    const bool shallow = nodes_[x].parent == root && !is_fresh(x);
    if (shallow) shallow_.erase({key_of(x), x});
    ++nodes_[x].e.count;
    if (shallow) shallow_.emplace(key_of(x), x);
  }

  bool is_fresh(node_id x) const { return nodes_[x].created == now_ && nodes_[x].epoch == fresh_epoch_mark; }

  // Recursive update of the children of x. `mask` is what child itemsets are
  // intersected with; `target` is alpha_x ∩ t (t itself at the root).
  void update(node_id x, const itemset& mask, const itemset& target) {
    step_stats& st = *stats_;
    for (node_id y = nodes_[x].first_child; y != nil; y = nodes_[y].next) {
      const itemset& ay = nodes_[y].e.alpha;
      std::size_t steps = 0;
      auto meet = parasol::intersect(ay, mask, &steps);
      touch(y);
      ++st.visits;
      ++st.intersections;
      st.max_merge_steps = std::max(st.max_merge_steps, steps);
      if (meet && meet->size() == ay.size()) {
        if (pruning_.dis) {
          const std::size_t n = increment_subtree(y);
          ++st.dis;
          if (trace_) trace_->push_back("DIS " + show(ay) + " +" + std::to_string(n));
        } else {
          increment(y);
          if (trace_) trace_->push_back("inc " + show(ay));
          update(y, ay, ay);
        }
      } else if (meet) {
        if (trace_) trace_->push_back("visit " + show(ay) + " -> " + show(*meet));
        update(y, pruning_.masking ? *meet : mask, *meet);
      } else if (!pruning_.dus) {
        update(y, mask, itemset{});
      } else {
        ++st.dus;
        if (trace_) trace_->push_back("DUS " + show(ay));
      }
      if (pruning_.sus && meet && !target.empty() && meet->size() == target.size()) {
        if (nodes_[y].next != nil) {
          ++st.sus;
          if (trace_) {
            std::string skipped;
            for (node_id z = nodes_[y].next; z != nil; z = nodes_[z].next)
              skipped += " " + show(nodes_[z].e.alpha);
            trace_->push_back("SUS after " + show(ay) + " skip" + skipped);
          }
        }
        break;
      }
    }
    if (target.empty()) return;
    if (index_.contains(target)) {
      if (trace_) trace_->push_back("exists " + show(target));
      return;
    }
    const node_id id = create(target, x, delta_);
    if (trace_)
      trace_->push_back("create " + show(target) + " under " +
                        (x == root ? std::string("root") : show(nodes_[x].e.alpha)) +
                        " count " + std::to_string(nodes_[id].e.count) + " err " +
                        std::to_string(nodes_[id].e.err));
  }

  std::size_t increment_subtree(node_id y) {
    std::size_t n = 0;
    std::vector<node_id> stack{y};
    while (!stack.empty()) {
      const node_id z = stack.back();
      stack.pop_back();
      if (z != y) {
        touch(z);
        ++stats_->dis_increments;
      }
      increment(z);
      ++n;
      for (node_id c = nodes_[z].first_child; c != nil; c = nodes_[c].next)
        stack.push_back(c);
    }
    return n;
  }

  node_id allocate() {
    if (!free_.empty()) {
      const node_id id = free_.back();
      free_.pop_back();
      nodes_[id] = node{};
      return id;
    }
    nodes_.emplace_back();
    return static_cast<node_id>(nodes_.size() - 1);
  }

  node_id create(const itemset& alpha, node_id parent, count_type delta) {
    const node_id id = allocate();
    node& n = nodes_[id];
    const node& p = nodes_[parent];
    n.e.alpha = alpha;
    n.e.count = (parent == root ? delta : p.e.count) + 1;
    n.e.err = parent == root ? delta : p.e.err;
    n.created = now_;
    n.birth = parent == root ? now_ : p.birth;
    n.epoch = fresh_epoch_mark;
    n.alive = true;
    append_child(parent, id);
    index_.emplace(alpha, id);
    fresh_.push_back(id);
    ++size_;
    if (stats_) ++stats_->created;
    return id;
  }

  // Ranks this step's new nodes lexicographically and registers the
  // root-level ones with the shallow heap.
  void settle_fresh() {
    std::sort(fresh_.begin(), fresh_.end(), [&](node_id a, node_id b) {
      return nodes_[a].e.alpha < nodes_[b].e.alpha;
    });
    std::size_t rank = 0;
    for (node_id id : fresh_) {
      nodes_[id].rank = rank++;
      nodes_[id].epoch = epoch_;
      if (nodes_[id].parent == root) shallow_.emplace(key_of(id), id);
    }
    fresh_.clear();
  }

  void append_child(node_id parent, node_id c) {
    node& p = nodes_[parent];
    nodes_[c].parent = parent;
    nodes_[c].prev = p.last_child;
    nodes_[c].next = nil;
    if (p.last_child != nil)
      nodes_[p.last_child].next = c;
    else
      p.first_child = c;
    p.last_child = c;
  }

  // Replaces x in its sibling list by its children, reparented to x's parent.
  void splice_out(node_id x) {
    node& n = nodes_[x];
    const node_id parent = n.parent;
    for (node_id c = n.first_child; c != nil; c = nodes_[c].next) nodes_[c].parent = parent;
    const node_id before = n.prev, after = n.next;
    node_id first = after, last = before;
    if (n.first_child != nil) {
      first = n.first_child;
      last = n.last_child;
      nodes_[first].prev = before;
      nodes_[last].next = after;
    }
    if (before != nil) nodes_[before].next = first; else nodes_[parent].first_child = first;
    if (after != nil) nodes_[after].prev = last; else nodes_[parent].last_child = last;
    index_.erase(n.e.alpha);
    n = node{};
    free_.push_back(x);
    --size_;
  }

  void remove_root_child(node_id x) {
    shallow_.erase({key_of(x), x});
    std::vector<node_id> kids;
    for (node_id c = nodes_[x].first_child; c != nil; c = nodes_[c].next) kids.push_back(c);
    splice_out(x);
    for (node_id c : kids) shallow_.emplace(key_of(c), c);
  }

  void precompress_below(node_id x, count_type delta_n, std::size_t& removed) {
    node_id c = nodes_[x].first_child;
    while (c != nil) {
      precompress_below(c, delta_n, removed);
      const node_id next = nodes_[c].next;
      if (x != root) {
        node& p = nodes_[x];
        const node& ch = nodes_[c];
        if (ch.e.count + p.e.err <= p.e.count + delta_n) {
          const bool shallow = p.parent == root;
          if (shallow) shallow_.erase({key_of(x), x});
          // Never lower the parent: an earlier sibling may have raised it.
          if (ch.e.count > p.e.count) {
            p.e.err = p.e.err + ch.e.count - p.e.count;
            p.e.count = ch.e.count;
          }
          if (shallow) shallow_.emplace(key_of(x), x);
          splice_out(c);
          ++removed;
        }
      }
      c = next;
    }
  }

  static constexpr std::uint64_t fresh_epoch_mark = std::numeric_limits<std::uint64_t>::max();

  std::vector<node> nodes_;
  std::vector<node_id> free_;
  std::unordered_map<itemset, node_id, itemset_hash> index_;
  std::set<std::pair<eviction_key, node_id>> shallow_;
  std::vector<node_id> fresh_;
  std::size_t size_ = 0;
  timestamp now_ = 0;
  std::uint64_t epoch_ = 0;
  count_type delta_ = 0;
  step_stats* stats_ = nullptr;
  std::vector<std::string>* trace_ = nullptr;
  pruning pruning_{};
};

}  // namespace parasol
