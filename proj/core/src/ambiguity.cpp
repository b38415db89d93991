// Pairwise collision search between templates.
//
// Two templates collide over a partition when some binding of each renders
// the same premise and hypothesis. Positions are aligned one to one, so the
// question reduces to a small constraint problem: slot variables, unary
// constraints from literals, surface-equality constraints between aligned
// slots, and distinctness within each template.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "tnli/registry.hpp"

namespace tnli {
namespace {

constexpr std::size_t kSolutionCap = 256;
constexpr std::uint64_t kNodeBudget = 50'000'000;

struct Var {
  int side;  // 0 = first template, 1 = second
  const SlotSpec* spec;
};

// A form-level equality between two variables (possibly the same one).
struct SurfaceEq {
  std::size_t a;
  Feature fa;
  std::size_t b;
  Feature fb;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

class Searcher {
 public:
  Searcher(const Lexicon& lexicon, Partition partition) : lex_(lexicon), partition_(partition) {}

  // Calls `visit` with each pair of colliding bindings until it returns
  // false. Returns false when the node budget ran out.
  bool run(const Template& a, const Template& b,
           const std::function<bool(const Binding&, const Binding&)>& visit);

 private:
  bool injective(PosClass c, Feature f);
  const std::string* surface(LexemeId id, Feature f) const { return lex_.entry(id).form(f); }

  const Lexicon& lex_;
  Partition partition_;
  std::map<std::pair<PosClass, Feature>, bool> injective_;
};

bool Searcher::injective(PosClass c, Feature f) {
  auto [it, fresh] = injective_.try_emplace({c, f}, true);
  if (fresh) {
    std::set<std::string> seen;
    for (LexemeId id : lex_.members(c, partition_)) {
      const auto* s = surface(id, f);
      if (s != nullptr && !seen.insert(*s).second) it->second = false;
    }
  }
  return it->second;
}

bool Searcher::run(const Template& a, const Template& b,
                   const std::function<bool(const Binding&, const Binding&)>& visit) {
  if (a.premise.elements.size() != b.premise.elements.size() ||
      a.hypothesis.elements.size() != b.hypothesis.elements.size()) {
    return true;
  }

  std::vector<Var> vars;
  std::map<std::string, std::size_t> index[2];
  for (int side = 0; side < 2; ++side) {
    for (const auto& spec : (side == 0 ? a : b).slots) {
      index[side][spec.name] = vars.size();
      vars.push_back({side, &spec});
    }
  }
  const std::size_t n = vars.size();

  // Unary domains, initially the whole class within the partition.
  std::vector<std::vector<LexemeId>> domain(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto m = lex_.members(vars[v].spec->pos_class, partition_);
    domain[v].assign(m.begin(), m.end());
  }

  UnionFind uf(n);
  std::vector<SurfaceEq> eqs;
  auto restrict_to = [&](std::size_t v, Feature f, const std::string& literal) {
    std::erase_if(domain[v], [&](LexemeId id) {
      const auto* s = surface(id, f);
      return s == nullptr || *s != literal;
    });
  };

  for (int part = 0; part < 2; ++part) {
    const auto& ea = (part == 0 ? a.premise : a.hypothesis).elements;
    const auto& eb = (part == 0 ? b.premise : b.hypothesis).elements;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      const auto* la = std::get_if<std::string>(&ea[i]);
      const auto* lb = std::get_if<std::string>(&eb[i]);
      if (la && lb) {
        if (*la != *lb) return true;
      } else if (la || lb) {
        const auto& ref = std::get<SlotRef>(la ? eb[i] : ea[i]);
        const std::size_t v = index[la ? 1 : 0].at(ref.slot);
        restrict_to(v, ref.feature, la ? *la : *lb);
        if (domain[v].empty()) return true;
      } else {
        const auto& ra = std::get<SlotRef>(ea[i]);
        const auto& rb = std::get<SlotRef>(eb[i]);
        const std::size_t va = index[0].at(ra.slot);
        const std::size_t vb = index[1].at(rb.slot);
        const PosClass ca = vars[va].spec->pos_class;
        if (ca == vars[vb].spec->pos_class && ra.feature == rb.feature && injective(ca, ra.feature)) {
          uf.unite(va, vb);
        } else {
          eqs.push_back({va, ra.feature, vb, rb.feature});
        }
      }
    }
  }

  // Collapse unified variables into groups, numbered by first aligned
  // position so that constrained neighbours are assigned consecutively.
  std::vector<std::size_t> order;
  for (int part = 0; part < 2; ++part) {
    const auto& ea = (part == 0 ? a.premise : a.hypothesis).elements;
    const auto& eb = (part == 0 ? b.premise : b.hypothesis).elements;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      if (const auto* r = std::get_if<SlotRef>(&ea[i])) order.push_back(index[0].at(r->slot));
      if (const auto* r = std::get_if<SlotRef>(&eb[i])) order.push_back(index[1].at(r->slot));
    }
  }
  for (std::size_t v = 0; v < n; ++v) order.push_back(v);
  std::vector<std::size_t> group_of(n);
  std::vector<std::size_t> roots;
  std::vector<bool> placed(n, false);
  for (std::size_t v : order) {
    if (placed[v]) continue;
    placed[v] = true;
    const std::size_t r = uf.find(v);
    auto it = std::find(roots.begin(), roots.end(), r);
    group_of[v] = static_cast<std::size_t>(it - roots.begin());
    if (it == roots.end()) roots.push_back(r);
  }
  const std::size_t g = roots.size();
  std::vector<std::vector<LexemeId>> gdomain(g);
  std::vector<bool> seeded(g, false);
  for (std::size_t v = 0; v < n; ++v) {
    auto& d = gdomain[group_of[v]];
    if (!seeded[group_of[v]]) {
      d = domain[v];
      seeded[group_of[v]] = true;
      continue;
    }
    std::vector<LexemeId> keep;
    for (LexemeId id : d) {
      if (std::find(domain[v].begin(), domain[v].end(), id) != domain[v].end()) keep.push_back(id);
    }
    d = std::move(keep);
  }

  // Distinctness: same-template slots of one class must differ.
  std::vector<std::pair<std::size_t, std::size_t>> distinct;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (vars[x].side != vars[y].side || vars[x].spec->pos_class != vars[y].spec->pos_class) continue;
      if (group_of[x] == group_of[y]) return true;
      distinct.emplace_back(std::min(group_of[x], group_of[y]), std::max(group_of[x], group_of[y]));
    }
  }

  // Binary surface equalities; ones inside a group become unary filters.
  struct GroupEq {
    std::size_t ga;
    Feature fa;
    std::size_t gb;
    Feature fb;
  };
  std::vector<GroupEq> geqs;
  for (const auto& e : eqs) {
    const std::size_t ga = group_of[e.a], gb = group_of[e.b];
    if (ga == gb) {
      std::erase_if(gdomain[ga], [&](LexemeId id) {
        const auto* sa = surface(id, e.fa);
        const auto* sb = surface(id, e.fb);
        return sa == nullptr || sb == nullptr || *sa != *sb;
      });
    } else {
      geqs.push_back({ga, e.fa, gb, e.fb});
    }
  }
  // Arc consistency on the equalities: drop values without a partner.
  auto same_surface = [&](LexemeId x, Feature fx, LexemeId y, Feature fy) {
    const auto* sx = surface(x, fx);
    const auto* sy = surface(y, fy);
    return sx != nullptr && sy != nullptr && *sx == *sy;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : geqs) {
      for (int dir = 0; dir < 2; ++dir) {
        auto& from = gdomain[dir == 0 ? e.ga : e.gb];
        const auto& to = gdomain[dir == 0 ? e.gb : e.ga];
        const Feature ff = dir == 0 ? e.fa : e.fb;
        const Feature ft = dir == 0 ? e.fb : e.fa;
        const auto before = from.size();
        std::erase_if(from, [&](LexemeId x) {
          return std::none_of(to.begin(), to.end(), [&](LexemeId y) { return same_surface(x, ff, y, ft); });
        });
        if (from.empty()) return true;
        changed = changed || from.size() != before;
      }
    }
  }
  for (const auto& d : gdomain) {
    if (d.empty()) return true;
  }

  // Backtracking in group order; a constraint is checked once both ends
  // are assigned.
  std::vector<LexemeId> value(g);
  std::uint64_t nodes = 0;
  bool stop = false, budget_out = false;

  auto consistent = [&](std::size_t k) {
    for (const auto& [x, y] : distinct) {
      if (y == k && value[x] == value[k]) return false;
    }
    for (const auto& e : geqs) {
      const std::size_t hi = std::max(e.ga, e.gb);
      if (hi != k) continue;
      const auto* sa = surface(value[e.ga], e.fa);
      const auto* sb = surface(value[e.gb], e.fb);
      if (sa == nullptr || sb == nullptr || *sa != *sb) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> assign = [&](std::size_t k) {
    if (stop) return;
    if (k == g) {
      Binding ba, bb;
      for (std::size_t v = 0; v < n; ++v) {
        (vars[v].side == 0 ? ba : bb).assignments.emplace(vars[v].spec->name, value[group_of[v]]);
      }
      if (!visit(ba, bb)) stop = true;
      return;
    }
    for (LexemeId id : gdomain[k]) {
      if (++nodes > kNodeBudget) {
        stop = budget_out = true;
        return;
      }
      value[k] = id;
      if (consistent(k)) assign(k + 1);
      if (stop) return;
    }
  };
  assign(0);
  return !budget_out;
}

}  // namespace

std::vector<Issue> find_ambiguities(std::span<const Template> templates, const Lexicon& lexicon) {
  std::vector<Issue> issues;
  std::set<std::pair<std::size_t, std::size_t>> reported;
  for (Partition p : {Partition::ind, Partition::ood}) {
    Searcher searcher(lexicon, p);
    for (std::size_t i = 0; i < templates.size(); ++i) {
      for (std::size_t j = i + 1; j < templates.size(); ++j) {
        if (reported.count({i, j})) continue;
        const Template& a = templates[i];
        const Template& b = templates[j];
        std::size_t seen = 0;
        std::optional<std::string> problem;
        const bool finished = searcher.run(a, b, [&](const Binding& ba, const Binding& bb) {
          const Rendering ra = render(a, ba, lexicon);
          const Rendering rb = render(b, bb, lexicon);
          if (a.label != b.label) {
            problem = "'" + ra.premise + "' / '" + ra.hypothesis + "' matches both with different labels";
          } else if (ra.explanation != rb.explanation) {
            problem = "'" + ra.premise + "' / '" + ra.hypothesis +
                      "' matches both with different explanations";
          }
          return !problem && ++seen < kSolutionCap;
        });
        if (!finished && !problem) {
          problem = "collision search exceeded its budget; treat the pair as ambiguous";
        }
        if (problem) {
          reported.insert({i, j});
          issues.push_back({a.id + "," + b.id, "ambiguity",
                            *problem + " (" + std::string(to_string(p)) + " vocabulary)"});
        }
      }
    }
  }
  return issues;
}

}  // namespace tnli
