#include "mbs/neighborhood.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace mbs {

namespace {

constexpr std::size_t kMaxProngsPerBranch = 10'000'000;

// Union-find with parity relative to the parent ("flip or not").
class ParityDsu {
public:
    explicit ParityDsu(std::size_t n) : parent_(n), parity_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::pair<std::size_t, int> find(std::size_t v) {
        if (parent_[v] == v) return {v, 0};
        auto [root, p] = find(parent_[v]);
        parent_[v] = root;
        parity_[v] ^= p;
        return {root, parity_[v]};
    }

    /// Enforce parity(a) xor parity(b) == rel; false on contradiction.
    bool unite(std::size_t a, std::size_t b, int rel) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == rel;
        parent_[ra] = rb;
        parity_[ra] = pa ^ pb ^ rel;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> parity_;
};

std::uint64_t factorial_u64(std::size_t n) {
    // Valid for n <= 20; callers guarantee it via the budget check.
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

// Lexicographic unranking of a permutation of `elems` (Lehmer code).
std::vector<std::size_t> unrank_permutation(std::vector<std::size_t> elems, std::uint64_t rank) {
    std::vector<std::size_t> out;
    out.reserve(elems.size());
    while (!elems.empty()) {
        std::uint64_t f = factorial_u64(elems.size() - 1);
        std::size_t pick = static_cast<std::size_t>(rank / f);
        rank %= f;
        out.push_back(elems[pick]);
        elems.erase(elems.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return out;
}

SideNode face_ccw(const Prong& p) { return {p.sector, p.sign}; }
SideNode face_cw(const Prong& p) { return {p.sector, -p.sign}; }

std::size_t node_index(const SideNode& n) {
    return 2 * n.sector + (n.side > 0 ? 0 : 1);
}

}  // namespace

std::vector<Prong> prongs_at(const MultibranchedSurface& x, std::size_t branch) {
    if (branch >= x.branches.size()) throw std::out_of_range("branch index out of range");
    Int k = prong_count(x, branch);
    if (k > kMaxProngsPerBranch)
        throw Error("branch '" + x.branches[branch].id + "' has too many prongs to enumerate");
    std::vector<Prong> out;
    out.reserve(static_cast<std::size_t>(k));
    for (std::size_t s = 0; s < x.sectors.size(); ++s) {
        const Sector& sec = x.sectors[s];
        for (std::size_t ai = 0; ai < sec.boundary.size(); ++ai) {
            const Attachment& a = sec.boundary[ai];
            if (a.branch != branch) continue;
            const int sign = a.degree > 0 ? 1 : -1;
            const unsigned long long sheets =
                a.degree > 0 ? static_cast<unsigned long long>(a.degree)
                             : static_cast<unsigned long long>(-(a.degree + 1)) + 1;
            for (unsigned long long sh = 0; sh < sheets; ++sh)
                out.push_back({branch, s, ai, static_cast<std::size_t>(sh), sign});
        }
    }
    return out;
}

std::vector<Prong> prongs_at(const MultibranchedSurface& x, std::string_view branch_id) {
    return prongs_at(x, x.branch_index(branch_id));
}

Int prong_count(const MultibranchedSurface& x, std::size_t branch) {
    if (branch >= x.branches.size()) throw std::out_of_range("branch index out of range");
    Int k = 0;
    for (const Sector& s : x.sectors)
        for (const Attachment& a : s.boundary)
            if (a.branch == branch) k += a.degree > 0 ? Int(a.degree) : Int(-Int(a.degree));
    return k;
}

Int assignment_count(const MultibranchedSurface& x) {
    Int total = 1;
    for (std::size_t b = 0; b < x.branches.size(); ++b) {
        Int k = prong_count(x, b);
        for (Int i = 2; i < k; ++i) total *= i;  // (k-1)!
    }
    return total;
}

AssignmentEnumerator::AssignmentEnumerator(const MultibranchedSurface& x) : x_(&x), total_(1) {
    prongs_.reserve(x.branches.size());
    tails_.reserve(x.branches.size());
    counts_.reserve(x.branches.size());
    for (std::size_t b = 0; b < x.branches.size(); ++b) {
        prongs_.push_back(prongs_at(x, b));
        const std::size_t k = prongs_.back().size();
        std::vector<std::size_t> tail(k > 0 ? k - 1 : 0);
        std::iota(tail.begin(), tail.end(), std::size_t{1});
        tails_.push_back(std::move(tail));
        Int c = 1;
        for (Int i = 2; i + 1 <= Int(k); ++i) c *= i;
        total_ *= c;
        counts_.push_back(c <= std::numeric_limits<std::uint64_t>::max()
                              ? static_cast<std::uint64_t>(c)
                              : 0);  // 0 marks "does not fit"; seek() rejects it
    }
    done_ = (total_ == 0);  // cannot happen: every branch has >= 1 prong
}

bool AssignmentEnumerator::next(CyclicAssignment& out) {
    if (done_) return false;
    out.cycles.assign(prongs_.size(), {});
    for (std::size_t b = 0; b < prongs_.size(); ++b) {
        std::vector<Prong>& cycle = out.cycles[b];
        cycle.reserve(prongs_[b].size());
        cycle.push_back(prongs_[b][0]);
        for (std::size_t idx : tails_[b]) cycle.push_back(prongs_[b][idx]);
    }
    // Odometer step: branch 0 varies fastest.
    for (std::size_t b = 0; b < tails_.size(); ++b) {
        if (std::next_permutation(tails_[b].begin(), tails_[b].end())) return true;
        // wrapped to the identity permutation; carry into the next branch
    }
    done_ = true;
    return true;
}

void AssignmentEnumerator::seek(std::uint64_t rank) {
    for (std::size_t b = 0; b < tails_.size(); ++b) {
        if (counts_[b] == 0) throw Error("assignment rank space exceeds 64 bits");
        std::uint64_t digit = rank % counts_[b];
        rank /= counts_[b];
        std::vector<std::size_t> elems(tails_[b].size());
        std::iota(elems.begin(), elems.end(), std::size_t{1});
        tails_[b] = unrank_permutation(std::move(elems), digit);
    }
    done_ = false;
}

std::vector<AnnulusJoin> annulus_joins(const MultibranchedSurface& x, const CyclicAssignment& a) {
    if (a.cycles.size() != x.branches.size())
        throw std::invalid_argument("assignment does not cover every branch");
    std::vector<AnnulusJoin> joins;
    for (std::size_t b = 0; b < a.cycles.size(); ++b) {
        const std::vector<Prong>& cycle = a.cycles[b];
        const std::size_t k = cycle.size();
        for (std::size_t i = 0; i < k; ++i) {
            const Prong& p = cycle[i];
            const Prong& q = cycle[(i + 1) % k];
            SideNode na = face_ccw(p);
            SideNode nb = face_cw(q);
            joins.push_back({b, na, nb, na.side * p.sign, nb.side * q.sign});
        }
    }
    return joins;
}

DualGraph glue(const MultibranchedSurface& x, const CyclicAssignment& a) {
    const std::size_t m = x.sectors.size();
    ParityDsu dsu(2 * m);
    for (const AnnulusJoin& j : annulus_joins(x, a)) {
        // The glued circles must wind the branch in opposite directions; a
        // violation means the face convention itself has been broken.
        const int rel = (j.dir_a == -j.dir_b) ? 0 : 1;
        if (!dsu.unite(node_index(j.a), node_index(j.b), rel))
            throw std::logic_error("orientation parity violated at branch '" +
                                   x.branches[j.branch].id + "': a glued surface is not orientable");
    }

    // Components of side nodes, members in (sector, +, -) order.
    std::map<std::size_t, std::vector<SideNode>> comps;
    for (std::size_t s = 0; s < m; ++s)
        for (int side : {+1, -1})
            comps[dsu.find(node_index({s, side})).first].push_back({s, side});
    std::vector<std::vector<SideNode>> vertices;
    vertices.reserve(comps.size());
    for (auto& [root, members] : comps) {
        std::sort(members.begin(), members.end(), [](const SideNode& l, const SideNode& r) {
            return std::pair(l.sector, l.side < 0) < std::pair(r.sector, r.side < 0);
        });
        vertices.push_back(std::move(members));
    }
    std::sort(vertices.begin(), vertices.end(),
              [](const std::vector<SideNode>& l, const std::vector<SideNode>& r) {
                  return std::lexicographical_compare(
                      l.begin(), l.end(), r.begin(), r.end(),
                      [](const SideNode& a, const SideNode& b) {
                          return std::pair(a.sector, a.side < 0) < std::pair(b.sector, b.side < 0);
                      });
              });

    std::vector<std::size_t> vertex_of(2 * m);
    for (std::size_t v = 0; v < vertices.size(); ++v)
        for (const SideNode& n : vertices[v]) vertex_of[node_index(n)] = v;

    DualGraph g;
    g.vertices = std::move(vertices);
    g.edges.reserve(m);
    for (std::size_t s = 0; s < m; ++s)
        g.edges.push_back({s, vertex_of[node_index({s, -1})], vertex_of[node_index({s, +1})]});

    ParityDsu comp_dsu(g.vertices.size());
    for (const DualGraph::Edge& e : g.edges) comp_dsu.unite(e.tail, e.head, 0);
    std::vector<char> root_seen(g.vertices.size(), 0);
    g.components = 0;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        std::size_t r = comp_dsu.find(v).first;
        if (!root_seen[r]) {
            root_seen[r] = 1;
            ++g.components;
        }
    }
    g.betti = g.edges.size() + g.components - g.vertices.size();

    std::ostringstream key;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        if (v) key << '|';
        key << '{';
        for (std::size_t i = 0; i < g.vertices[v].size(); ++i) {
            if (i) key << ',';
            key << side_node_token(x, g.vertices[v][i]);
        }
        key << '}';
    }
    g.key = key.str();
    return g;
}

namespace {

using GraphMap = std::map<std::string, DistinctDualGraph>;

void merge_entry(GraphMap& into, DistinctDualGraph&& entry) {
    auto [it, inserted] = into.try_emplace(entry.graph.key, std::move(entry));
    if (!inserted) {
        it->second.multiplicity += entry.multiplicity;
        if (entry.first_rank < it->second.first_rank) {
            it->second.first_rank = entry.first_rank;
            it->second.representative = std::move(entry.representative);
        }
    }
}

void enumerate_range(const MultibranchedSurface& x, std::uint64_t begin, std::uint64_t end,
                     GraphMap& out) {
    AssignmentEnumerator en(x);
    if (begin > 0) en.seek(begin);
    CyclicAssignment a;
    for (std::uint64_t rank = begin; rank < end; ++rank) {
        if (!en.next(a)) throw std::logic_error("assignment enumeration ended early");
        DualGraph g = glue(x, a);
        auto it = out.find(g.key);
        if (it == out.end())
            out.emplace(g.key, DistinctDualGraph{std::move(g), a, rank, 1});
        else
            ++it->second.multiplicity;
    }
}

}  // namespace

DualGraphEnumeration enumerate_dual_graphs(const MultibranchedSurface& x,
                                           const EnumerationOptions& opts) {
    // Budget check before any prong materialization: abort as soon as the
    // partial product of (k-1)! passes the cap.
    Int total = 1;
    for (std::size_t b = 0; b < x.branches.size(); ++b) {
        Int k = prong_count(x, b);
        for (Int i = 2; i < k && total <= opts.budget; ++i) total *= i;
        if (total > opts.budget)
            throw BudgetExceeded("assignment count exceeds budget of " +
                                     std::to_string(opts.budget) + " (at least " + total.str() +
                                     " assignments)",
                                 opts.budget);
    }
    const std::uint64_t total64 = static_cast<std::uint64_t>(total);

    GraphMap merged;
    const unsigned threads =
        std::max<unsigned>(1, std::min<std::uint64_t>(opts.threads, total64));
    if (threads == 1) {
        enumerate_range(x, 0, total64, merged);
    } else {
        std::vector<GraphMap> partial(threads);
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (total64 + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t begin = std::min<std::uint64_t>(t * chunk, total64);
            const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, total64);
            pool.emplace_back(
                [&x, begin, end, &slot = partial[t]] { enumerate_range(x, begin, end, slot); });
        }
        for (std::thread& th : pool) th.join();
        for (GraphMap& pm : partial)
            for (auto& [key, entry] : pm) merge_entry(merged, std::move(entry));
    }

    DualGraphEnumeration out;
    out.total_assignments = total;
    out.graphs.reserve(merged.size());
    for (auto& [key, entry] : merged) out.graphs.push_back(std::move(entry));
    return out;
}

std::string side_node_token(const MultibranchedSurface& x, const SideNode& n) {
    return x.sectors[n.sector].id + (n.side > 0 ? "+" : "-");
}

std::string prong_token(const MultibranchedSurface& x, const Prong& p) {
    std::ostringstream os;
    os << x.sectors[p.sector].id << '[' << p.attachment << '.' << p.sheet << ']'
       << (p.sign > 0 ? '+' : '-');
    return os.str();
}

void write_dot(const MultibranchedSurface& x, const DualGraph& g, std::ostream& os) {
    os << "digraph dual {\n";
    os << "  // key: " << g.key << "\n";
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        os << "  v" << v << " [label=\"{";
        for (std::size_t i = 0; i < g.vertices[v].size(); ++i) {
            if (i) os << ',';
            os << side_node_token(x, g.vertices[v][i]);
        }
        os << "}\"];\n";
    }
    for (const DualGraph::Edge& e : g.edges)
        os << "  v" << e.tail << " -> v" << e.head << " [label=\"" << x.sectors[e.sector].id
           << "\"];\n";
    os << "}\n";
}

}  // namespace mbs
