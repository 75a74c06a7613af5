#ifndef MBS_NEIGHBORHOOD_HPP
#define MBS_NEIGHBORHOOD_HPP

#include "mbs/surface.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mbs {

/// One local sheet of a sector at a branch. An attachment of degree d
/// contributes |d| sheets of sign sgn(d).
struct Prong {
    std::size_t branch;
    std::size_t sector;
    std::size_t attachment;  // position in the sector's boundary list
    std::size_t sheet;       // in [0, |degree|)
    int sign;                // +1 or -1
    auto operator<=>(const Prong&) const = default;
};

/// One of the two parallel copies of a sector (sector x {+1} / x {-1}).
struct SideNode {
    std::size_t sector;
    int side;  // +1 or -1
    auto operator<=>(const SideNode&) const = default;
};

/// A cyclic order of all prongs at every branch, stored linearly with the
/// least prong first (rotation representative).
struct CyclicAssignment {
    std::vector<std::vector<Prong>> cycles;  // indexed by branch declaration order
    bool operator==(const CyclicAssignment&) const = default;
};

/// Annulus gluing produced by two cyclically consecutive prongs: the
/// counterclockwise face of `a`'s prong meets the clockwise face of `b`'s.
/// `dir_*` is the winding direction of the glued boundary circle around the
/// branch under the copy's own orientation (+ copy as the sector, - copy
/// reversed); a join is orientation-consistent iff the directions oppose.
struct AnnulusJoin {
    std::size_t branch;
    SideNode a, b;
    int dir_a, dir_b;
};

/// Directed multigraph on the glued closed surfaces: one vertex per connected
/// component of side nodes, one edge per sector from the component of the
/// minus copy to the component of the plus copy. Loops and parallel edges are
/// meaningful. Stored in canonical form (members sorted, vertices sorted).
struct DualGraph {
    struct Edge {
        std::size_t sector;
        std::size_t tail, head;
        bool operator==(const Edge&) const = default;
    };
    std::vector<std::vector<SideNode>> vertices;
    std::vector<Edge> edges;      // one per sector, declaration order
    std::size_t components = 0;   // of the graph itself
    std::size_t betti = 0;        // edges - vertices + components
    std::string key;              // canonical dedup key, e.g. "{e+,e-}" or "{e+}|{e-}"
    bool operator==(const DualGraph&) const = default;
};

/// All prongs at a branch in deterministic order: by sector declaration,
/// then attachment index, then sheet index.
std::vector<Prong> prongs_at(const MultibranchedSurface& x, std::size_t branch);
std::vector<Prong> prongs_at(const MultibranchedSurface& x, std::string_view branch_id);

/// Number of prongs at the branch, i.e. the sum of |degree| over attachments.
Int prong_count(const MultibranchedSurface& x, std::size_t branch);

/// Total number of cyclic assignments: the product over branches of
/// (prong count - 1)!.
Int assignment_count(const MultibranchedSurface& x);

/// Lazily enumerates all cyclic assignments in a fixed deterministic order:
/// per branch the first prong stays fixed and the tail runs through
/// lexicographic permutations, branch 0 varying fastest.
class AssignmentEnumerator {
public:
    explicit AssignmentEnumerator(const MultibranchedSurface& x);

    const Int& total() const { return total_; }

    /// Emit the next assignment; false once exhausted.
    bool next(CyclicAssignment& out);

    /// Reposition to the assignment of the given rank. Requires rank < total()
    /// and total() to fit in 64 bits.
    void seek(std::uint64_t rank);

private:
    const MultibranchedSurface* x_;
    std::vector<std::vector<Prong>> prongs_;          // per branch, deterministic order
    std::vector<std::vector<std::size_t>> tails_;     // permuted indices 1..k-1
    std::vector<std::uint64_t> counts_;               // (k-1)! per branch (when it fits)
    Int total_;
    bool done_ = false;
};

/// The annulus joins induced by an assignment, grouped in branch order, each
/// branch's joins following the cyclic order (pair i = prongs i, i+1 mod k).
std::vector<AnnulusJoin> annulus_joins(const MultibranchedSurface& x, const CyclicAssignment& a);

/// Glue the parallel copies along the assignment and return the abstract dual
/// graph. Accepts any rotation of each cycle. Throws std::logic_error if the
/// orientation bookkeeping ever becomes inconsistent (a modeling bug: with
/// rotational monodromy every glued surface is orientable).
DualGraph glue(const MultibranchedSurface& x, const CyclicAssignment& a);

struct BudgetExceeded : Error {
    std::uint64_t budget;
    BudgetExceeded(const std::string& what_, std::uint64_t budget_)
        : Error(what_), budget(budget_) {}
};

struct DistinctDualGraph {
    DualGraph graph;
    CyclicAssignment representative;  // least-rank assignment producing the graph
    std::uint64_t first_rank = 0;
    std::uint64_t multiplicity = 0;
};

struct EnumerationOptions {
    std::uint64_t budget = 1'000'000;
    unsigned threads = 1;
};

struct DualGraphEnumeration {
    std::vector<DistinctDualGraph> graphs;  // sorted by canonical key
    Int total_assignments;
};

/// Glue every assignment and deduplicate by canonical key. Deterministic and
/// independent of the worker count. Throws BudgetExceeded before any
/// enumeration when the assignment count is over budget.
DualGraphEnumeration enumerate_dual_graphs(const MultibranchedSurface& x,
                                           const EnumerationOptions& opts = {});

std::string side_node_token(const MultibranchedSurface& x, const SideNode& n);  // "e+"
std::string prong_token(const MultibranchedSurface& x, const Prong& p);         // "e[0.1]+"

/// DOT rendering: vertices labeled by their side-node sets, directed edges
/// labeled by sector id, stable ordering.
void write_dot(const MultibranchedSurface& x, const DualGraph& g, std::ostream& os);

}  // namespace mbs

#endif
