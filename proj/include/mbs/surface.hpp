#ifndef MBS_SURFACE_HPP
#define MBS_SURFACE_HPP

#include "mbs/intmatrix.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mbs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Error in `.mbs` input. `line` is 1-based; 0 means the input as a whole.
struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& what_)
        : Error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what_ : what_),
          line(line_) {}
};

struct Branch {
    std::string id;  // oriented simple closed curve, orientation fixed by declaration
    bool operator==(const Branch&) const = default;
};

/// One boundary circle of a sector, covering a branch with a signed degree.
struct Attachment {
    std::size_t branch;  // index into MultibranchedSurface::branches
    long long degree;    // nonzero; sign relative to the declared orientations
    bool operator==(const Attachment&) const = default;
};

struct Sector {
    std::string id;
    unsigned long long genus = 0;        // metadata only; never read by the obstruction
    std::vector<Attachment> boundary;    // in boundary order
    bool operator==(const Sector&) const = default;
};

/// A compact orientable multibranched surface, combinatorially: branches
/// (circles), sectors (compact orientable surfaces with boundary) and the
/// signed covering degrees of each boundary circle. Declaration order is
/// significant; it fixes every row, column and prong ordering downstream.
/// Immutable by convention after construction.
struct MultibranchedSurface {
    std::vector<Branch> branches;
    std::vector<Sector> sectors;

    std::size_t branch_index(std::string_view id) const;  // throws std::out_of_range
    std::size_t sector_index(std::string_view id) const;  // throws std::out_of_range

    /// Connectivity of the bipartite sector-branch incidence graph.
    bool connected() const;

    /// Structural invariants: some sector, unique ids, nonempty boundaries,
    /// nonzero degrees, every branch referenced. Connectivity is checked only
    /// when `require_connected` (the theorem's hypothesis; generators may
    /// legitimately produce disconnected instances such as the two-sector
    /// wheel with n = 2). Throws std::invalid_argument.
    void validate(bool require_connected = true) const;

    bool operator==(const MultibranchedSurface&) const = default;
};

/// Parse the `.mbs` line format. Rejects structurally invalid and
/// disconnected surfaces; errors carry the offending line number.
MultibranchedSurface parse_mbs(std::istream& in);
MultibranchedSurface parse_mbs(const std::string& text);

/// Deterministic, parse-stable text: branches in declaration order, then each
/// sector followed by its attachments in boundary order.
std::string serialize_mbs(const MultibranchedSurface& x);

/// Sum of signed degrees of all attachments of the sector to the branch;
/// 0 when it is not attached.
Int algebraic_degree(const MultibranchedSurface& x, std::size_t sector, std::size_t branch);
Int algebraic_degree(const MultibranchedSurface& x, std::string_view sector_id,
                     std::string_view branch_id);

}  // namespace mbs

#endif
