#include "mbs/surface.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mbs {

namespace {

bool valid_id(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

long long parse_ll(const std::string& tok, int line, const char* what) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, std::string("expected ") + what + ", got '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError(line, std::string("expected ") + what + ", got '" + tok + "'");
    return v;
}

}  // namespace

std::size_t MultibranchedSurface::branch_index(std::string_view id) const {
    for (std::size_t i = 0; i < branches.size(); ++i)
        if (branches[i].id == id) return i;
    throw std::out_of_range("unknown branch '" + std::string(id) + "'");
}

std::size_t MultibranchedSurface::sector_index(std::string_view id) const {
    for (std::size_t i = 0; i < sectors.size(); ++i)
        if (sectors[i].id == id) return i;
    throw std::out_of_range("unknown sector '" + std::string(id) + "'");
}

bool MultibranchedSurface::connected() const {
    if (sectors.empty()) return false;
    // Nodes: sectors [0, S), branches [S, S+B). BFS over attachments.
    const std::size_t s = sectors.size(), b = branches.size();
    std::vector<char> seen(s + b, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        if (v < s) {
            for (const Attachment& a : sectors[v].boundary)
                if (!seen[s + a.branch]) {
                    seen[s + a.branch] = 1;
                    stack.push_back(s + a.branch);
                }
        } else {
            const std::size_t br = v - s;
            for (std::size_t i = 0; i < s; ++i)
                if (!seen[i])
                    for (const Attachment& a : sectors[i].boundary)
                        if (a.branch == br) {
                            seen[i] = 1;
                            stack.push_back(i);
                            break;
                        }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

void MultibranchedSurface::validate(bool require_connected) const {
    if (sectors.empty()) throw std::invalid_argument("no sectors");
    std::unordered_set<std::string> ids;
    for (const Branch& b : branches) {
        if (!valid_id(b.id)) throw std::invalid_argument("invalid branch id '" + b.id + "'");
        if (!ids.insert(b.id).second)
            throw std::invalid_argument("duplicate branch id '" + b.id + "'");
    }
    ids.clear();
    std::vector<char> referenced(branches.size(), 0);
    for (const Sector& s : sectors) {
        if (!valid_id(s.id)) throw std::invalid_argument("invalid sector id '" + s.id + "'");
        if (!ids.insert(s.id).second)
            throw std::invalid_argument("duplicate sector id '" + s.id + "'");
        if (s.boundary.empty())
            throw std::invalid_argument("sector '" + s.id + "' has no attachments");
        for (const Attachment& a : s.boundary) {
            if (a.branch >= branches.size())
                throw std::invalid_argument("sector '" + s.id + "' references unknown branch");
            if (a.degree == 0)
                throw std::invalid_argument("sector '" + s.id + "' has a zero-degree attachment");
            referenced[a.branch] = 1;
        }
    }
    for (std::size_t i = 0; i < branches.size(); ++i)
        if (!referenced[i])
            throw std::invalid_argument("branch '" + branches[i].id + "' is not attached to any sector");
    if (require_connected && !connected())
        throw std::invalid_argument("surface is not connected");
}

MultibranchedSurface parse_mbs(std::istream& in) {
    MultibranchedSurface x;
    std::unordered_map<std::string, std::size_t> branch_ids, sector_ids;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::vector<std::string> tok = tokenize(raw);
        if (tok.empty()) continue;
        if (tok[0] == "branch") {
            if (tok.size() != 2) throw ParseError(line, "expected: branch ID");
            if (!valid_id(tok[1])) throw ParseError(line, "invalid id '" + tok[1] + "'");
            if (branch_ids.count(tok[1]))
                throw ParseError(line, "duplicate branch id '" + tok[1] + "'");
            branch_ids.emplace(tok[1], x.branches.size());
            x.branches.push_back({tok[1]});
        } else if (tok[0] == "sector") {
            if (tok.size() != 4 || tok[2] != "genus")
                throw ParseError(line, "expected: sector ID genus NONNEG-INT");
            if (!valid_id(tok[1])) throw ParseError(line, "invalid id '" + tok[1] + "'");
            if (sector_ids.count(tok[1]))
                throw ParseError(line, "duplicate sector id '" + tok[1] + "'");
            long long g = parse_ll(tok[3], line, "nonnegative genus");
            if (g < 0) throw ParseError(line, "genus must be nonnegative");
            sector_ids.emplace(tok[1], x.sectors.size());
            x.sectors.push_back({tok[1], static_cast<unsigned long long>(g), {}});
        } else if (tok[0] == "attach") {
            if (tok.size() != 4)
                throw ParseError(line, "expected: attach SECTOR-ID BRANCH-ID NONZERO-INT");
            auto si = sector_ids.find(tok[1]);
            if (si == sector_ids.end())
                throw ParseError(line, "unknown sector '" + tok[1] + "'");
            auto bi = branch_ids.find(tok[2]);
            if (bi == branch_ids.end())
                throw ParseError(line, "unknown branch '" + tok[2] + "'");
            long long d = parse_ll(tok[3], line, "nonzero integer degree");
            if (d == 0) throw ParseError(line, "attachment degree must be nonzero");
            x.sectors[si->second].boundary.push_back({bi->second, d});
        } else {
            throw ParseError(line, "unknown directive '" + tok[0] + "'");
        }
    }
    if (x.sectors.empty()) throw ParseError(0, "no sectors");
    for (const Sector& s : x.sectors)
        if (s.boundary.empty())
            throw ParseError(0, "sector '" + s.id + "' has no attachments");
    for (std::size_t i = 0; i < x.branches.size(); ++i) {
        bool referenced = false;
        for (const Sector& s : x.sectors)
            for (const Attachment& a : s.boundary) referenced |= (a.branch == i);
        if (!referenced)
            throw ParseError(0, "branch '" + x.branches[i].id + "' is not attached to any sector");
    }
    if (!x.connected()) throw ParseError(0, "surface is not connected");
    return x;
}

MultibranchedSurface parse_mbs(const std::string& text) {
    std::istringstream in(text);
    return parse_mbs(in);
}

std::string serialize_mbs(const MultibranchedSurface& x) {
    std::ostringstream os;
    for (const Branch& b : x.branches) os << "branch " << b.id << '\n';
    for (const Sector& s : x.sectors) {
        os << "sector " << s.id << " genus " << s.genus << '\n';
        for (const Attachment& a : s.boundary)
            os << "attach " << s.id << ' ' << x.branches[a.branch].id << ' ' << a.degree << '\n';
    }
    return os.str();
}

Int algebraic_degree(const MultibranchedSurface& x, std::size_t sector, std::size_t branch) {
    if (sector >= x.sectors.size()) throw std::out_of_range("sector index out of range");
    if (branch >= x.branches.size()) throw std::out_of_range("branch index out of range");
    Int sum = 0;
    for (const Attachment& a : x.sectors[sector].boundary)
        if (a.branch == branch) sum += a.degree;
    return sum;
}

Int algebraic_degree(const MultibranchedSurface& x, std::string_view sector_id,
                     std::string_view branch_id) {
    return algebraic_degree(x, x.sector_index(sector_id), x.branch_index(branch_id));
}

}  // namespace mbs
