#include "mbs/intmatrix.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace mbs {

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

Int gcd_int(Int a, Int b) {
    a = abs_int(a);
    b = abs_int(b);
    while (b != 0) {
        Int r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Lexicographically next k-combination of {0..n-1}; false when exhausted.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    if (k == 0) return false;
    std::size_t i = k;
    while (i-- > 0) {
        if (idx[i] + (k - i) < n) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
        for (long long v : r) data_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product shape mismatch");
    IntMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

std::string IntMatrix::str() const {
    if (rows_ == 0 || cols_ == 0) return "[]";
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i) os << ',';
        os << '[';
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << ',';
            os << (*this)(i, j);
        }
        os << ']';
    }
    os << ']';
    return os.str();
}

Int det(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("det of non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    IntMatrix m = a;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t pivot = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (m(i, k) != 0) {
                    pivot = i;
                    break;
                }
            if (pivot == k) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(pivot, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;  // exact division
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

Int minor_gcd(const IntMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m == 0) return 1;
    if (m > n) return 0;
    std::vector<std::size_t> cols(m);
    for (std::size_t j = 0; j < m; ++j) cols[j] = j;
    Int g = 0;
    do {
        IntMatrix sub(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) sub(i, j) = a(i, cols[j]);
        g = gcd_int(g, det(sub));
        if (g == 1) return g;
    } while (next_combination(cols, n));
    return g;
}

namespace {

// Row/column operation helpers that keep the transform matrices in sync.
// Row ops act on (a, u); column ops act on (a, v).
struct SnfState {
    IntMatrix a, u, v;

    void swap_rows(std::size_t r1, std::size_t r2) {
        if (r1 == r2) return;
        for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r1, j), a(r2, j));
        for (std::size_t j = 0; j < u.cols(); ++j) std::swap(u(r1, j), u(r2, j));
    }
    void swap_cols(std::size_t c1, std::size_t c2) {
        if (c1 == c2) return;
        for (std::size_t i = 0; i < a.rows(); ++i) std::swap(a(i, c1), a(i, c2));
        for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v(i, c1), v(i, c2));
    }
    void add_row(std::size_t dst, std::size_t src, const Int& factor) {
        for (std::size_t j = 0; j < a.cols(); ++j) a(dst, j) += factor * a(src, j);
        for (std::size_t j = 0; j < u.cols(); ++j) u(dst, j) += factor * u(src, j);
    }
    void add_col(std::size_t dst, std::size_t src, const Int& factor) {
        for (std::size_t i = 0; i < a.rows(); ++i) a(i, dst) += factor * a(i, src);
        for (std::size_t i = 0; i < v.rows(); ++i) v(i, dst) += factor * v(i, src);
    }
    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) = -a(r, j);
        for (std::size_t j = 0; j < u.cols(); ++j) u(r, j) = -u(r, j);
    }
};

}  // namespace

SmithNormalForm smith_normal_form(const IntMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    SnfState st{a, IntMatrix::identity(m), IntMatrix::identity(n)};
    const std::size_t r = std::min(m, n);

    for (std::size_t t = 0; t < r; ++t) {
        for (;;) {
            // Move a smallest-magnitude nonzero entry of the trailing block to (t, t).
            std::size_t pi = t, pj = t;
            Int best = 0;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    const Int& x = st.a(i, j);
                    if (x == 0) continue;
                    Int ax = x < 0 ? Int(-x) : x;
                    if (best == 0 || ax < best) {
                        best = std::move(ax);
                        pi = i;
                        pj = j;
                    }
                }
            if (best == 0) goto done;  // trailing block is zero
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);

            bool reduced = true;
            for (std::size_t i = t + 1; i < m; ++i)
                if (st.a(i, t) != 0) {
                    Int q = st.a(i, t) / st.a(t, t);
                    if (q != 0) st.add_row(i, t, -q);
                    if (st.a(i, t) != 0) reduced = false;  // remainder: pick it up next round
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (st.a(t, j) != 0) {
                    Int q = st.a(t, j) / st.a(t, t);
                    if (q != 0) st.add_col(j, t, -q);
                    if (st.a(t, j) != 0) reduced = false;
                }
            if (!reduced) continue;

            // Pivot must divide every remaining entry; fold an offender into row t.
            bool divides = true;
            for (std::size_t i = t + 1; i < m && divides; ++i)
                for (std::size_t j = t + 1; j < n && divides; ++j)
                    if (st.a(i, j) % st.a(t, t) != 0) {
                        st.add_row(t, i, 1);
                        divides = false;
                    }
            if (divides) break;
        }
        if (st.a(t, t) < 0) st.negate_row(t);
    }
done:

    // Everything off the diagonal must be gone by construction.
    SmithNormalForm out{std::move(st.a), std::move(st.u), std::move(st.v)};
    if (out.u * a * out.v != out.s) throw std::logic_error("SNF verification failed: UAV != S");
    Int du = det(out.u), dv = det(out.v);
    if (du != 1 && du != -1) throw std::logic_error("SNF verification failed: U not unimodular");
    if (dv != 1 && dv != -1) throw std::logic_error("SNF verification failed: V not unimodular");
    for (std::size_t i = 0; i < r; ++i) {
        if (out.s(i, i) < 0) throw std::logic_error("SNF verification failed: negative factor");
        if (i + 1 < r && out.s(i, i) != 0 && out.s(i + 1, i + 1) % out.s(i, i) != 0)
            throw std::logic_error("SNF verification failed: divisibility chain");
        if (i + 1 < r && out.s(i, i) == 0 && out.s(i + 1, i + 1) != 0)
            throw std::logic_error("SNF verification failed: zero before nonzero factor");
    }
    for (std::size_t i = 0; i < out.s.rows(); ++i)
        for (std::size_t j = 0; j < out.s.cols(); ++j)
            if (i != j && out.s(i, j) != 0) throw std::logic_error("SNF verification failed: not diagonal");
    return out;
}

std::optional<IntMatrix> right_inverse_certificate(const IntMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m > n) return std::nullopt;
    SmithNormalForm snf = smith_normal_form(a);
    for (std::size_t i = 0; i < m; ++i)
        if (snf.s(i, i) != 1) return std::nullopt;

    // U A V = S = [I_m | 0], so B = V S^+ U satisfies A B = I_m.
    IntMatrix splus(n, m);
    for (std::size_t i = 0; i < m; ++i) splus(i, i) = 1;
    IntMatrix b = snf.v * (splus * snf.u);
    if (a * b != IntMatrix::identity(m))
        throw std::logic_error("right inverse certificate failed verification");
    return b;
}

}  // namespace mbs
