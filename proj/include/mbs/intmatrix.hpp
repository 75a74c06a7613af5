#ifndef MBS_INTMATRIX_HPP
#define MBS_INTMATRIX_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace mbs {

// Arbitrary-precision integer. All linear algebra in this project is exact;
// overflow cannot occur.
using Int = boost::multiprecision::cpp_int;

/// Dense integer matrix, row-major. Any dimension may be zero.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntMatrix operator*(const IntMatrix& rhs) const;
    bool operator==(const IntMatrix&) const = default;

    /// Compact rendering, e.g. "[[0,1],[1,0]]". An empty matrix renders as "[]".
    std::string str() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> data_;
};

/// Exact determinant of a square matrix (Bareiss). det of the 0x0 matrix is 1.
Int det(const IntMatrix& a);

/// gcd of the determinants of all rows()-sized column selections of `a`.
/// Conventions: 1 if a has no rows (the empty minor), 0 if rows() > cols()
/// or every maximal minor vanishes. Always nonnegative.
Int minor_gcd(const IntMatrix& a);

/// u * a * v == s with s diagonal, nonnegative, each entry dividing the next,
/// and u, v unimodular. Verified by multiplication before returning.
struct SmithNormalForm {
    IntMatrix s, u, v;
};
SmithNormalForm smith_normal_form(const IntMatrix& a);

/// An n x m matrix b with a * b == identity, when one exists over the
/// integers; that is exactly when rows() <= cols() and minor_gcd(a) == 1.
/// The product a * b is re-verified before the certificate is returned.
std::optional<IntMatrix> right_inverse_certificate(const IntMatrix& a);

}  // namespace mbs

#endif
