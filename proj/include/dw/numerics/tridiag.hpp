#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dw::numerics {

/// Real symmetric tridiagonal matrix.
struct TridiagMatrix {
    std::vector<double> diag;
    std::vector<double> offdiag; // offdiag[i] couples i and i+1

    TridiagMatrix() = default;
    TridiagMatrix(std::vector<double> d, std::vector<double> e);

    std::size_t size() const noexcept { return diag.size(); }
    /// Max absolute row sum.
    double norm() const noexcept;
};

/// Eigenpairs sorted by ascending eigenvalue. `vectors` is row-major: row k is
/// the unit eigenvector belonging to values[k].
struct EigenSystem {
    std::vector<double> values;
    std::vector<double> vectors;

    std::size_t size() const noexcept { return values.size(); }
    std::span<const double> vector(std::size_t k) const {
        return {vectors.data() + k * values.size(), values.size()};
    }
};

enum class EigenMethod {
    /// Implicit QL with accumulated plane rotations, O(N^3).
    QL,
    /// QL eigenvalues, then one inverse-iteration solve per eigenvector with
    /// Gram-Schmidt inside clusters of close eigenvalues, O(N^2).
    InverseIteration,
};

/// Ascending eigenvalues by implicit QL without vector accumulation.
std::vector<double> tridiag_eigvals(const TridiagMatrix& m);

EigenSystem tridiag_eigh(const TridiagMatrix& m, EigenMethod method = EigenMethod::QL);

} // namespace dw::numerics
