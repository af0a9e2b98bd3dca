#pragma once

// Brute-force 2^N exact diagonalisation of the disordered open chain, used only to
// certify the free-fermion path on small instances. Owns its own Jacobi
// eigensolver so that it shares no code with the tridiagonal solver it checks.

#include "dw/model.hpp"
#include "dw/oracle.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dw::ed {

inline constexpr std::size_t kMaxSites = 12;

/// Dense real symmetric operator on N spins. Every operator needed here is real:
/// sigma^y enters only through sigma^y sigma^y = -(i sigma^y) (x) (i sigma^y).
class SpinOperatorMatrix {
public:
    /// Throws SizeCap above kMaxSites; validates symmetry to 1e-13.
    SpinOperatorMatrix(std::size_t sites, std::vector<double> entries);

    std::size_t sites() const noexcept { return sites_; }
    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
    const std::vector<double>& data() const noexcept { return data_; }
    double trace() const;

private:
    std::size_t sites_;
    std::size_t dim_;
    std::vector<double> data_;
};

/// 2x2 real local operators.
enum class LocalOp { I, X, Z, A /* i sigma^y = [[0,1],[-1,0]] */ };

/// Adds coefficient * (op_0 (x) op_1 (x) ... (x) op_{N-1}) to a dense 2^N x 2^N buffer.
/// Site 0 is the most significant factor.
void add_kron(std::vector<double>& dense, std::span<const LocalOp> ops, double coefficient);

SpinOperatorMatrix build_hamiltonian(const Realization& r, const ChainParams& p);

/// sum_l (sx_l sx_{l+1} + sy_l sy_{l+1}) / (N - 1).
SpinOperatorMatrix bond_operator(std::size_t sites);

struct ThermalObservables {
    double lnZ;
    double witness_signed;
};

ThermalObservables thermal_observables(const SpinOperatorMatrix& h, const ChainParams& p);

/// Eigenvalues (ascending) and orthonormal eigenvectors (row k) of a dense
/// symmetric matrix, by cyclic Jacobi on each connected block.
struct DenseEigen {
    std::vector<double> values;
    std::vector<double> vectors; // row-major dim x dim
};
DenseEigen jacobi_eigh(const SpinOperatorMatrix& h);

/// <psi| op |psi> for a complex state given as real and imaginary parts.
double expectation(const SpinOperatorMatrix& op, std::span<const double> re, std::span<const double> im);

} // namespace dw::ed
