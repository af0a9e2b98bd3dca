#include "dw/dense_ed.hpp"

#include "dw/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace dw::ed {

namespace {

void check_sites(std::size_t sites) {
    if (sites > kMaxSites)
        throw SizeCap("dense diagonalisation is capped at " + std::to_string(kMaxSites) + " sites, got " +
                      std::to_string(sites));
    if (sites < 2) throw InvalidArgument("a chain needs at least two sites");
}

std::array<double, 4> local_matrix(LocalOp op) {
    switch (op) {
    case LocalOp::I: return {1, 0, 0, 1};
    case LocalOp::X: return {0, 1, 1, 0};
    case LocalOp::Z: return {1, 0, 0, -1};
    case LocalOp::A: return {0, 1, -1, 0};
    }
    return {0, 0, 0, 0};
}

} // namespace

SpinOperatorMatrix::SpinOperatorMatrix(std::size_t sites, std::vector<double> entries)
    : sites_(sites), dim_(std::size_t{1} << std::min(sites, kMaxSites + 1)), data_(std::move(entries)) {
    check_sites(sites);
    if (data_.size() != dim_ * dim_) throw InvalidArgument("operator buffer does not match 2^N x 2^N");
    double asym = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i + 1; j < dim_; ++j)
            asym = std::max(asym, std::fabs(data_[i * dim_ + j] - data_[j * dim_ + i]));
    if (asym > 1e-13) throw ContractViolation("spin operator is not symmetric (" + std::to_string(asym) + ")");
}

double SpinOperatorMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
    return t;
}

void add_kron(std::vector<double>& dense, std::span<const LocalOp> ops, double coefficient) {
    const std::size_t n = ops.size();
    const std::size_t dim = std::size_t{1} << n;
    if (dense.size() != dim * dim) throw InvalidArgument("buffer does not match the operator string");
    std::vector<std::array<double, 4>> mats;
    mats.reserve(n);
    for (LocalOp op : ops) mats.push_back(local_matrix(op));

    // Entry (row, col) is the product of local entries; every local matrix used
    // here has exactly one nonzero per column, so each column has one row.
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t row = 0;
        double value = coefficient;
        for (std::size_t s = 0; s < n && value != 0.0; ++s) {
            const std::size_t shift = n - 1 - s;
            const std::size_t c = (col >> shift) & 1u;
            const auto& m = mats[s];
            std::size_t r;
            if (m[0 * 2 + c] != 0.0) {
                r = 0;
            } else if (m[1 * 2 + c] != 0.0) {
                r = 1;
            } else {
                value = 0.0;
                break;
            }
            value *= m[r * 2 + c];
            row |= r << shift;
        }
        if (value != 0.0) dense[row * dim + col] += value;
    }
}

namespace {
// (sx sx + sy sy) on bond (l, l+1), scaled, added to `dense`.
void add_flip_flop(std::vector<double>& dense, std::size_t sites, std::size_t l, double scale) {
    std::vector<LocalOp> ops(sites, LocalOp::I);
    ops[l] = ops[l + 1] = LocalOp::X;
    add_kron(dense, ops, scale);
    ops[l] = ops[l + 1] = LocalOp::A;
    add_kron(dense, ops, -scale);
}
} // namespace

SpinOperatorMatrix build_hamiltonian(const Realization& r, const ChainParams& p) {
    const std::size_t n = r.sites();
    check_sites(n);
    if (r.couplings.size() + 1 != n) throw InvalidArgument("malformed realization");
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> h(dim * dim, 0.0);
    for (std::size_t l = 0; l + 1 < n; ++l) add_flip_flop(h, n, l, -0.5 * (p.J() + r.couplings[l]));
    for (std::size_t l = 0; l < n; ++l) {
        std::vector<LocalOp> ops(n, LocalOp::I);
        ops[l] = LocalOp::Z;
        add_kron(h, ops, -(p.B() + r.fields[l]));
    }
    return SpinOperatorMatrix(n, std::move(h));
}

SpinOperatorMatrix bond_operator(std::size_t sites) {
    check_sites(sites);
    const std::size_t dim = std::size_t{1} << sites;
    std::vector<double> o(dim * dim, 0.0);
    const double scale = 1.0 / static_cast<double>(sites - 1);
    for (std::size_t l = 0; l + 1 < sites; ++l) add_flip_flop(o, sites, l, scale);
    return SpinOperatorMatrix(sites, std::move(o));
}

namespace {

// Cyclic Jacobi on a small dense symmetric block (row-major, size m).
void jacobi_block(std::vector<double>& a, std::vector<double>& v, std::size_t m) {
    v.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) v[i * m + i] = 1.0;
    double scale = 0.0;
    for (double x : a) scale += x * x;
    scale = std::sqrt(scale);
    if (scale == 0.0 || m == 1) return;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) off += a[i * m + j] * a[i * m + j];
        if (std::sqrt(off) <= 1e-14 * scale) return;

        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = a[p * m + q];
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    const double akp = a[k * m + p], akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double apk = a[p * m + k], aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double vkp = v[k * m + p], vkq = v[k * m + q];
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
                a[p * m + q] = a[q * m + p] = 0.0;
            }
        }
    }
    throw EigenConvergence("Jacobi iteration did not converge in 100 sweeps");
}

// Connected components of the nonzero pattern.
std::vector<std::vector<std::size_t>> blocks_of(const SpinOperatorMatrix& h) {
    const std::size_t dim = h.dim();
    std::vector<std::size_t> label(dim, dim);
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < dim; ++start) {
        if (label[start] != dim) continue;
        const std::size_t id = blocks.size();
        blocks.emplace_back();
        stack.push_back(start);
        label[start] = id;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            blocks[id].push_back(i);
            for (std::size_t j = 0; j < dim; ++j) {
                if (label[j] == dim && h(i, j) != 0.0) {
                    label[j] = id;
                    stack.push_back(j);
                }
            }
        }
        std::sort(blocks[id].begin(), blocks[id].end());
    }
    return blocks;
}

} // namespace

DenseEigen jacobi_eigh(const SpinOperatorMatrix& h) {
    const std::size_t dim = h.dim();
    std::vector<double> values;
    std::vector<std::vector<double>> vecs;
    values.reserve(dim);
    vecs.reserve(dim);
    for (const auto& block : blocks_of(h)) {
        const std::size_t m = block.size();
        std::vector<double> a(m * m), v;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) a[i * m + j] = h(block[i], block[j]);
        jacobi_block(a, v, m);
        for (std::size_t k = 0; k < m; ++k) {
            values.push_back(a[k * m + k]);
            std::vector<double> full(dim, 0.0);
            for (std::size_t i = 0; i < m; ++i) full[block[i]] = v[i * m + k];
            vecs.push_back(std::move(full));
        }
    }
    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    DenseEigen out;
    out.values.resize(dim);
    out.vectors.resize(dim * dim);
    for (std::size_t k = 0; k < dim; ++k) {
        out.values[k] = values[order[k]];
        std::copy(vecs[order[k]].begin(), vecs[order[k]].end(), out.vectors.begin() + static_cast<std::ptrdiff_t>(k * dim));
    }
    return out;
}

ThermalObservables thermal_observables(const SpinOperatorMatrix& h, const ChainParams& p) {
    const DenseEigen eig = jacobi_eigh(h);
    const std::size_t dim = h.dim();
    const SpinOperatorMatrix bonds = bond_operator(h.sites());

    const double beta = p.beta();
    const double e0 = eig.values.front();
    std::vector<double> boltzmann(dim);
    double z = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        boltzmann[k] = std::exp(-beta * (eig.values[k] - e0));
        z += boltzmann[k];
    }

    double acc = 0.0;
    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < dim; ++k) {
        if (boltzmann[k] == 0.0) continue;
        const double* v = eig.vectors.data() + k * dim;
        support.clear();
        for (std::size_t i = 0; i < dim; ++i)
            if (v[i] != 0.0) support.push_back(i);
        double quad = 0.0;
        for (std::size_t i : support)
            for (std::size_t j : support) quad += v[i] * bonds(i, j) * v[j];
        acc += boltzmann[k] * quad;
    }
    return {-beta * e0 + std::log(z), acc / z};
}

double expectation(const SpinOperatorMatrix& op, std::span<const double> re, std::span<const double> im) {
    const std::size_t dim = op.dim();
    if (re.size() != dim || im.size() != dim) throw InvalidArgument("state does not match operator dimension");
    // For real symmetric op the cross terms cancel.
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        double r = 0.0, s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            r += op(i, j) * re[j];
            s += op(i, j) * im[j];
        }
        acc += re[i] * r + im[i] * s;
    }
    return acc;
}

} // namespace dw::ed
