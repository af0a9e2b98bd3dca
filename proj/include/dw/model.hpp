#pragma once

#include <string_view>

namespace dw {

/// Separable states satisfy |W| <= 1.
inline constexpr double kEntanglementBound = 1.0;
/// Largest disorder variance for which first-order perturbation theory is trusted.
inline constexpr double kPerturbativeDeltaMax = 1e-4;
/// Quadrature is refused below this temperature (Fermi step narrower than affordable grids).
inline constexpr double kMinTemperature = 5e-3;

/// Physical parameters of the XX chain in units k_B = hbar = 1.
class ChainParams {
public:
    ChainParams(double J, double B, double T);

    double J() const noexcept { return J_; }
    double B() const noexcept { return B_; }
    double T() const noexcept { return T_; }
    double beta() const noexcept { return beta_; }

    ChainParams with_J(double J) const { return {J, B_, T_}; }
    ChainParams with_B(double B) const { return {J_, B, T_}; }
    ChainParams with_T(double T) const { return {J_, B_, T}; }

private:
    double J_;
    double B_;
    double T_;
    double beta_;
};

enum class Channel { Coupling, Field };

/// Zero-mean Gaussian disorder on one channel.
class DisorderSpec {
public:
    DisorderSpec(Channel channel, double variance);

    Channel channel() const noexcept { return channel_; }
    double variance() const noexcept { return variance_; }
    bool perturbative_valid() const noexcept { return variance_ <= kPerturbativeDeltaMax; }

private:
    Channel channel_;
    double variance_;
};

enum class AverageKind { None, Quenched, Annealed };

std::string_view to_string(Channel c);
std::string_view to_string(AverageKind k);
Channel parse_channel(std::string_view s);
AverageKind parse_average(std::string_view s);

/// A witness value. `signed_value` is the quantity inside the outer absolute value;
/// the correction is added to it before the magnitude is taken.
class WitnessResult {
public:
    WitnessResult(double clean_part, double correction_part, AverageKind kind);
    /// Rejects any `magnitude` that is not exactly |clean_part + correction_part|.
    WitnessResult(double clean_part, double correction_part, double magnitude, AverageKind kind);

    double signed_value() const noexcept { return clean_ + correction_; }
    double magnitude() const noexcept { return magnitude_; }
    double clean_part() const noexcept { return clean_; }
    double correction_part() const noexcept { return correction_; }
    bool entangled() const noexcept { return magnitude_ > kEntanglementBound; }
    AverageKind kind() const noexcept { return kind_; }

private:
    double clean_;
    double correction_;
    double magnitude_;
    AverageKind kind_;
};

/// Single-fermion energy 2J cos q - 2B.
double dispersion(double q, const ChainParams& p) noexcept;

/// Fermi occupation 1/(exp(beta*energy)+1), evaluated without overflow.
double fermi(double energy, double beta) noexcept;

struct FermiDerivs {
    double n;   // occupation
    double dn;  // d n / d energy  = -beta n (1-n)
    double d2n; // d2n / d energy2 = beta^2 n (1-n) (1-2n)
};

FermiDerivs fermi_derivs(double energy, double beta) noexcept;

} // namespace dw
