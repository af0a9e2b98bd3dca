#pragma once

#include <array>
#include <cstdint>

namespace dw {

/// Philox4x32-10 counter-based generator: a pure function of (key, counter), so
/// any stream position can be produced independently of call order or thread.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Standard normal deviate addressed by (seed, sample index, stream, position).
double counter_normal(std::uint64_t seed, std::uint64_t index, std::uint32_t stream,
                      std::uint32_t position) noexcept;

} // namespace dw
