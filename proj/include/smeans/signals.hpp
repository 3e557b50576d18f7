#pragma once

// Test signals: real, compactly supported inside the cell with the L/8
// margin, defined as continuous functions so that refinement samples the same
// function (except fractional, whose spectrum is built on the lattice).

#include <cstdint>
#include <string>

#include "smeans/grid_fourier.hpp"

namespace smeans {

/// Ids: "bump[:R]", "truncated_cone[:R]", "random_bandlimited:<seed>:<band>",
/// "fractional:<gamma>". R defaults to L/4 and must not exceed 3L/8.
GridFunction make_signal(const std::string& id, const GridSpec& spec);

GridFunction bump_signal(const GridSpec& spec, double radius);
GridFunction truncated_cone_signal(const GridSpec& spec, double radius);
/// Window times a sum of 8 cosines with integer wavevector components in
/// [-band, band] (units of 2 pi / L) and seeded amplitudes and phases.
GridFunction random_bandlimited_signal(const GridSpec& spec, std::uint64_t seed, int band);
/// Window times the inverse transform of (1 + |y|^2)^(-gamma/2).
GridFunction fractional_signal(const GridSpec& spec, double gamma);

/// Smooth radial window used by the random and fractional signals:
/// 1 on |x| <= L/4, 0 on |x| >= 3L/8.
double signal_window(const GridSpec& spec, const Point& x);

}  // namespace smeans
