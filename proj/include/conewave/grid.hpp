#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "conewave/region.hpp"

namespace conewave {

using cplx = std::complex<double>;

/// Periodic (t, x1, x2) lattice. Frequencies live on the dual lattice with
/// spacings dtau = 2 pi / time_period and dxi = 2 pi / spatial_period.
struct GridSpec {
  int nx = 16;
  int nt = 16;
  double spatial_period = 6.283185307179586;
  double time_period = 6.283185307179586;

  double dxi() const;
  double dtau() const;
  double dx() const { return spatial_period / nx; }
  double dt() const { return time_period / nt; }
  std::size_t spatial_size() const { return static_cast<std::size_t>(nx) * nx; }
  std::size_t size() const { return static_cast<std::size_t>(nt) * spatial_size(); }

  /// Throws std::invalid_argument unless nx, nt are powers of two >= 8 and
  /// both periods are positive.
  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// Spatial part of a grid; nt and time_period are irrelevant for it.
struct SpatialGrid {
  int nx = 16;
  double period = 6.283185307179586;

  double dxi() const;
  double dx() const { return period / nx; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * nx; }
  void validate() const;

  bool operator==(const SpatialGrid&) const = default;
};

inline SpatialGrid spatial_of(const GridSpec& g) { return {g.nx, g.spatial_period}; }

enum class Rep { kPhysical, kFrequency };
enum class Direction { kForward, kInverse };

/// Standard FFT order: index i of an n-point axis carries signed frequency
/// i for i < n/2 and i - n otherwise. The Nyquist index -n/2 is its own
/// negative on the lattice.
inline int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }
inline int wrap_index(int k, int n) { return ((k % n) + n) % n; }

/// Values indexed (t, x1, x2) or (tau, xi1, xi2), last index fastest.
/// Frequency values are unitary DFT coefficients of the physical samples.
struct SpaceTimeField {
  GridSpec grid;
  Rep rep = Rep::kPhysical;
  std::vector<cplx> values;

  SpaceTimeField() = default;
  SpaceTimeField(const GridSpec& g, Rep r);

  std::size_t index(int it, int i1, int i2) const {
    return (static_cast<std::size_t>(it) * grid.nx + i1) * grid.nx + i2;
  }
  cplx& at(int it, int i1, int i2) { return values[index(it, i1, i2)]; }
  const cplx& at(int it, int i1, int i2) const { return values[index(it, i1, i2)]; }

  /// Frequency coordinate (tau, xi1, xi2) of a lattice index.
  Point3 frequency(int it, int i1, int i2) const;
};

struct SpatialField {
  SpatialGrid grid;
  Rep rep = Rep::kPhysical;
  std::vector<cplx> values;

  SpatialField() = default;
  SpatialField(const SpatialGrid& g, Rep r);

  std::size_t index(int i1, int i2) const { return static_cast<std::size_t>(i1) * grid.nx + i2; }
  cplx& at(int i1, int i2) { return values[index(i1, i2)]; }
  const cplx& at(int i1, int i2) const { return values[index(i1, i2)]; }

  Vec2 frequency(int i1, int i2) const;
};

/// Unitary DFT: forward maps physical to frequency, inverse the reverse.
/// Throws std::logic_error when the field's rep is not the direction's source.
SpaceTimeField transform(const SpaceTimeField& field, Direction dir);
SpatialField transform(const SpatialField& field, Direction dir);

/// In-place unitary DFT of a row-major array with the given extents. sign is
/// -1 (forward) or +1 (inverse). Plans are cached per thread.
void unitary_dft(std::vector<cplx>& data, const std::vector<int>& dims, int sign);

/// Multiplies by the sharp indicator of `region` sampled at lattice points.
SpaceTimeField project(const SpaceTimeField& field, const FrequencyRegion& region);

/// F^N, F^{N,L} or F^{N,L,±}: band <xi> in [N, 2N) (or |xi| with kMagnitude),
/// optionally <|tau| - |xi|> in [L, 2L), optionally the half-space ±tau >= 0
/// with tau = 0 in the + class. N and L must be dyadic.
SpaceTimeField dyadic_restrict(const SpaceTimeField& field, double N, std::optional<double> L = {},
                               std::optional<Sign> sign = {},
                               BandMeasure measure = BandMeasure::kBracket);
SpatialField dyadic_restrict(const SpatialField& field, double N,
                             BandMeasure measure = BandMeasure::kBracket);

/// Dyadic values 1, 2, 4, ... up to the first band that covers every lattice
/// point of the field (for the bracket measure).
std::vector<double> dyadic_bands(const GridSpec& g);
std::vector<double> modulation_bands(const GridSpec& g);

/// Continuum-normalised transform density on the frequency lattice:
/// f^(xi_k) ~ integral of f(x) e^{-i x.xi_k} dx, i.e. the unitary
/// coefficient times dx^2 * nx. The inverse helper undoes it.
SpatialField spectral_density(const SpatialField& frequency_field);
SpatialField from_spectral_density(const SpatialField& density);

}  // namespace conewave
