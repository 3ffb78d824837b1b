#pragma once

#include <cstdint>
#include <vector>

#include "xychain/types.hpp"

namespace xychain {

// Fermionic mode phase phi_k = 2 pi k / L - pi (N_L + 1) / (2L), k = 1..L.
// R sector: phi_k = zeta_k; NS sector: phi_k = zeta_k - pi/L.
double mode_phase(int k, const ChainParams& params, Sector sector);

// epsilon_k = sqrt((h - J cos phi_k)^2 + gamma^2 J^2 sin^2 phi_k).
double single_particle_energy(const ChainParams& params, Sector sector, int k);

// theta_k = atan2(gamma J sin phi_k, h - J cos phi_k), branch (-pi, pi].
// Raises GaplessMode when both arguments vanish within 1e-14.
double bogoliubov_angle(const ChainParams& params, Sector sector, int k);

struct SingleParticleSpectrum {
  ChainParams params;
  Sector sector = Sector::ns;
  std::vector<double> phase;   // phi_k, index k-1
  std::vector<double> energy;  // epsilon_k >= 0
  std::vector<double> angle;   // theta_k; NaN at gapless modes
};

SingleParticleSpectrum single_particle_spectrum(const ChainParams& params,
                                                Sector sector);

// E^GS = -1/2 sum_k epsilon_k (ascending k, compensated).
double sector_ground_energy(const ChainParams& params, Sector sector);

// E^GS + min_k epsilon_k.
double sector_first_excited(const ChainParams& params, Sector sector);

// delta E = E^GS_NS - E^GS_R, accumulated as paired per-mode differences so
// the exact degeneracy on the parity transition line survives roundoff.
double delta_gs(const ChainParams& params);

// Absolute scale below which a computed delta_gs is indistinguishable from
// summation roundoff at this L.
double delta_gs_noise_floor(const ChainParams& params);

enum class ParityFilter { any, even, odd };

struct ManyBodyLevel {
  double energy = 0;
  std::uint64_t occupation = 0;  // bitmask over modes k = 1..L (bit k-1)
  int parity = +1;               // (-1)^popcount(occupation)
};

struct ManyBodySpectrum {
  Sector sector = Sector::ns;
  std::vector<ManyBodyLevel> levels;  // ascending energy
  bool truncated = false;
};

// Levels E^GS + sum_{k in occupation} epsilon_k over occupation masks matching
// the parity filter, lowest `cap` of them (best-first expansion; complete
// enumeration when cap covers everything, guarded to L <= 24).
ManyBodySpectrum enumerate_many_body(const ChainParams& params, Sector sector,
                                     ParityFilter filter, std::uint64_t cap);

// Fermion parity (0 even / 1 odd) of the Bogoliubov vacuum: paired modes
// contribute evenly; a self-conjugate mode (sin phi = 0) is occupied in the
// vacuum iff h > J cos phi.
int vacuum_parity(const ChainParams& params, Sector sector);

// Occupation-parity class of a sector's levels that belong to the physical
// spin spectrum: popcount parity = [sector==R] xor (L mod 2) xor vacuum
// parity. Equivalently NS fills the N_L=+1 spin block and R the N_L=-1 block.
ParityFilter physical_parity_filter(const ChainParams& params, Sector sector);

// Sorted union of the physically selected NS and R levels (2^L values).
// Requires L <= 24.
std::vector<double> physical_spectrum(const ChainParams& params);

// Lowest `count` levels of the physical union, via capped enumerations.
std::vector<double> physical_lowest(const ChainParams& params, std::size_t count);

}  // namespace xychain
