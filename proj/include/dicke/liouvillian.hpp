// liouvillian.hpp: the atom-only Redfield generator on Dicke-basis density
// matrices, as a matrix-free stencil and as an explicit sparse matrix on the
// population parity sector.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dicke/model.hpp"
#include "dicke/spin_space.hpp"

namespace dicke {

// Everything the generator needs: the approximation mode fixes xi and
// whether Q1 was zeroed before assembly (see rates_for_mode).
struct GeneratorSpec {
  Mode mode = Mode::Full;
  RateSet rates;
  double omega0 = 0.0;
  int n_atoms = 1;

  static GeneratorSpec make(const ModelParams& params, Mode mode);

  double xi() const { return mode_xi(mode); }
  int dim() const { return n_atoms + 1; }
};

// drho/dt = L(rho): the -i omega0 (M - M') coherent term plus the eight
// Q-weighted bracket groups of the Dicke-basis Redfield equation, the
// counter-rotating groups tagged by xi. O(N^2) per application.
// No validation; rho and out must be (N+1) x (N+1) and distinct.
void apply_generator_kernel(const GeneratorSpec& spec,
                            const LadderCoefficients& f,
                            const Eigen::Ref<const Eigen::MatrixXcd>& rho,
                            Eigen::Ref<Eigen::MatrixXcd> out);

// Validated wrapper: checks dimension and Hermiticity (1e-9 relative).
Eigen::MatrixXcd apply_generator(const GeneratorSpec& spec,
                                 const Eigen::MatrixXcd& rho);

// Partition of index pairs (m, m') by parity of M - M' = m - m'. The even
// sector contains the populations; sizes are ceil((N+1)^2/2) and
// floor((N+1)^2/2). Pair order is row-major within each sector.
struct ParitySectors {
  std::vector<std::pair<int, int>> even;
  std::vector<std::pair<int, int>> odd;
};
ParitySectors parity_sectors(int n_atoms);

// The generator restricted to the even parity sector, assembled as a sparse
// matrix over the row-major enumeration of that sector (deterministic
// ordering, compressed storage).
struct VectorizedGenerator {
  Eigen::SparseMatrix<Complex> matrix;            // size = ceil((N+1)^2/2)
  std::vector<std::pair<int, int>> index_to_pair; // sector enumeration
  std::vector<int> pair_to_index;                 // (N+1)^2 entries, -1 = odd
  std::vector<int> population_rows;               // indices of (m, m)
  int n_atoms = 0;

  int size() const { return int(index_to_pair.size()); }
  int pair_index(int m, int mp) const {
    return pair_to_index[size_t(m) * (n_atoms + 1) + mp];
  }
};

// Soft resource cap: N <= 512 (ceil((N+1)^2/2) rows); throws resource_error.
VectorizedGenerator vectorized_generator(const GeneratorSpec& spec);

// Restrict a density matrix to the even-sector vector / scatter it back
// (odd sector zero-filled).
Eigen::VectorXcd to_sector_vector(const VectorizedGenerator& gen,
                                  const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd from_sector_vector(const VectorizedGenerator& gen,
                                    const Eigen::VectorXcd& vec);

// Coordinate-format text dump (one "row col re im" line per stored entry,
// 17 significant digits) for external verification.
void dump_generator(const VectorizedGenerator& gen, const std::string& path);

// Closed-form effective Hamiltonians:
//   Secular (and SecularLargeDetuning): (omega0 - 2 Q1'') S^z
//                                       + 2 Q0'' [(S^x)^2 + (S^y)^2]
//   LargeDetuning:                      omega0 S^z + 4 Q0'' (S^x)^2
// Full mode has no standalone coherent part; requesting it throws
// unsupported_error.
Eigen::MatrixXcd effective_hamiltonian(const GeneratorSpec& spec);

}  // namespace dicke
