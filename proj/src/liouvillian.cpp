#include "dicke/liouvillian.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace dicke {

GeneratorSpec GeneratorSpec::make(const ModelParams& params, Mode mode) {
  params.validate();
  GeneratorSpec spec;
  spec.mode = mode;
  spec.rates = rates_for_mode(params, mode);
  spec.omega0 = params.omega0;
  spec.n_atoms = params.n_atoms;
  return spec;
}

void apply_generator_kernel(const GeneratorSpec& spec,
                            const LadderCoefficients& f,
                            const Eigen::Ref<const Eigen::MatrixXcd>& rho,
                            Eigen::Ref<Eigen::MatrixXcd> out) {
  const int n = spec.n_atoms;
  const double xi = spec.xi();
  const Complex qp = spec.rates.q_plus;
  const Complex qm = spec.rates.q_minus;
  const Complex qpc = std::conj(qp);
  const Complex qmc = std::conj(qm);
  const Complex iw0(0.0, spec.omega0);

  auto at = [&](int i, int j) -> Complex {
    return (i < 0 || i > n || j < 0 || j > n) ? Complex(0.0, 0.0) : rho(i, j);
  };

  for (int mp = 0; mp <= n; ++mp) {
    for (int m = 0; m <= n; ++m) {
      const Complex r = rho(m, mp);
      // Eight bracket groups of the Dicke-basis Redfield equation; the
      // groups built from two raising or two lowering operators carry xi.
      Complex sum =
          xi * qp * (f(m - 1) * f(m - 2) * at(m - 2, mp) -
                     f(m - 1) * f(mp) * at(m - 1, mp + 1)) +
          qm * (f(m - 1) * f(m - 1) * r - f(m) * f(mp) * at(m + 1, mp + 1)) +
          qp * (f(m) * f(m) * r - f(m - 1) * f(mp - 1) * at(m - 1, mp - 1)) +
          xi * qm * (f(m) * f(m + 1) * at(m + 2, mp) -
                     f(m) * f(mp - 1) * at(m + 1, mp - 1)) +
          xi * qmc * (f(mp + 1) * f(mp) * at(m, mp + 2) -
                      f(m - 1) * f(mp) * at(m - 1, mp + 1)) +
          qmc * (f(mp - 1) * f(mp - 1) * r - f(m) * f(mp) * at(m + 1, mp + 1)) +
          qpc * (f(mp) * f(mp) * r - f(m - 1) * f(mp - 1) * at(m - 1, mp - 1)) +
          xi * qpc * (f(mp - 2) * f(mp - 1) * at(m, mp - 2) -
                      f(m) * f(mp - 1) * at(m + 1, mp - 1));
      out(m, mp) = -iw0 * double(m - mp) * r - sum;
    }
  }
}

Eigen::MatrixXcd apply_generator(const GeneratorSpec& spec,
                                 const Eigen::MatrixXcd& rho) {
  if (rho.rows() != spec.dim() || rho.cols() != spec.dim())
    throw std::invalid_argument("apply_generator: density matrix has dimension " +
                                std::to_string(rho.rows()) + ", expected " +
                                std::to_string(spec.dim()));
  if (hermiticity_drift(rho) > 1e-9)
    throw std::invalid_argument("apply_generator: input is not Hermitian to 1e-9");
  const LadderCoefficients f(spec.n_atoms);
  Eigen::MatrixXcd out(spec.dim(), spec.dim());
  apply_generator_kernel(spec, f, rho, out);
  return out;
}

ParitySectors parity_sectors(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  ParitySectors sectors;
  for (int m = 0; m <= n_atoms; ++m)
    for (int mp = 0; mp <= n_atoms; ++mp)
      (((m - mp) & 1) == 0 ? sectors.even : sectors.odd).emplace_back(m, mp);
  return sectors;
}

namespace {

// Collected stencil: coefficient of rho(i, j) in drho(m, mp)/dt, as
// (di, dj, coefficient) relative offsets. Derived by gathering the eight
// bracket groups; kept separate from apply_generator_kernel so the two
// routes cross-check each other.
struct StencilTerm {
  int di, dj;
  Complex coef;
};

void collect_stencil(const GeneratorSpec& spec, const LadderCoefficients& f,
                     int m, int mp, std::vector<StencilTerm>& terms) {
  const double xi = spec.xi();
  const Complex qp = spec.rates.q_plus;
  const Complex qm = spec.rates.q_minus;
  const Complex qpc = std::conj(qp);
  const Complex qmc = std::conj(qm);

  terms.clear();
  const Complex self = Complex(0.0, -spec.omega0 * double(m - mp)) -
                       (qm * f(m - 1) * f(m - 1) + qp * f(m) * f(m) +
                        qmc * f(mp - 1) * f(mp - 1) + qpc * f(mp) * f(mp));
  terms.push_back({0, 0, self});
  terms.push_back({-2, 0, -xi * qp * f(m - 1) * f(m - 2)});
  terms.push_back({-1, +1, xi * (qp + qmc) * f(m - 1) * f(mp)});
  terms.push_back({+1, +1, (qm + qmc) * f(m) * f(mp)});
  terms.push_back({-1, -1, (qp + qpc) * f(m - 1) * f(mp - 1)});
  terms.push_back({+2, 0, -xi * qm * f(m) * f(m + 1)});
  terms.push_back({+1, -1, xi * (qm + qpc) * f(m) * f(mp - 1)});
  terms.push_back({0, +2, -xi * qmc * f(mp + 1) * f(mp)});
  terms.push_back({0, -2, -xi * qpc * f(mp - 2) * f(mp - 1)});
}

}  // namespace

VectorizedGenerator vectorized_generator(const GeneratorSpec& spec) {
  const int n = spec.n_atoms;
  if (n > 512)
    throw resource_error("vectorized_generator caps at N = 512 (" +
                         std::to_string(n) + " requested)");
  const int dim = n + 1;

  VectorizedGenerator gen;
  gen.n_atoms = n;
  gen.pair_to_index.assign(size_t(dim) * dim, -1);
  for (int m = 0; m < dim; ++m)
    for (int mp = 0; mp < dim; ++mp)
      if (((m - mp) & 1) == 0) {
        gen.pair_to_index[size_t(m) * dim + mp] = int(gen.index_to_pair.size());
        gen.index_to_pair.emplace_back(m, mp);
        if (m == mp) gen.population_rows.push_back(int(gen.index_to_pair.size()) - 1);
      }

  const LadderCoefficients f(n);
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(gen.index_to_pair.size() * 9);
  std::vector<StencilTerm> terms;
  for (size_t row = 0; row < gen.index_to_pair.size(); ++row) {
    const auto [m, mp] = gen.index_to_pair[row];
    collect_stencil(spec, f, m, mp, terms);
    for (const StencilTerm& t : terms) {
      const int i = m + t.di, j = mp + t.dj;
      if (i < 0 || i >= dim || j < 0 || j >= dim) continue;
      if (t.coef == Complex(0.0, 0.0)) continue;
      triplets.emplace_back(int(row), gen.pair_index(i, j), t.coef);
    }
  }
  gen.matrix.resize(int(gen.index_to_pair.size()), int(gen.index_to_pair.size()));
  gen.matrix.setFromTriplets(triplets.begin(), triplets.end());
  gen.matrix.makeCompressed();
  return gen;
}

Eigen::VectorXcd to_sector_vector(const VectorizedGenerator& gen,
                                  const Eigen::MatrixXcd& rho) {
  Eigen::VectorXcd vec(gen.size());
  for (int k = 0; k < gen.size(); ++k) {
    const auto [m, mp] = gen.index_to_pair[k];
    vec(k) = rho(m, mp);
  }
  return vec;
}

Eigen::MatrixXcd from_sector_vector(const VectorizedGenerator& gen,
                                    const Eigen::VectorXcd& vec) {
  const int dim = gen.n_atoms + 1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < gen.size(); ++k) {
    const auto [m, mp] = gen.index_to_pair[k];
    rho(m, mp) = vec(k);
  }
  return rho;
}

void dump_generator(const VectorizedGenerator& gen, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  char line[128];
  for (int col = 0; col < gen.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(gen.matrix, col); it;
         ++it) {
      std::snprintf(line, sizeof line, "%d %d %.16e %.16e\n", int(it.row()),
                    int(it.col()), it.value().real(), it.value().imag());
      out << line;
    }
  }
  if (!out.good()) throw std::runtime_error("write to '" + path + "' failed");
}

Eigen::MatrixXcd effective_hamiltonian(const GeneratorSpec& spec) {
  if (spec.mode == Mode::Full)
    throw unsupported_error(
        "effective_hamiltonian: Full mode has no standalone coherent part "
        "(it is only defined through the full generator)");
  const int n = spec.n_atoms;
  const double spin = 0.5 * n;
  const Complex q0 = spec.rates.q0(), q1 = spec.rates.q1();

  if (spec.mode == Mode::LargeDetuning) {
    Eigen::MatrixXcd sx = sx_matrix(n);
    return spec.omega0 * sz_matrix(n) + 4.0 * q0.imag() * (sx * sx);
  }
  // Secular (and secular-large-detuning, where q1 = 0): diagonal in S^z,
  // with (S^x)^2 + (S^y)^2 = S(S+1) - (S^z)^2.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int m = 0; m <= n; ++m) {
    const double mval = double(m) - spin;
    h(m, m) = (spec.omega0 - 2.0 * q1.imag()) * mval +
              2.0 * q0.imag() * (spin * (spin + 1.0) - mval * mval);
  }
  return h;
}

}  // namespace dicke
